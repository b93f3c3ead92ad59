"""Oracle suite behind the ``verify`` command

Each check runs a batch of small cases against a brute-force reference from
``services.oracles`` and records the number of failures.
"""

from __future__ import annotations

import logging
from typing import Callable, List, Optional

import numpy as np

from models.factors import FactorSet
from models.verification import CheckResult, VerificationReport
from services import oracles
from services.factors import compute_factors, dense_reconstruct, total_mass
from services.matching import lowrank_bipartite_match, matching_weight, pairing_weight, select_best_with_bound
from utils.errors import DegenerateTensorError

logger = logging.getLogger(__name__)

ALPHAS = (0.5, 0.8, 0.9)
EQUIVALENCE_TOLERANCE = 1e-12
MASS_TOLERANCE = 1e-10
RELATIVE_TOLERANCE = 1e-9


class _Tally:
    """Collects failures and the largest error of one check"""

    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.failures = 0
        self.max_error = 0.0
        self.detail: Optional[str] = None

    def record(self, ok: bool, error: float = 0.0, describe: Optional[Callable[[], str]] = None) -> None:
        self.cases += 1
        self.max_error = max(self.max_error, float(error))
        if not ok:
            self.failures += 1
            if self.detail is None and describe is not None:
                self.detail = describe()

    def result(self) -> CheckResult:
        return CheckResult(
            name=self.name, cases=self.cases, failures=self.failures, max_error=self.max_error, detail=self.detail
        )


def _random_seed_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    w = rng.random(n) + 1e-3
    return w / w.sum()


def check_factor_equivalence(rng: np.random.Generator, max_n: int, max_k: int, max_t: int, cases: int) -> List[CheckResult]:
    """Dense reconstruction vs explicit Kronecker iterations, and the unit-mass identity"""
    equivalence = _Tally("factor_equivalence")
    mass = _Tally("tensor_mass")
    for case in range(cases):
        k = int(rng.integers(2, max_k + 1))
        t = case % (max_t + 1)
        alpha = ALPHAS[(case // (max_t + 1)) % len(ALPHAS)]
        graphs = [oracles.random_graph(rng, int(rng.integers(1, max_n + 1))) for _ in range(k)]
        seeds = None
        if case % 2:
            seeds = [_random_seed_vector(rng, g.num_nodes) for g in graphs]

        f = compute_factors(graphs, alpha=alpha, iterations=t, seeds=seeds)
        dense = dense_reconstruct(f)
        expected = oracles.dense_pagerank_tensor(graphs, alpha, t, seeds)
        err = float(np.max(np.abs(dense - expected)))
        equivalence.record(
            err <= EQUIVALENCE_TOLERANCE,
            err,
            lambda: f"k={k} sizes={[g.num_nodes for g in graphs]} t={t} alpha={alpha}: max error {err:.3g}",
        )

        mass_err = abs(total_mass(f) - 1.0)
        mass.record(mass_err <= MASS_TOLERANCE, mass_err, lambda: f"k={k} t={t} alpha={alpha}: mass off by {mass_err:.3g}")
    return [equivalence.result(), mass.result()]


def check_rearrangement(rng: np.random.Generator, max_n: int, max_k: int, cases: int) -> List[CheckResult]:
    """Sorted product-sum is the maximum over permutations"""
    exhaustive = _Tally("rearrangement_exhaustive")
    for case in range(cases):
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(2, max_k + 1))
        vectors = [rng.random(n) for _ in range(k)]
        best = oracles.max_permuted_product_sum(vectors)
        sorted_sum = oracles.sorted_product_sum(vectors)
        gap = abs(best - sorted_sum)
        exhaustive.record(gap <= RELATIVE_TOLERANCE * max(1.0, best), gap, lambda: f"n={n} k={k}: gap {gap:.3g}")

    sampled = _Tally("rearrangement_sampled")
    for _ in range(max(1000, 5 * cases)):
        n = int(rng.integers(5, 8))
        k = int(rng.integers(2, 6))
        vectors = [rng.random(n) for _ in range(k)]
        sorted_sum = oracles.sorted_product_sum(vectors)
        excess = oracles.random_permuted_product_sum(vectors, rng) - sorted_sum
        sampled.record(excess <= RELATIVE_TOLERANCE * max(1.0, sorted_sum), max(0.0, excess))
    return [exhaustive.result(), sampled.result()]


def check_bound_soundness(rng: np.random.Generator, max_n: int, max_t: int, cases: int) -> List[CheckResult]:
    """optimum <= D * weight of the selected rank-1 matching"""
    tally = _Tally("d_bound_soundness")

    worked = FactorSet.from_matrices([np.array([[2.0, 1.0], [1.0, 2.0]]), np.array([[2.0, 2.0], [1.0, 1.0]])])
    _, certificate = select_best_with_bound(worked)
    tally.record(abs(certificate.D - 1.25) <= 1e-12, abs(certificate.D - 1.25), lambda: f"2x2 instance: D={certificate.D}")

    n_cap = max(max_n, 5)
    t_cap = min(max_t, 3)
    for _ in range(cases):
        sizes = [int(s) for s in rng.integers(1, n_cap + 1, size=3)]
        f = oracles.random_factor_set(rng, sizes, int(rng.integers(1, t_cap + 2)))
        try:
            alignment, certificate = select_best_with_bound(f)
        except DegenerateTensorError:
            continue
        optimum = oracles.exhaustive_matching_weight(dense_reconstruct(f))
        weight = matching_weight(alignment, f)
        bound = certificate.D * weight
        excess = optimum - bound
        tally.record(
            excess <= RELATIVE_TOLERANCE * max(1.0, optimum) or not np.isfinite(bound),
            max(0.0, excess),
            lambda: f"sizes={sizes}: optimum {optimum:.6g} > D {certificate.D:.6g} x {weight:.6g}",
        )
    return [tally.result()]


def check_bipartite_exactness(rng: np.random.Generator, max_n: int, cases: int) -> List[CheckResult]:
    """Window b = max(n1, n2) reproduces the exact maximum-weight matching"""
    tally = _Tally("bipartite_exactness")
    n_cap = max(2 * max_n, 8)
    for _ in range(cases):
        n1, n2 = (int(s) for s in rng.integers(1, n_cap + 1, size=2))
        r = int(rng.integers(1, 4))
        U, V = rng.random((n1, r)), rng.random((n2, r))
        pairs = lowrank_bipartite_match(U, V, b=max(n1, n2))
        got = pairing_weight(U, V, pairs)
        exact = oracles.exact_bipartite_weight(U, V)
        gap = abs(got - exact)
        ok = gap <= RELATIVE_TOLERANCE * max(1.0, exact) and len(pairs) == min(n1, n2)
        tally.record(ok, gap, lambda: f"n1={n1} n2={n2} r={r}: weight {got:.6g} vs exact {exact:.6g}")
    return [tally.result()]


def run_verification(max_n: int = 4, max_k: int = 3, max_t: int = 4, cases: int = 200, seed: int = 0) -> VerificationReport:
    """Run every oracle check; the report passes only when no case fails"""
    if max_n < 1 or max_k < 2 or max_t < 0 or cases < 1:
        raise ValueError("need max_n >= 1, max_k >= 2, max_t >= 0 and cases >= 1")

    rng = np.random.default_rng(seed)
    checks: List[CheckResult] = []
    checks += check_factor_equivalence(rng, max_n, max_k, max_t, cases)
    checks += check_rearrangement(rng, max_n, max_k, cases)
    checks += check_bound_soundness(rng, max_n, max_t, (5 * cases) // 2)
    checks += check_bipartite_exactness(rng, max_n, cases)

    for check in checks:
        log = logger.info if check.passed else logger.error
        log("%s: %d case(s), %d failure(s), max error %.3g", check.name, check.cases, check.failures, check.max_error or 0.0)

    passed = all(check.passed for check in checks)
    return VerificationReport(
        status="pass" if passed else "fail",
        max_n=max_n,
        max_k=max_k,
        max_t=max_t,
        seed=seed,
        checks=checks,
    )
