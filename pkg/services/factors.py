"""Exact low-rank CP factors of the multi-network IsoRank tensor

Starting the fixed-point iteration y <- alpha (P_k x ... x P_1) y + (1 - alpha) h
from y0 = h = u_k x ... x u_1, the t-th iterate is

    y(t) = sum_{j<t} (1 - alpha) alpha^j  (P_k^j u_k x ... x P_1^j u_1)
           + alpha^t (P_k^t u_k x ... x P_1^t u_1)

so factor i stores the columns c_j P_i^j u_i with the weight c_j split evenly
across the k modes through a k-th root.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from models.factors import FactorSet
from models.graph import Graph
from utils.config import config

logger = logging.getLogger(__name__)

DISTRIBUTION_TOLERANCE = 1e-9


def column_weights(alpha: float, iterations: int, k: int) -> np.ndarray:
    """c_j = ((1 - alpha) alpha^j)^(1/k) for j < t and c_t = alpha^(t/k)"""
    j = np.arange(iterations + 1, dtype=np.float64)
    weights = ((1.0 - alpha) * alpha ** j) ** (1.0 / k)
    weights[iterations] = alpha ** (iterations / k)
    return weights


def _check_seed(seed: np.ndarray, n: int, index: int) -> np.ndarray:
    seed = np.asarray(seed, dtype=np.float64)
    if seed.shape != (n,):
        raise ValueError(f"seed vector {index} has shape {seed.shape}, expected ({n},)")
    if np.any(seed < 0) or abs(seed.sum() - 1.0) > DISTRIBUTION_TOLERANCE:
        raise ValueError(f"seed vector {index} is not a probability distribution")
    return seed


def _power_columns(g: Graph, seed: np.ndarray, iterations: int) -> np.ndarray:
    """n x (t+1) matrix [u, P u, ..., P^t u]"""
    columns = np.empty((g.num_nodes, iterations + 1), dtype=np.float64)
    columns[:, 0] = seed
    for j in range(1, iterations + 1):
        columns[:, j] = g.stochastic_apply(columns[:, j - 1])
    return columns


def compute_factors(
    graphs: Sequence[Graph],
    alpha: Optional[float] = None,
    iterations: Optional[int] = None,
    seeds: Optional[Sequence[np.ndarray]] = None,
) -> FactorSet:
    """CP factors U_1..U_k whose implicit tensor is the t-th PageRank iterate"""
    alpha = config.ALPHA if alpha is None else alpha
    iterations = config.ITERATIONS if iterations is None else iterations

    k = len(graphs)
    if k < 2:
        raise ValueError(f"need at least 2 graphs, got {k}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0, got {iterations}")
    if seeds is not None and len(seeds) != k:
        raise ValueError(f"got {len(seeds)} seed vectors for {k} graphs")
    for i, g in enumerate(graphs):
        if g.num_nodes == 0:
            raise ValueError(f"graph {i} has no nodes")

    if seeds is None:
        seed_vectors = [np.full(g.num_nodes, 1.0 / g.num_nodes) for g in graphs]
    else:
        seed_vectors = [_check_seed(s, g.num_nodes, i) for i, (s, g) in enumerate(zip(seeds, graphs))]

    weights = column_weights(alpha, iterations, k)
    factors = []
    for g, seed in zip(graphs, seed_vectors):
        u = _power_columns(g, seed, iterations) * weights
        u.setflags(write=False)
        factors.append(u)

    logger.debug("computed %d factors, rank %d, alpha=%s", k, iterations + 1, alpha)
    return FactorSet(factors=factors, alpha=alpha, iterations=iterations, seed_vectors=seed_vectors)


def _check_index(f: FactorSet, idx: Sequence[int]) -> Tuple[int, ...]:
    if len(idx) != f.k:
        raise IndexError(f"index has {len(idx)} entries, tensor has {f.k} modes")
    for mode, (i, n) in enumerate(zip(idx, f.sizes)):
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of bounds for mode {mode} of size {n}")
    return tuple(int(i) for i in idx)


def implicit_entry(f: FactorSet, idx: Sequence[int]) -> float:
    """T(idx) = sum_j prod_i U_i[idx_i, j]"""
    idx = _check_index(f, idx)
    prod = np.ones(f.rank, dtype=np.float64)
    for u, i in zip(f.factors, idx):
        prod *= u[i]
    return float(prod.sum())


def dense_reconstruct(f: FactorSet, cap: Optional[int] = None) -> np.ndarray:
    """Materialize the n_1 x ... x n_k tensor (tests and verification only)"""
    cap = config.DENSE_TENSOR_CAP if cap is None else cap
    total = int(np.prod(f.sizes, dtype=object))
    if total > cap:
        raise ValueError(f"dense tensor would have {total} entries, cap is {cap}")

    acc = f.factors[0]
    for u in f.factors[1:]:
        acc = acc[..., np.newaxis, :] * u
    return acc.sum(axis=-1)


def total_mass(f: FactorSet) -> float:
    """Sum of all tensor entries, via products of column sums"""
    return float(np.prod(f.column_sums(), axis=0).sum())
