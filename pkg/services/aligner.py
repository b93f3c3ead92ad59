from __future__ import annotations

import logging
import time
from typing import Optional, Sequence

from models.alignment import AlignmentResult
from models.experiment import AlignMethod
from models.graph import Graph
from services.baselines import degree_match, pairwise_consistent_match, random_match
from services.factors import compute_factors
from services.matching import ProgressiveVariant, progressive_match, select_best_with_bound
from utils.config import config

logger = logging.getLogger(__name__)


class NetworkAligner:
    """Runs one alignment method on k graphs with fixed parameters"""

    def __init__(
        self,
        alpha: Optional[float] = None,
        iterations: Optional[int] = None,
        b: Optional[int] = None,
        seed: int = 0,
        workers: Optional[int] = None,
        timed: bool = True,
    ):
        self.alpha = config.ALPHA if alpha is None else alpha
        self.iterations = config.ITERATIONS if iterations is None else iterations
        self.b = config.MATCH_WINDOW if b is None else b
        self.seed = seed
        self.workers = config.THREADS if workers is None else workers
        self.timed = timed

    def align(self, graphs: Sequence[Graph], method: AlignMethod | str) -> AlignmentResult:
        """
        Align ``graphs`` with ``method``

        Args:
            graphs: The k >= 2 networks
            method: One of d-approx, prog, prog-plus, degree, random, pairwise

        Returns:
            AlignmentResult; ``runtime_seconds`` is set only when timing is on
        """
        method = AlignMethod(method)
        started = time.perf_counter()

        certificate = None
        factors = None
        if method in (AlignMethod.D_APPROX, AlignMethod.PROG, AlignMethod.PROG_PLUS):
            factors = compute_factors(graphs, alpha=self.alpha, iterations=self.iterations)
            if method == AlignMethod.D_APPROX:
                alignment, certificate = select_best_with_bound(factors)
            else:
                variant = ProgressiveVariant.PRODUCT if method == AlignMethod.PROG else ProgressiveVariant.MIXTURE
                alignment = progressive_match(factors, variant=variant, b=self.b)
        elif method == AlignMethod.DEGREE:
            alignment = degree_match(graphs)
        elif method == AlignMethod.RANDOM:
            alignment = random_match(graphs, self.seed)
        else:
            alignment = pairwise_consistent_match(
                graphs, alpha=self.alpha, iterations=self.iterations, b=self.b, workers=self.workers
            )

        elapsed = time.perf_counter() - started
        logger.debug("%s aligned %d tuples across %d graphs in %.3fs", method.value, len(alignment), len(graphs), elapsed)
        return AlignmentResult(
            method=method.value,
            alignment=alignment,
            certificate=certificate,
            runtime_seconds=elapsed if self.timed else None,
            factors=factors,
        )

