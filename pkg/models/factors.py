from __future__ import annotations

from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class FactorSet(BaseModel):
    """Nonnegative CP factors U_1..U_k of the multi-network alignment tensor

    The tensor is implicit: T(i_1, ..., i_k) = sum_j prod_m U_m[i_m, j].
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    factors: List[np.ndarray] = Field(..., description="k matrices, U_i of shape n_i x rank")
    alpha: float = Field(..., gt=0.0, lt=1.0, description="PageRank damping")
    iterations: int = Field(..., ge=0, description="Fixed-point iterations t (rank = t + 1)")
    seed_vectors: List[np.ndarray] = Field(..., description="Personalization vectors u_i")

    @model_validator(mode="after")
    def _check_factors(self) -> "FactorSet":
        if len(self.factors) < 2:
            raise ValueError("a FactorSet needs at least 2 factors")
        if len(self.seed_vectors) != len(self.factors):
            raise ValueError("one seed vector per factor is required")
        rank = self.iterations + 1
        for i, (u, seed) in enumerate(zip(self.factors, self.seed_vectors)):
            if u.ndim != 2 or u.shape[1] != rank:
                raise ValueError(f"factor {i} must have {rank} columns, got shape {u.shape}")
            if seed.shape != (u.shape[0],):
                raise ValueError(f"seed vector {i} does not match factor rows")
            if np.any(u < 0):
                raise ValueError(f"factor {i} has negative entries")
        return self

    @classmethod
    def from_matrices(cls, matrices: Sequence[np.ndarray], alpha: float = 0.5) -> "FactorSet":
        """Wrap arbitrary nonnegative factors (same column count) as a FactorSet

        Used for matching problems that do not come from graphs; 1-D inputs
        become single-column factors, seed vectors are uniform and
        iterations is rank - 1.
        """
        mats = []
        for m in matrices:
            m = np.array(m, dtype=np.float64)
            mats.append(m[:, np.newaxis] if m.ndim == 1 else m)
        ranks = {m.shape[1] for m in mats}
        if len(ranks) != 1:
            raise ValueError(f"all factors must have the same column count, got {sorted(ranks)}")
        rank = ranks.pop()
        for m in mats:
            m.setflags(write=False)
        seeds = [np.full(m.shape[0], 1.0 / m.shape[0]) if m.shape[0] else np.zeros(0) for m in mats]
        return cls(factors=mats, alpha=alpha, iterations=rank - 1, seed_vectors=seeds)

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def rank(self) -> int:
        return self.iterations + 1

    @property
    def sizes(self) -> List[int]:
        return [u.shape[0] for u in self.factors]

    def column_sums(self) -> np.ndarray:
        """(k, rank) array of per-factor column sums"""
        return np.vstack([u.sum(axis=0) for u in self.factors])

    def __repr__(self) -> str:
        return f"<FactorSet(k={self.k}, sizes={self.sizes}, rank={self.rank}, alpha={self.alpha})>"
