from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from models.factors import FactorSet


class Alignment(BaseModel):
    """Set of k-tuples of node indices, injective in every mode"""

    tuples: List[Tuple[int, ...]] = Field(default_factory=list, description="Aligned k-tuples")
    k: int = Field(..., ge=2, description="Number of aligned networks")

    model_config = {
        "json_schema_extra": {
            "example": {"tuples": [[0, 1, 2], [2, 2, 1], [1, 0, 0]], "k": 3}
        }
    }

    @model_validator(mode="after")
    def _check_injective(self) -> "Alignment":
        for row in self.tuples:
            if len(row) != self.k:
                raise ValueError(f"tuple {row} does not have {self.k} entries")
            if any(v < 0 for v in row):
                raise ValueError(f"tuple {row} has a negative node index")
        for mode in range(self.k):
            used = [row[mode] for row in self.tuples]
            if len(set(used)) != len(used):
                raise ValueError(f"mode {mode} uses a node more than once")
        return self

    @classmethod
    def from_array(cls, table: np.ndarray, k: Optional[int] = None) -> "Alignment":
        """Build from an (m, k) integer array, one tuple per row"""
        table = np.asarray(table, dtype=np.int64)
        if k is None:
            k = table.shape[1]
        table = table.reshape(-1, k)
        return cls(tuples=[tuple(int(v) for v in row) for row in table], k=k)

    @classmethod
    def empty(cls, k: int) -> "Alignment":
        return cls(tuples=[], k=k)

    def as_array(self) -> np.ndarray:
        if not self.tuples:
            return np.empty((0, self.k), dtype=np.int64)
        return np.asarray(self.tuples, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.tuples)


class BoundCertificate(BaseModel):
    """A-posteriori approximation certificate of the best rank-1 matching

    optimum weight <= D * weight of the selected matching.
    """

    d_values: List[List[float]] = Field(..., description="d_values[i][j] = (M_i . T_i) / (M_j . T_i)")
    selected_index: int = Field(..., ge=0, description="Index j* of the selected rank-1 matching")
    D: float = Field(..., ge=1.0, description="Approximation factor min_j max_i d_ij")

    model_config = {
        "json_schema_extra": {
            "example": {"d_values": [[1.0, 1.25], [1.25, 1.0]], "selected_index": 0, "D": 1.25}
        }
    }

    @model_validator(mode="after")
    def _check_bound(self) -> "BoundCertificate":
        d = np.asarray(self.d_values, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("d_values must be a square matrix")
        if not self.selected_index < d.shape[0]:
            raise ValueError("selected_index out of range")
        return self


class AlignmentResult(BaseModel):
    """Output of one aligner run"""

    method: str = Field(..., description="Method name")
    alignment: Alignment = Field(..., description="Computed alignment")
    certificate: Optional[BoundCertificate] = Field(None, description="D certificate (d-approx only)")
    runtime_seconds: Optional[float] = Field(None, ge=0.0, description="Wall-clock time, when recorded")
    factors: Optional[FactorSet] = Field(None, exclude=True, description="Factors the alignment was extracted from")
