from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class MetricsReport(BaseModel):
    """Quality metrics of one alignment"""

    degree_weighted_recovery: Optional[float] = Field(
        None, ge=0.0, le=1.0 + 1e-12, description="Ground-truth recovery weighted by degree (null without truth)"
    )
    normalized_overlap: float = Field(..., ge=0.0, le=1.0 + 1e-12, description="Conserved edges / edges of largest graph")
    aligned_tuple_count: int = Field(..., ge=0, description="Number of aligned tuples")
    objective_weight: Optional[float] = Field(None, ge=0.0, description="Alignment weight on the factor tensor")
    D_bound: Optional[float] = Field(None, ge=1.0, description="Approximation certificate, when available")

    model_config = {
        "json_schema_extra": {
            "example": {
                "degree_weighted_recovery": 0.97,
                "normalized_overlap": 0.91,
                "aligned_tuple_count": 500,
                "objective_weight": 0.0031,
                "D_bound": 1.04,
            }
        }
    }
