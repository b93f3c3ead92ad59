from __future__ import annotations

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from utils.config import config


class AlignMethod(str, Enum):
    D_APPROX = "d-approx"
    PROG = "prog"
    PROG_PLUS = "prog-plus"
    DEGREE = "degree"
    RANDOM = "random"
    PAIRWISE = "pairwise"


class GraphModel(str, Enum):
    ER = "er"
    PA = "pa"


class ExperimentConfig(BaseModel):
    """One point of a synthetic alignment experiment"""

    model: GraphModel = Field(GraphModel.ER, description="Reference graph generator")
    n: int = Field(500, ge=2, description="Nodes per network")
    avg_degree: float = Field(8.0, gt=0.0, description="Expected degree (er)")
    theta: int = Field(4, ge=1, le=5, description="Edges per new vertex (pa)")
    k: int = Field(5, ge=2, description="Number of networks")
    pe: Optional[float] = Field(None, ge=0.0, le=1.0, description="Absolute edge deletion probability")
    pe_over_n: Optional[float] = Field(None, ge=0.0, description="Edge deletion probability as c/n")
    alpha: float = Field(config.ALPHA, gt=0.0, lt=1.0, description="PageRank damping")
    iterations: int = Field(config.ITERATIONS, ge=0, description="Factor iterations t")
    b: int = Field(config.MATCH_WINDOW, ge=1, description="Bipartite matching window")
    trials: int = Field(1, ge=1, description="Number of trials")
    seed: int = Field(0, description="Base seed; trial i uses seed + i")
    methods: List[AlignMethod] = Field(
        default_factory=lambda: [AlignMethod.D_APPROX, AlignMethod.PROG, AlignMethod.PROG_PLUS],
        min_length=1,
        description="Methods to run",
    )
    shuffle: bool = Field(True, description="Relabel every instance randomly; off keeps the identity labelling")

    @model_validator(mode="after")
    def _check_ranges(self) -> "ExperimentConfig":
        if self.pe is not None and self.pe_over_n is not None:
            raise ValueError("give either pe or pe_over_n, not both")
        if self.model == GraphModel.PA and self.n < 5:
            raise ValueError("the pa model needs n >= 5")
        if self.model == GraphModel.ER and not self.avg_degree < self.n - 1:
            raise ValueError(f"avg_degree must be < n - 1 = {self.n - 1}")
        if self.edge_deletion_probability > 1.0:
            raise ValueError(f"pe_over_n / n = {self.edge_deletion_probability} exceeds 1")
        return self

    @property
    def edge_deletion_probability(self) -> float:
        if self.pe is not None:
            return self.pe
        c = 0.5 if self.pe_over_n is None else self.pe_over_n
        return c / self.n

    def trial_seed(self, trial: int) -> int:
        return self.seed + trial


class SweepRow(BaseModel):
    """Metrics of one (grid point, trial, method) run"""

    model: GraphModel
    n: int
    k: int
    p_e: float
    trial: int
    seed: int
    method: AlignMethod
    degree_weighted_recovery: Optional[float]
    normalized_overlap: float
    objective_weight: Optional[float]
    D_bound: Optional[float]
    aligned_tuple_count: int
    runtime_seconds: Optional[float] = None


class SweepSummary(BaseModel):
    """Median and 20th/80th percentiles of a metric over trials"""

    model: GraphModel
    n: int
    k: int
    p_e: float
    method: AlignMethod
    metric: str
    trials: int
    median: Optional[float]
    p20: Optional[float]
    p80: Optional[float]
