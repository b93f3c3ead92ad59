from __future__ import annotations

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.graph import Graph


class ProblemInstance(BaseModel):
    """k noisy copies of a reference graph with a known correspondence"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    reference: Graph = Field(..., description="Reference graph the instances are drawn from")
    instances: List[Graph] = Field(..., description="The k graphs to align")
    ground_truth: List[List[int]] = Field(
        ..., description="ground_truth[i][v] = reference node id of node v in instance i"
    )
    seed: int = Field(..., description="Seed the instances were drawn with")
    p_e: float = Field(..., ge=0.0, le=1.0, description="Edge deletion probability")

    @model_validator(mode="after")
    def _check_instances(self) -> "ProblemInstance":
        n = self.reference.num_nodes
        if len(self.instances) < 2:
            raise ValueError("a problem needs at least 2 instances")
        if len(self.ground_truth) != len(self.instances):
            raise ValueError("ground_truth needs one map per instance")
        for i, (g, truth) in enumerate(zip(self.instances, self.ground_truth)):
            if g.num_nodes != n:
                raise ValueError(f"instance {i} has {g.num_nodes} nodes, reference has {n}")
            if sorted(truth) != list(range(n)):
                raise ValueError(f"ground truth of instance {i} is not a permutation of 0..{n - 1}")
            if g.num_edges:
                mapped = np.asarray(truth, dtype=np.int64)[g.edges]
                present = np.asarray(self.reference.adjacency[mapped[:, 0], mapped[:, 1]]).ravel()
                if not np.all(present):
                    raise ValueError(f"instance {i} has edges missing from the reference")
        return self

    @property
    def k(self) -> int:
        return len(self.instances)

    @property
    def num_nodes(self) -> int:
        return self.reference.num_nodes

    def truth_arrays(self) -> List[np.ndarray]:
        return [np.asarray(t, dtype=np.int64) for t in self.ground_truth]

    @staticmethod
    def identity_truth(k: int, n: int) -> List[List[int]]:
        return [list(range(n)) for _ in range(k)]

    def describe(self, label: Optional[str] = None) -> str:
        edges = [g.num_edges for g in self.instances]
        prefix = f"{label}: " if label else ""
        return (
            f"{prefix}k={self.k} n={self.num_nodes} reference_edges={self.reference.num_edges} "
            f"instance_edges={min(edges)}..{max(edges)} p_e={self.p_e:.4g} seed={self.seed}"
        )
