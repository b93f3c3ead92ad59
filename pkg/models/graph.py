from __future__ import annotations

from typing import Iterable, Set, Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Graph(BaseModel):
    """Undirected simple graph on nodes 0..num_nodes-1

    Build instances with ``Graph.from_edges``; it drops self-loops, symmetrizes
    and collapses duplicates. The model is frozen and its arrays read-only.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    num_nodes: int = Field(..., ge=0, description="Number of nodes")
    edges: np.ndarray = Field(..., description="(m, 2) int array of unique pairs with u < v, sorted")
    adjacency: sp.csr_matrix = Field(..., description="Symmetric 0/1 adjacency, num_nodes x num_nodes")
    degrees: np.ndarray = Field(..., description="Degree of every node")

    @model_validator(mode="after")
    def _check_shapes(self) -> "Graph":
        n = self.num_nodes
        if self.edges.ndim != 2 or self.edges.shape[1] != 2:
            raise ValueError("edges must have shape (m, 2)")
        if self.edges.size and (self.edges.min() < 0 or self.edges.max() >= n):
            raise ValueError("edge endpoint outside 0..num_nodes-1")
        if self.edges.size and np.any(self.edges[:, 0] >= self.edges[:, 1]):
            raise ValueError("edges must be stored as (u, v) with u < v")
        if self.adjacency.shape != (n, n):
            raise ValueError(f"adjacency must be {n} x {n}")
        if self.degrees.shape != (n,):
            raise ValueError("degrees must have one entry per node")
        return self

    @classmethod
    def from_edges(cls, num_nodes: int, pairs: Iterable[Tuple[int, int]] | np.ndarray) -> "Graph":
        """Build a graph from (u, v) pairs; self-loops and duplicates are discarded"""
        arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= num_nodes):
            raise ValueError(f"edge endpoint outside 0..{num_nodes - 1}")

        arr = arr[arr[:, 0] != arr[:, 1]]
        arr = np.sort(arr, axis=1)
        arr = np.unique(arr, axis=0) if arr.size else np.empty((0, 2), dtype=np.int64)

        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        data = np.ones(rows.shape[0], dtype=np.float64)
        adjacency = sp.csr_matrix((data, (rows, cols)), shape=(num_nodes, num_nodes))
        degrees = np.bincount(rows, minlength=num_nodes).astype(np.int64)

        arr.setflags(write=False)
        degrees.setflags(write=False)
        return cls(num_nodes=num_nodes, edges=arr, adjacency=adjacency, degrees=degrees)

    @classmethod
    def empty(cls, num_nodes: int) -> "Graph":
        return cls.from_edges(num_nodes, np.empty((0, 2), dtype=np.int64))

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def nnz(self) -> int:
        """Symmetric nonzero count (each undirected edge counted twice)"""
        return 2 * self.num_edges

    @property
    def total_degree(self) -> int:
        return int(self.degrees.sum())

    def edge_set(self) -> Set[Tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def neighbors(self, v: int) -> np.ndarray:
        start, end = self.adjacency.indptr[v], self.adjacency.indptr[v + 1]
        return np.sort(self.adjacency.indices[start:end])

    def stochastic_apply(self, x: np.ndarray) -> np.ndarray:
        """Return P x for the column-stochastic P = A D^-1

        Degree-0 columns are replaced by the uniform distribution over all
        nodes, so sum(P x) == sum(x) for every x.
        """
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.num_nodes,):
            raise ValueError(f"vector length {x.shape} does not match num_nodes={self.num_nodes}")

        dangling = self.degrees == 0
        scaled = np.zeros_like(x)
        np.divide(x, self.degrees, out=scaled, where=~dangling)
        y = self.adjacency @ scaled
        dangling_mass = x[dangling].sum()
        if dangling_mass != 0.0:
            y = y + dangling_mass / self.num_nodes
        return y

    def __repr__(self) -> str:
        return f"<Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})>"


def stochastic_apply(g: Graph, x: np.ndarray) -> np.ndarray:
    """Apply the degree-normalized adjacency operator of ``g`` to ``x``"""
    return g.stochastic_apply(x)
