"""Induced subgraphs: top-degree cores and egonets"""

from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from models.graph import Graph


def induced_subgraph(g: Graph, nodes: Sequence[int]) -> Tuple[Graph, np.ndarray]:
    """Subgraph induced by ``nodes``; node ``nodes[r]`` becomes node r"""
    nodes = np.asarray(nodes, dtype=np.int64)
    if nodes.size and (nodes.min() < 0 or nodes.max() >= g.num_nodes):
        raise IndexError("subgraph node outside the graph")
    if np.unique(nodes).size != nodes.size:
        raise ValueError("subgraph nodes must be distinct")

    relabel = np.full(g.num_nodes, -1, dtype=np.int64)
    relabel[nodes] = np.arange(nodes.size)
    mapped = relabel[g.edges]
    kept = mapped[(mapped[:, 0] >= 0) & (mapped[:, 1] >= 0)]
    return Graph.from_edges(int(nodes.size), kept), nodes


def top_degree_subgraph(g: Graph, count: int) -> Tuple[Graph, np.ndarray]:
    """Induced subgraph on the ``count`` highest-degree nodes (ties by ascending id)"""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    order = np.lexsort((np.arange(g.num_nodes), -g.degrees))
    return induced_subgraph(g, order[: min(count, g.num_nodes)])


def egonet(g: Graph, center: int) -> Tuple[Graph, np.ndarray]:
    """Induced subgraph on ``center`` and its neighbours; center becomes node 0"""
    if not 0 <= center < g.num_nodes:
        raise IndexError(f"node {center} outside the graph")
    return induced_subgraph(g, np.concatenate([[center], g.neighbors(center)]))

