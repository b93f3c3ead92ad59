"""Alignment quality metrics"""

from __future__ import annotations

import itertools
import logging
from typing import List, Optional, Sequence

import numpy as np

from models.alignment import Alignment, BoundCertificate
from models.factors import FactorSet
from models.graph import Graph
from models.metrics import MetricsReport
from services.matching import matching_weight
from utils.errors import AlignmentError

logger = logging.getLogger(__name__)


def _checked_table(a: Alignment, graphs: Sequence[Graph]) -> np.ndarray:
    if a.k != len(graphs):
        raise ValueError(f"alignment has {a.k} modes, got {len(graphs)} graphs")
    table = a.as_array()
    for mode, g in enumerate(graphs):
        if table.shape[0] and table[:, mode].max() >= g.num_nodes:
            raise IndexError(f"alignment uses node {table[:, mode].max()} in graph {mode} of size {g.num_nodes}")
    return table


def _truth_arrays(truth: Optional[Sequence[Sequence[int]]], graphs: Sequence[Graph]) -> List[np.ndarray]:
    if truth is None:
        return [np.arange(g.num_nodes, dtype=np.int64) for g in graphs]
    if len(truth) != len(graphs):
        raise ValueError(f"got {len(truth)} ground-truth maps for {len(graphs)} graphs")
    arrays = [np.asarray(t, dtype=np.int64) for t in truth]
    for i, (t, g) in enumerate(zip(arrays, graphs)):
        if t.shape != (g.num_nodes,):
            raise ValueError(f"ground-truth map {i} has {t.shape[0]} entries, graph has {g.num_nodes} nodes")
    return arrays


def degree_weighted_recovery(
    a: Alignment,
    graphs: Sequence[Graph],
    truth: Optional[Sequence[Sequence[int]]] = None,
) -> float:
    """Correct pairs weighted by degree, 1 for a perfect alignment

    Each tuple scores C(k, 2)^-1 * sum over pairs (j, h) of
    correct(v_j, v_h) * (deg v_j + deg v_h) / (D_j + D_h), where D_j is the
    total degree of graph j. ``truth[j][v]`` is the common id of node v of
    graph j; ``None`` means node ids already agree.
    """
    table = _checked_table(a, graphs)
    totals = [g.total_degree for g in graphs]
    if any(d == 0 for d in totals):
        raise AlignmentError("degree-weighted recovery is undefined for a graph without edges")

    maps = _truth_arrays(truth, graphs)
    if table.shape[0] == 0:
        return 0.0

    score = 0.0
    for j, h in itertools.combinations(range(a.k), 2):
        vj, vh = table[:, j], table[:, h]
        correct = maps[j][vj] == maps[h][vh]
        weight = (graphs[j].degrees[vj] + graphs[h].degrees[vh]) / float(totals[j] + totals[h])
        score += float(weight[correct].sum())

    pairs = a.k * (a.k - 1) // 2
    return score / pairs


def normalized_overlap(a: Alignment, graphs: Sequence[Graph]) -> float:
    """Edges conserved in every graph over the symmetric nnz of the largest graph

    Node r of the aligned subgraphs is tuple r; unaligned nodes conserve
    nothing.
    """
    table = _checked_table(a, graphs)
    denominator = max(g.nnz for g in graphs)
    if denominator == 0 or table.shape[0] == 0:
        return 0.0

    conserved = None
    for mode, g in enumerate(graphs):
        nodes = table[:, mode]
        block = g.adjacency[nodes][:, nodes]
        conserved = block if conserved is None else conserved.multiply(block).tocsr()
    return conserved.count_nonzero() / denominator


def evaluate(
    a: Alignment,
    graphs: Sequence[Graph],
    truth: Optional[Sequence[Sequence[int]]] = None,
    factors: Optional[FactorSet] = None,
    certificate: Optional[BoundCertificate] = None,
    with_recovery: bool = True,
) -> MetricsReport:
    """Every metric of one alignment; recovery is null when ``with_recovery`` is off"""
    recovery = degree_weighted_recovery(a, graphs, truth) if with_recovery else None
    weight = matching_weight(a, factors) if factors is not None else None
    report = MetricsReport(
        degree_weighted_recovery=recovery,
        normalized_overlap=normalized_overlap(a, graphs),
        aligned_tuple_count=len(a),
        objective_weight=weight,
        D_bound=certificate.D if certificate is not None and np.isfinite(certificate.D) else None,
    )
    logger.debug("metrics: %s", report.model_dump())
    return report
