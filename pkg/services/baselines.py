"""Reference aligners: by degree, random, and consistent pairwise"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from models.alignment import Alignment
from models.graph import Graph
from services.factors import compute_factors
from services.matching import descending_order, lowrank_assignment
from utils.config import config

logger = logging.getLogger(__name__)


def _check_graphs(graphs: Sequence[Graph]) -> None:
    if len(graphs) < 2:
        raise ValueError(f"need at least 2 graphs, got {len(graphs)}")


def degree_match(graphs: Sequence[Graph]) -> Alignment:
    """Pair the r-th highest-degree nodes of every graph (ties by ascending id)"""
    _check_graphs(graphs)
    m = min(g.num_nodes for g in graphs)
    table = np.column_stack([descending_order(g.degrees)[:m] for g in graphs])
    return Alignment.from_array(table, len(graphs))


def random_match(graphs: Sequence[Graph], seed: int) -> Alignment:
    """Independent uniform random injections per mode"""
    _check_graphs(graphs)
    rng = np.random.default_rng(seed)
    m = min(g.num_nodes for g in graphs)
    table = np.column_stack([rng.permutation(g.num_nodes)[:m] for g in graphs])
    return Alignment.from_array(table, len(graphs))


def _pairwise_map(
    pair: Tuple[int, int], graphs: Sequence[Graph], alpha: float, iterations: int, b: int
) -> Dict[int, int]:
    i, j = pair
    f = compute_factors([graphs[i], graphs[j]], alpha=alpha, iterations=iterations)
    rows, cols = lowrank_assignment(f.factors[0], f.factors[1], b)
    return dict(zip(rows.tolist(), cols.tolist()))


def pairwise_consistent_match(
    graphs: Sequence[Graph],
    alpha: Optional[float] = None,
    iterations: Optional[int] = None,
    b: Optional[int] = None,
    workers: int = 1,
) -> Alignment:
    """Align every pair with the two-network pipeline, keep k-cliques of matches

    A tuple (v_1, ..., v_k) is emitted only when all C(k, 2) of its pairwise
    matches were produced.
    """
    _check_graphs(graphs)
    alpha = config.ALPHA if alpha is None else alpha
    iterations = config.ITERATIONS if iterations is None else iterations
    b = config.MATCH_WINDOW if b is None else b
    k = len(graphs)

    pairs = list(itertools.combinations(range(k), 2))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        maps = list(pool.map(lambda p: _pairwise_map(p, graphs, alpha, iterations, b), pairs))
    return consistent_tuples(dict(zip(pairs, maps)), k)


def consistent_tuples(matches: Mapping[Tuple[int, int], Mapping[int, int]], k: int) -> Alignment:
    """k-cliques of a k-partite match graph

    ``matches[(i, j)]`` (i < j) maps nodes of network i to their partner in
    network j. Each node has at most one partner per network, so following
    the pointers from network 0 and checking every pair finds all cliques.
    """
    pairs = list(itertools.combinations(range(k), 2))
    tuples = []
    for anchor in sorted(matches.get((0, 1), {})):
        row = [anchor]
        for j in range(1, k):
            partner = matches.get((0, j), {}).get(anchor)
            if partner is None:
                break
            row.append(partner)
        else:
            if all(matches.get((p, q), {}).get(row[p]) == row[q] for p, q in pairs):
                tuples.append(tuple(row))

    logger.debug("pairwise consistency kept %d of %d anchors", len(tuples), len(matches.get((0, 1), {})))
    return Alignment(tuples=tuples, k=k)
