"""Brute-force reference computations for tiny instances

Shared by the test suite and the ``verify`` command. Everything here is
dense and exponential on purpose; keep n and k small.
"""

from __future__ import annotations

import itertools
from functools import reduce
from typing import Optional, Sequence

import networkx as nx
import numpy as np
from scipy.optimize import linear_sum_assignment

from models.factors import FactorSet
from models.graph import Graph


def random_graph(rng: np.random.Generator, n: int, p: Optional[float] = None) -> Graph:
    """G(n, p) with p drawn uniformly when not given; isolated nodes are common"""
    p = rng.random() if p is None else p
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.shape[0]) < p
    return Graph.from_edges(n, np.column_stack([rows[keep], cols[keep]]))


def random_factor_set(
    rng: np.random.Generator,
    sizes: Sequence[int],
    rank: int,
    zero_fraction: float = 0.15,
) -> FactorSet:
    """Nonnegative random factors with a sprinkling of exact zeros and ties"""
    matrices = []
    for n in sizes:
        u = rng.random((n, rank))
        u[rng.random((n, rank)) < zero_fraction] = 0.0
        # Quantize some entries so ties show up.
        coarse = rng.random((n, rank)) < 0.2
        u[coarse] = np.round(u[coarse], 1)
        matrices.append(u)
    return FactorSet.from_matrices(matrices)


def dense_stochastic(g: Graph) -> np.ndarray:
    """Explicit A D^-1 with degree-0 columns set to 1/n"""
    n = g.num_nodes
    p = g.adjacency.toarray()
    for v in range(n):
        if g.degrees[v] == 0:
            p[:, v] = 1.0 / n
        else:
            p[:, v] /= g.degrees[v]
    return p


def dense_pagerank_tensor(
    graphs: Sequence[Graph],
    alpha: float,
    iterations: int,
    seeds: Optional[Sequence[np.ndarray]] = None,
) -> np.ndarray:
    """t fixed-point steps on the explicit Kronecker system, reshaped to n_1 x ... x n_k

    y <- alpha (P_k x ... x P_1) y + (1 - alpha) h starting at y = h, where
    h = u_k x ... x u_1. Mode 1 varies fastest in vec order.
    """
    if seeds is None:
        seeds = [np.full(g.num_nodes, 1.0 / g.num_nodes) for g in graphs]
    stochastic = [dense_stochastic(g) for g in graphs]
    big = reduce(np.kron, reversed(stochastic))
    h = reduce(np.kron, reversed([np.asarray(s, dtype=np.float64) for s in seeds]))

    y = h.copy()
    for _ in range(iterations):
        y = alpha * (big @ y) + (1.0 - alpha) * h
    return y.reshape([g.num_nodes for g in graphs], order="F")


def _padded(tensor: np.ndarray) -> np.ndarray:
    n = max(tensor.shape)
    out = np.zeros((n,) * tensor.ndim, dtype=np.float64)
    out[tuple(slice(0, s) for s in tensor.shape)] = tensor
    return out


def exhaustive_matching_weight(tensor: np.ndarray) -> float:
    """Maximum k-dimensional matching weight of a nonnegative dense tensor

    Pads to a cube with zeros, enumerates permutations of modes 2..k-1 and
    solves the last mode as an assignment problem.
    """
    cube = _padded(np.asarray(tensor, dtype=np.float64))
    n, k = cube.shape[0], cube.ndim
    rows = np.arange(n)
    best = 0.0
    for middle in itertools.product(itertools.permutations(range(n)), repeat=k - 2):
        index = (rows,) + tuple(np.asarray(p) for p in middle)
        scores = cube[index]
        r, c = linear_sum_assignment(scores, maximize=True)
        best = max(best, float(scores[r, c].sum()))
    return best


def sorted_product_sum(vectors: Sequence[np.ndarray]) -> float:
    """sum_r prod_i (r-th largest entry of vector i)"""
    columns = [np.sort(np.asarray(v, dtype=np.float64))[::-1] for v in vectors]
    return float(np.prod(np.vstack(columns), axis=0).sum())


def max_permuted_product_sum(vectors: Sequence[np.ndarray]) -> float:
    """Largest sum_r prod_i v_i[perm_i(r)] over all permutations (first vector fixed)"""
    vectors = [np.asarray(v, dtype=np.float64) for v in vectors]
    n = vectors[0].shape[0]
    best = 0.0
    for perms in itertools.product(itertools.permutations(range(n)), repeat=len(vectors) - 1):
        prod = vectors[0].copy()
        for v, p in zip(vectors[1:], perms):
            prod = prod * v[list(p)]
        best = max(best, float(prod.sum()))
    return best


def random_permuted_product_sum(vectors: Sequence[np.ndarray], rng: np.random.Generator) -> float:
    prod = np.asarray(vectors[0], dtype=np.float64).copy()
    for v in vectors[1:]:
        prod = prod * np.asarray(v, dtype=np.float64)[rng.permutation(len(v))]
    return float(prod.sum())


def exact_bipartite_weight(U: np.ndarray, V: np.ndarray) -> float:
    """Maximum-weight matching of U V^T with networkx's blossom solver"""
    W = np.asarray(U, dtype=np.float64) @ np.asarray(V, dtype=np.float64).T
    g = nx.Graph()
    n1, n2 = W.shape
    for i in range(n1):
        for j in range(n2):
            g.add_edge(("u", i), ("v", j), weight=float(W[i, j]))
    matching = nx.max_weight_matching(g)
    return float(sum(g.edges[a, b]["weight"] for a, b in matching))

