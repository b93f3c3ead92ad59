"""Synthetic alignment problems with a planted correspondence"""

from __future__ import annotations

import logging
from typing import List

import numpy as np

from models.experiment import ExperimentConfig, GraphModel
from models.graph import Graph
from models.problem import ProblemInstance

logger = logging.getLogger(__name__)

SEED_CLIQUE_SIZE = 5


def gen_erdos_renyi(n: int, avg_degree: float, seed: int) -> Graph:
    """G(n, p) with p = avg_degree / (n - 1)"""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 < avg_degree <= n - 1:
        raise ValueError(f"avg_degree must be in (0, {n - 1}], got {avg_degree}")

    p = avg_degree / (n - 1)
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.shape[0]) < p
    return Graph.from_edges(n, np.column_stack([rows[keep], cols[keep]]))


def gen_pref_attach(n: int, theta: int, seed: int) -> Graph:
    """Preferential attachment grown from a 5-node clique

    Every new vertex attaches to ``theta`` distinct existing vertices drawn
    with probability proportional to their degree before it arrived.
    """
    if n < SEED_CLIQUE_SIZE:
        raise ValueError(f"n must be >= {SEED_CLIQUE_SIZE}, got {n}")
    if not 1 <= theta <= SEED_CLIQUE_SIZE:
        raise ValueError(f"theta must be in [1, {SEED_CLIQUE_SIZE}], got {theta}")

    rng = np.random.default_rng(seed)
    clique_rows, clique_cols = np.triu_indices(SEED_CLIQUE_SIZE, k=1)
    edges: List[np.ndarray] = [np.column_stack([clique_rows, clique_cols])]

    degrees = np.zeros(n, dtype=np.float64)
    degrees[:SEED_CLIQUE_SIZE] = SEED_CLIQUE_SIZE - 1
    for v in range(SEED_CLIQUE_SIZE, n):
        weights = degrees[:v] / degrees[:v].sum()
        targets = rng.choice(v, size=theta, replace=False, p=weights)
        edges.append(np.column_stack([targets, np.full(theta, v)]))
        degrees[targets] += 1
        degrees[v] = theta

    return Graph.from_edges(n, np.vstack(edges))


def perturb(reference: Graph, k: int, p_e: float, seed: int) -> ProblemInstance:
    """k instances; each reference edge survives independently with prob 1 - p_e"""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if not 0.0 <= p_e <= 1.0:
        raise ValueError(f"p_e must be in [0, 1], got {p_e}")

    rng = np.random.default_rng(seed)
    instances = []
    for _ in range(k):
        keep = rng.random(reference.num_edges) >= p_e
        instances.append(Graph.from_edges(reference.num_nodes, reference.edges[keep]))

    return ProblemInstance(
        reference=reference,
        instances=instances,
        ground_truth=ProblemInstance.identity_truth(k, reference.num_nodes),
        seed=seed,
        p_e=p_e,
    )


def relabel(problem: ProblemInstance, seed: int) -> ProblemInstance:
    """Randomly relabel every instance, tracking the labels in ground_truth"""
    rng = np.random.default_rng(seed)
    n = problem.num_nodes
    instances = []
    truth = []
    for g, old_truth in zip(problem.instances, problem.truth_arrays()):
        perm = rng.permutation(n)
        instances.append(Graph.from_edges(n, perm[g.edges]))
        new_truth = np.empty(n, dtype=np.int64)
        new_truth[perm] = old_truth
        truth.append(new_truth.tolist())

    return problem.model_copy(update={"instances": instances, "ground_truth": truth})


def generate_reference(cfg: ExperimentConfig, seed: int) -> Graph:
    if cfg.model == GraphModel.ER:
        return gen_erdos_renyi(cfg.n, cfg.avg_degree, seed)
    return gen_pref_attach(cfg.n, cfg.theta, seed)


def generate_problem(cfg: ExperimentConfig, seed: int) -> ProblemInstance:
    """Reference graph, k perturbed copies and (optionally) a random relabelling"""
    ref_seed, noise_seed, label_seed = (int(s) for s in np.random.SeedSequence(seed).generate_state(3))
    reference = generate_reference(cfg, ref_seed)
    problem = perturb(reference, cfg.k, cfg.edge_deletion_probability, noise_seed)
    if cfg.shuffle:
        problem = relabel(problem, label_seed)
    problem = problem.model_copy(update={"seed": seed})
    logger.debug(problem.describe("generated"))
    return problem
