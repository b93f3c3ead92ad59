import numpy as np
import pytest

from models.alignment import Alignment, BoundCertificate
from models.factors import FactorSet
from models.graph import Graph
from services.evaluation import degree_weighted_recovery, evaluate, normalized_overlap
from services.synth import gen_erdos_renyi, gen_pref_attach
from utils.errors import AlignmentError

IDENTITY3 = Alignment(tuples=[(0, 0), (1, 1), (2, 2)], k=2)


def test_identical_triangles_recover_fully(triangle):
    assert degree_weighted_recovery(IDENTITY3, [triangle, triangle]) == pytest.approx(1.0, abs=1e-12)


def test_no_correct_pairs_scores_zero(triangle):
    a = Alignment(tuples=[(0, 1), (1, 2), (2, 0)], k=2)
    assert degree_weighted_recovery(a, [triangle, triangle]) == 0.0


def test_one_correct_pair_scores_a_third(triangle):
    a = Alignment(tuples=[(0, 0), (1, 2), (2, 1)], k=2)
    assert degree_weighted_recovery(a, [triangle, triangle]) == pytest.approx(1 / 3)


def test_recovery_needs_edges(triangle):
    with pytest.raises(AlignmentError):
        degree_weighted_recovery(IDENTITY3, [triangle, Graph.empty(3)])


def test_recovery_uses_truth_maps(triangle):
    # instance 1 is the triangle with nodes 0 and 2 swapped
    truth = [[0, 1, 2], [2, 1, 0]]
    a = Alignment(tuples=[(0, 2), (1, 1), (2, 0)], k=2)
    assert degree_weighted_recovery(a, [triangle, triangle], truth) == pytest.approx(1.0)
    assert degree_weighted_recovery(IDENTITY3, [triangle, triangle], truth) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        degree_weighted_recovery(IDENTITY3, [triangle, triangle], [[0, 1, 2]])


def test_overlap_identical_graphs(asymmetric):
    a = Alignment(tuples=[(v, v, v) for v in range(6)], k=3)
    assert normalized_overlap(a, [asymmetric] * 3) == 1.0


def test_overlap_triangle_vs_path(triangle, path3):
    assert normalized_overlap(IDENTITY3, [triangle, path3]) == pytest.approx(2 / 3)


def test_overlap_edge_disjoint_graphs():
    a = Graph.from_edges(3, [(0, 1)])
    b = Graph.from_edges(3, [(1, 2)])
    assert normalized_overlap(IDENTITY3, [a, b]) == 0.0


def test_overlap_all_empty_graphs():
    assert normalized_overlap(IDENTITY3, [Graph.empty(3), Graph.empty(3)]) == 0.0


def test_overlap_ignores_unaligned_nodes(triangle):
    partial = Alignment(tuples=[(0, 0), (1, 1)], k=2)
    # one conserved edge (two symmetric nonzeros) out of six
    assert normalized_overlap(partial, [triangle, triangle]) == pytest.approx(1 / 3)


def test_metrics_are_invariant_under_relabeling():
    rng = np.random.default_rng(2)
    g1 = gen_erdos_renyi(40, 6.0, seed=3)
    g2 = gen_erdos_renyi(40, 6.0, seed=4)
    a = Alignment.from_array(np.column_stack([np.arange(40), rng.permutation(40)]), 2)

    perms = [rng.permutation(40), rng.permutation(40)]
    relabeled = [Graph.from_edges(40, p[g.edges]) for p, g in zip(perms, (g1, g2))]
    table = a.as_array()
    moved = Alignment.from_array(np.column_stack([perms[0][table[:, 0]], perms[1][table[:, 1]]]), 2)
    truth = [np.argsort(p) for p in perms]

    assert normalized_overlap(moved, relabeled) == pytest.approx(normalized_overlap(a, [g1, g2]))
    assert degree_weighted_recovery(moved, relabeled, truth) == pytest.approx(degree_weighted_recovery(a, [g1, g2]))


def test_removing_tuples_never_increases_metrics():
    g = gen_erdos_renyi(30, 5.0, seed=0)
    rng = np.random.default_rng(0)
    table = np.column_stack([np.arange(30), np.where(rng.random(30) < 0.5, np.arange(30), rng.permutation(30))])
    _, first = np.unique(table[:, 1], return_index=True)
    a = Alignment.from_array(table[np.sort(first)], 2)
    graphs = [g, g]
    recovery, overlap = degree_weighted_recovery(a, graphs), normalized_overlap(a, graphs)
    for drop in range(len(a)):
        smaller = Alignment(tuples=a.tuples[:drop] + a.tuples[drop + 1:], k=2)
        assert degree_weighted_recovery(smaller, graphs) <= recovery + 1e-15
        assert normalized_overlap(smaller, graphs) <= overlap + 1e-15


@pytest.mark.parametrize("seed", range(10))
def test_identity_on_identical_graphs_scores_one(seed):
    for g in (gen_erdos_renyi(60, 5.0, seed=seed), gen_pref_attach(60, 3, seed=seed)):
        graphs = [g, g, g]
        a = Alignment.from_array(np.column_stack([np.arange(60)] * 3), 3)
        assert degree_weighted_recovery(a, graphs) == pytest.approx(1.0, abs=1e-12)
        assert normalized_overlap(a, graphs) == 1.0


def test_evaluate_bundles_metrics(triangle):
    f = FactorSet.from_matrices([np.ones(3), np.ones(3)])
    certificate = BoundCertificate(d_values=[[1.0]], selected_index=0, D=1.0)
    report = evaluate(IDENTITY3, [triangle, triangle], factors=f, certificate=certificate)
    assert report.degree_weighted_recovery == pytest.approx(1.0)
    assert report.normalized_overlap == 1.0
    assert report.aligned_tuple_count == 3
    assert report.objective_weight == 3.0
    assert report.D_bound == 1.0


def test_evaluate_without_recovery(triangle):
    report = evaluate(IDENTITY3, [triangle, Graph.empty(3)], with_recovery=False)
    assert report.degree_weighted_recovery is None
    assert report.objective_weight is None
    assert report.D_bound is None
    assert report.normalized_overlap == 0.0


def test_mismatched_alignment_is_rejected(triangle):
    with pytest.raises(ValueError):
        normalized_overlap(IDENTITY3, [triangle, triangle, triangle])
    with pytest.raises(IndexError):
        normalized_overlap(Alignment(tuples=[(0, 3)], k=2), [triangle, triangle])
