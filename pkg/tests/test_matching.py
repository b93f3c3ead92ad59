import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from models.alignment import Alignment
from models.factors import FactorSet
from services import matching, oracles
from services.factors import compute_factors, dense_reconstruct
from services.matching import (
    ProgressiveVariant,
    lowrank_bipartite_match,
    matching_weight,
    pairing_weight,
    progressive_match,
    select_best_with_bound,
    sort_match_rank_one,
)
from utils.errors import DegenerateTensorError

RANK_ONE = FactorSet.from_matrices([np.array([3.0, 1.0, 2.0]), np.array([10.0, 30.0, 20.0]), np.array([1.0, 2.0, 3.0])])
TWO_BY_TWO = FactorSet.from_matrices([np.array([[2.0, 1.0], [1.0, 2.0]]), np.array([[2.0, 2.0], [1.0, 1.0]])])


def test_sort_match_rank_one_pairs_rth_largest():
    a = sort_match_rank_one(RANK_ONE, 0)
    assert a.tuples == [(0, 1, 2), (2, 2, 1), (1, 0, 0)]
    assert matching_weight(a, RANK_ONE) == 360.0
    assert oracles.exhaustive_matching_weight(dense_reconstruct(RANK_ONE)) == pytest.approx(360.0)


def test_sort_match_sorted_columns_give_identity():
    f = FactorSet.from_matrices([np.array([5.0, 3.0, 1.0]), np.array([9.0, 4.0, 2.0])])
    assert sort_match_rank_one(f, 0).tuples == [(0, 0), (1, 1), (2, 2)]


def test_sort_match_ties_break_by_node_id():
    f = FactorSet.from_matrices([np.array([1.0, 1.0, 1.0]), np.array([3.0, 2.0, 1.0])])
    assert sort_match_rank_one(f, 0).tuples == [(0, 0), (1, 1), (2, 2)]


def test_sort_match_ragged_sizes():
    f = FactorSet.from_matrices([np.array([1.0, 2.0]), np.array([4.0, 5.0, 6.0])])
    assert sort_match_rank_one(f, 0).tuples == [(1, 2), (0, 1)]
    with pytest.raises(IndexError):
        sort_match_rank_one(f, 1)


def test_matching_weight_edge_cases():
    assert matching_weight(Alignment.empty(3), RANK_ONE) == 0.0
    assert matching_weight(Alignment(tuples=[(1, 1, 1)], k=3), RANK_ONE) == 60.0
    with pytest.raises(IndexError):
        matching_weight(Alignment(tuples=[(3, 0, 0)], k=3), RANK_ONE)
    with pytest.raises(ValueError):
        matching_weight(Alignment(tuples=[(0, 0)], k=2), RANK_ONE)


def test_alignment_rejects_repeated_nodes():
    with pytest.raises(ValueError):
        Alignment(tuples=[(0, 1), (0, 2)], k=2)
    with pytest.raises(ValueError):
        Alignment(tuples=[(0, 1, 2)], k=2)


def test_bound_on_two_by_two_instance():
    a, certificate = select_best_with_bound(TWO_BY_TWO)
    assert certificate.D == pytest.approx(1.25, abs=1e-12)
    assert certificate.selected_index == 0
    np.testing.assert_allclose(certificate.d_values, [[1.0, 1.25], [1.25, 1.0]])
    assert a.tuples == [(0, 0), (1, 1)]
    optimum = oracles.exhaustive_matching_weight(dense_reconstruct(TWO_BY_TWO))
    assert optimum == pytest.approx(9.0)
    assert matching_weight(a, TWO_BY_TWO) == pytest.approx(9.0)


def test_single_term_bound_is_one():
    a, certificate = select_best_with_bound(RANK_ONE)
    assert certificate.D == 1.0
    assert matching_weight(a, RANK_ONE) == 360.0


def test_zero_tensor_is_degenerate():
    f = FactorSet.from_matrices([np.zeros((3, 2)), np.ones((3, 2))])
    with pytest.raises(DegenerateTensorError):
        select_best_with_bound(f)


def test_uncertifiable_columns_get_infinite_ratio():
    # Each rank-1 matching misses the other term's only nonzero entry.
    f = FactorSet.from_matrices([np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([[1.0, 1.0], [0.0, 0.0]])])
    a, certificate = select_best_with_bound(f)
    assert math.isinf(certificate.d_values[0][1])
    assert math.isinf(certificate.d_values[1][0])
    assert math.isinf(certificate.D)
    assert certificate.selected_index == 0


def test_bound_is_sound_on_random_instances():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(60):
        sizes = [int(s) for s in rng.integers(1, 6, size=3)]
        f = oracles.random_factor_set(rng, sizes, int(rng.integers(1, 5)))
        try:
            a, certificate = select_best_with_bound(f)
        except DegenerateTensorError:
            continue
        optimum = oracles.exhaustive_matching_weight(dense_reconstruct(f))
        assert optimum <= certificate.D * matching_weight(a, f) * (1 + 1e-9) + 1e-15
        assert certificate.D >= 1.0
        checked += 1
    assert checked > 30


def test_rank_one_sorting_is_optimal():
    rng = np.random.default_rng(8)
    for _ in range(30):
        sizes = [int(s) for s in rng.integers(1, 6, size=3)]
        f = FactorSet.from_matrices([rng.random(n) for n in sizes])
        weight = matching_weight(sort_match_rank_one(f, 0), f)
        assert weight == pytest.approx(oracles.exhaustive_matching_weight(dense_reconstruct(f)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("k", [2, 3])
def test_rearrangement_exhaustive(n, k):
    rng = np.random.default_rng(10 * n + k)
    for _ in range(10):
        vectors = [rng.random(n) for _ in range(k)]
        assert oracles.max_permuted_product_sum(vectors) == pytest.approx(oracles.sorted_product_sum(vectors))


@settings(max_examples=1000, deadline=None)
@given(
    k=st.integers(min_value=2, max_value=5),
    data=arrays(np.float64, (5, 7), elements=st.floats(min_value=0.0, max_value=1e3)),
    seed=st.integers(min_value=0, max_value=2**16),
)
def test_rearrangement_sampled_permutations(k, data, seed):
    vectors = list(data[:k])
    sorted_sum = oracles.sorted_product_sum(vectors)
    permuted = oracles.random_permuted_product_sum(vectors, np.random.default_rng(seed))
    assert permuted <= sorted_sum * (1 + 1e-12) + 1e-12


def test_bipartite_example():
    U = np.array([3.0, 1.0, 2.0])
    V = np.array([30.0, 10.0, 20.0])
    pairs = lowrank_bipartite_match(U, V, b=1)
    assert pairs == [(0, 0), (1, 1), (2, 2)]
    assert pairing_weight(U, V, pairs) == 140.0


def test_bipartite_input_validation():
    with pytest.raises(ValueError):
        lowrank_bipartite_match(np.ones((3, 2)), np.ones((3, 1)), b=2)
    with pytest.raises(ValueError):
        lowrank_bipartite_match(np.ones(3), np.ones(3), b=0)


@pytest.mark.parametrize("seed", range(20))
def test_bipartite_full_window_is_exact(seed):
    rng = np.random.default_rng(seed)
    n1, n2 = (int(x) for x in rng.integers(1, 9, size=2))
    r = int(rng.integers(1, 4))
    U, V = rng.random((n1, r)), rng.random((n2, r))
    pairs = lowrank_bipartite_match(U, V, b=max(n1, n2))
    assert len(pairs) == min(n1, n2)
    assert pairing_weight(U, V, pairs) == pytest.approx(oracles.exact_bipartite_weight(U, V), rel=1e-9)


def test_bipartite_sparse_solver_is_exact_on_full_window(monkeypatch):
    monkeypatch.setattr(matching.config, "DENSE_MATCH_CAP", 1)
    rng = np.random.default_rng(3)
    U, V = rng.random((6, 2)), rng.random((8, 2))
    pairs = lowrank_bipartite_match(U, V, b=8)
    assert len(pairs) == 6
    assert pairing_weight(U, V, pairs) == pytest.approx(oracles.exact_bipartite_weight(U, V), rel=1e-9)


def test_bipartite_small_window_is_one_to_one():
    rng = np.random.default_rng(4)
    pairs = lowrank_bipartite_match(rng.random((40, 3)), rng.random((30, 3)), b=2)
    rows = [p for p, _ in pairs]
    cols = [q for _, q in pairs]
    assert len(pairs) == 30
    assert len(set(rows)) == len(set(cols)) == 30


def test_progressive_two_modes_reduces_to_bipartite(rng):
    f = oracles.random_factor_set(rng, [5, 7], 3)
    a = progressive_match(f, b=4)
    assert [tuple(p) for p in lowrank_bipartite_match(f.factors[0], f.factors[1], b=4)] == a.tuples


@pytest.mark.parametrize("variant", list(ProgressiveVariant))
def test_progressive_recovers_identity_on_identical_graphs(asymmetric, variant):
    f = compute_factors([asymmetric] * 3, alpha=0.8, iterations=8)
    a = progressive_match(f, variant=variant, b=10)
    assert sorted(a.tuples) == [(v, v, v) for v in range(6)]


def test_progressive_ragged_sizes_are_injective(rng):
    f = oracles.random_factor_set(rng, [6, 4, 5, 7], 2)
    for variant in ProgressiveVariant:
        a = progressive_match(f, variant=variant, b=3)
        assert len(a) == 4


def test_progressive_beats_random_on_average():
    rng = np.random.default_rng(11)
    progressive, random = 0.0, 0.0
    for _ in range(100):
        sizes = [int(s) for s in rng.integers(1, 5, size=3)]
        f = oracles.random_factor_set(rng, sizes, int(rng.integers(1, 4)), zero_fraction=0.0)
        progressive += matching_weight(progressive_match(f), f)
        m = min(sizes)
        table = np.column_stack([rng.permutation(n)[:m] for n in sizes])
        random += matching_weight(Alignment.from_array(table, 3), f)
    assert progressive >= random


def test_mixture_handles_zero_products():
    # Rows of the first two modes never overlap in support, so every product row is zero.
    f = FactorSet.from_matrices(
        [np.array([[1.0, 0.0], [1.0, 0.0]]), np.array([[0.0, 1.0], [0.0, 1.0]]), np.array([[1.0, 2.0], [2.0, 1.0]])]
    )
    a = progressive_match(f, variant=ProgressiveVariant.MIXTURE, b=2)
    assert len(a) == 2
