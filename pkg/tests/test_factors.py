import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from models.factors import FactorSet
from models.graph import Graph
from services import oracles
from services.factors import column_weights, compute_factors, dense_reconstruct, implicit_entry, total_mass

P2 = Graph.from_edges(2, [(0, 1)])


def test_column_weights_values():
    np.testing.assert_allclose(column_weights(0.8, 1, 2), [0.4472136, 0.8944272], atol=1e-7)


def test_uniform_vector_is_a_fixed_point():
    f = compute_factors([P2, P2], alpha=0.8, iterations=1)
    np.testing.assert_allclose(dense_reconstruct(f), np.full((2, 2), 0.25), atol=1e-15)
    for idx in itertools.product(range(2), repeat=2):
        assert implicit_entry(f, idx) == pytest.approx(0.25)


def test_zero_iterations_gives_the_seed_tensor(triangle, path3):
    seeds = [np.array([0.5, 0.25, 0.25]), np.array([0.1, 0.2, 0.7])]
    f = compute_factors([triangle, path3], alpha=0.8, iterations=0, seeds=seeds)
    assert f.rank == 1
    np.testing.assert_allclose(f.factors[0][:, 0], seeds[0])
    np.testing.assert_allclose(dense_reconstruct(f), np.outer(seeds[0], seeds[1]), atol=1e-15)


def test_implicit_entry_rank_one():
    f = FactorSet.from_matrices([np.array([2.0, 1.0]), np.array([3.0, 4.0])])
    assert implicit_entry(f, (0, 0)) == 6.0
    assert implicit_entry(f, (1, 1)) == 4.0


def test_implicit_entry_bounds():
    f = FactorSet.from_matrices([np.array([2.0, 1.0]), np.array([3.0, 4.0])])
    with pytest.raises(IndexError):
        implicit_entry(f, (2, 0))
    with pytest.raises(IndexError):
        implicit_entry(f, (0,))


def test_dense_reconstruct_outer_product():
    f = FactorSet.from_matrices([np.array([1.0, 0.0]), np.array([0.0, 1.0])])
    np.testing.assert_array_equal(dense_reconstruct(f), [[0.0, 1.0], [0.0, 0.0]])


def test_dense_reconstruct_is_linear_in_columns(rng):
    u, v = rng.random((3, 2)), rng.random((4, 2))
    f = FactorSet.from_matrices([u, v])
    expected = np.outer(u[:, 0], v[:, 0]) + np.outer(u[:, 1], v[:, 1])
    np.testing.assert_allclose(dense_reconstruct(f), expected)


def test_dense_reconstruct_cap():
    f = FactorSet.from_matrices([np.ones(10), np.ones(10), np.ones(10)])
    with pytest.raises(ValueError):
        dense_reconstruct(f, cap=999)


def test_implicit_entry_agrees_with_dense(rng):
    graphs = [oracles.random_graph(rng, 3, p=0.6) for _ in range(3)]
    f = compute_factors(graphs, alpha=0.8, iterations=2)
    dense = dense_reconstruct(f)
    for idx in itertools.product(range(3), repeat=3):
        assert implicit_entry(f, idx) == pytest.approx(dense[idx], abs=1e-15)


@pytest.mark.parametrize("alpha", [0.5, 0.8, 0.9])
@pytest.mark.parametrize("t", [0, 1, 2, 3, 4])
def test_factors_equal_explicit_kronecker_iterations(alpha, t):
    rng = np.random.default_rng(int(alpha * 100) + t)
    for _ in range(5):
        k = int(rng.integers(2, 4))
        graphs = [oracles.random_graph(rng, int(rng.integers(1, 5))) for _ in range(k)]
        f = compute_factors(graphs, alpha=alpha, iterations=t)
        expected = oracles.dense_pagerank_tensor(graphs, alpha, t)
        assert np.max(np.abs(dense_reconstruct(f) - expected)) <= 1e-12


def test_column_sums_split_weights_evenly(rng):
    graphs = [oracles.random_graph(rng, n) for n in (4, 6, 5)]
    f = compute_factors(graphs, alpha=0.8, iterations=4)
    expected = column_weights(0.8, 4, 3)
    for sums in f.column_sums():
        np.testing.assert_allclose(sums, expected, atol=1e-10)
    assert total_mass(f) == pytest.approx(1.0, abs=1e-10)


def test_ragged_sizes(triangle, star4):
    f = compute_factors([triangle, star4], alpha=0.8, iterations=3)
    assert f.sizes == [3, 5]
    assert f.rank == 4


def test_input_validation(triangle):
    with pytest.raises(ValueError):
        compute_factors([triangle])
    with pytest.raises(ValueError):
        compute_factors([triangle, triangle], alpha=1.0)
    with pytest.raises(ValueError):
        compute_factors([triangle, triangle], iterations=-1)
    with pytest.raises(ValueError):
        compute_factors([triangle, triangle], seeds=[np.ones(3) / 3])
    with pytest.raises(ValueError):
        compute_factors([triangle, triangle], seeds=[np.ones(3) / 3, np.ones(4) / 4])
    with pytest.raises(ValueError):
        compute_factors([triangle, triangle], seeds=[np.ones(3) / 3, np.array([0.5, 0.5, 0.5])])


def test_factor_set_validation():
    with pytest.raises(ValueError):
        FactorSet.from_matrices([np.ones((2, 2)), np.ones((2, 3))])
    with pytest.raises(ValueError):
        FactorSet.from_matrices([np.array([1.0, -1.0]), np.ones(2)])
    with pytest.raises(ValueError):
        FactorSet.from_matrices([np.ones(2)])


@settings(max_examples=50, deadline=None)
@given(
    sizes=st.lists(st.integers(min_value=1, max_value=6), min_size=2, max_size=4),
    alpha=st.floats(min_value=0.05, max_value=0.95),
    t=st.integers(min_value=0, max_value=6),
    seed=st.integers(min_value=0, max_value=2**16),
)
def test_factors_nonnegative_with_unit_mass(sizes, alpha, t, seed):
    rng = np.random.default_rng(seed)
    graphs = [oracles.random_graph(rng, n) for n in sizes]
    f = compute_factors(graphs, alpha=alpha, iterations=t)
    assert all(np.all(u >= 0) for u in f.factors)
    assert total_mass(f) == pytest.approx(1.0, abs=1e-10)
