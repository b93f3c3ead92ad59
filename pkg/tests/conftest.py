import numpy as np
import pytest

from models.graph import Graph


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4() -> Graph:
    """Center 0 with four leaves"""
    return Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


@pytest.fixture
def asymmetric() -> Graph:
    """Path 0-1-2-3-4 plus node 5 joined to 2 and 3; no nontrivial automorphism"""
    return Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (3, 5)])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def broken_column_weights(monkeypatch):
    """Patch the factor weights with an off-by-one exponent in alpha^j"""
    from services import factors

    def weights(alpha, iterations, k):
        j = np.arange(iterations + 1, dtype=np.float64)
        out = ((1.0 - alpha) * alpha ** (j + 1)) ** (1.0 / k)
        out[iterations] = alpha ** (iterations / k)
        return out

    monkeypatch.setattr(factors, "column_weights", weights)
