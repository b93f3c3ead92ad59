"""k-dimensional matching on a low-rank nonnegative tensor

Two extractors work directly on the CP factors:

* rank-1 sorted matchings, one per rank term, with an a-posteriori
  certificate D such that optimum <= D * weight(selected matching);
* progressive matching, folding one network in at a time through low-rank
  bipartite matchings.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linear_sum_assignment
from scipy.sparse.csgraph import min_weight_full_bipartite_matching

from models.alignment import Alignment, BoundCertificate
from models.factors import FactorSet
from utils.config import config
from utils.errors import AlignmentError, DegenerateTensorError

logger = logging.getLogger(__name__)


class ProgressiveVariant(str, Enum):
    PRODUCT = "product"
    MIXTURE = "mixture"


def descending_order(values: np.ndarray) -> np.ndarray:
    """Indices sorting ``values`` descending, ties by ascending index"""
    values = np.asarray(values)
    return np.lexsort((np.arange(values.shape[0]), -values))


# -----------------------------------------------------------------------------
# Rank-1 matchings and their weights
# -----------------------------------------------------------------------------

def _sorted_table(f: FactorSet, column: int) -> np.ndarray:
    m = min(f.sizes)
    return np.column_stack([descending_order(u[:, column])[:m] for u in f.factors])


def sort_match_rank_one(f: FactorSet, column: int) -> Alignment:
    """Optimal matching of the rank-1 term ``column``: pair the r-th largest entries"""
    if not 0 <= column < f.rank:
        raise IndexError(f"column {column} out of range for rank {f.rank}")
    return Alignment.from_array(_sorted_table(f, column), f.k)


def _checked_table(a: Alignment, f: FactorSet) -> np.ndarray:
    if a.k != f.k:
        raise ValueError(f"alignment has {a.k} modes, factors have {f.k}")
    table = a.as_array()
    for mode, n in enumerate(f.sizes):
        if table.shape[0] and table[:, mode].max() >= n:
            raise IndexError(f"alignment uses node {table[:, mode].max()} in mode {mode} of size {n}")
    return table


def _tuple_products(factors: List[np.ndarray], table: np.ndarray) -> np.ndarray:
    """(m, rank) products prod_i U_i[table[:, i], :]"""
    prod = np.ones((table.shape[0], factors[0].shape[1]), dtype=np.float64)
    for mode, u in enumerate(factors):
        prod *= u[table[:, mode]]
    return prod


def matching_weight(a: Alignment, f: FactorSet) -> float:
    """Sum of tensor entries over the aligned tuples"""
    table = _checked_table(a, f)
    if table.shape[0] == 0:
        return 0.0
    return float(_tuple_products(f.factors, table).sum())


def _unit_max_columns(u: np.ndarray) -> np.ndarray:
    peak = u.max(axis=0) if u.shape[0] else np.ones(u.shape[1])
    return u / np.where(peak > 0, peak, 1.0)


def select_best_with_bound(f: FactorSet) -> Tuple[Alignment, BoundCertificate]:
    """Best of the rank-1 sorted matchings, with its D-approximation certificate

    d[i, j] = (M_i . T_i) / (M_j . T_i); the matching j* minimising
    max_i d[i, j] is returned with D = max_i d[i, j*].
    """
    tables = [_sorted_table(f, j) for j in range(f.rank)]

    # Rescaling T_i by a positive constant leaves row i of d unchanged.
    scaled = [_unit_max_columns(u) for u in f.factors]
    cross = np.empty((f.rank, f.rank), dtype=np.float64)
    for j, table in enumerate(tables):
        cross[:, j] = _tuple_products(scaled, table).sum(axis=0)

    own = np.diag(cross).copy()
    if not np.any(own > 0):
        raise DegenerateTensorError("every rank-1 term of the tensor is zero")

    numer = np.broadcast_to(own[:, np.newaxis], cross.shape)
    d = np.ones_like(cross)
    positive = cross > 0
    d[positive] = numer[positive] / cross[positive]
    d[~positive & (numer > 0)] = np.inf

    column_max = d.max(axis=0)
    j_star = int(np.argmin(column_max))
    if not np.isfinite(column_max[j_star]):
        logger.warning("no rank-1 matching certifies a finite bound")

    certificate = BoundCertificate(d_values=d.tolist(), selected_index=j_star, D=float(column_max[j_star]))
    return Alignment.from_array(tables[j_star], f.k), certificate


# -----------------------------------------------------------------------------
# Low-rank bipartite matching
# -----------------------------------------------------------------------------

def _candidate_pairs(U: np.ndarray, V: np.ndarray, b: int) -> Tuple[np.ndarray, np.ndarray]:
    """Pairs whose descending ranks differ by less than b in some rank column"""
    n1, n2 = U.shape[0], V.shape[0]
    b = min(b, max(n1, n2))
    rows, cols = [], []
    for c in range(U.shape[1]):
        order_u = descending_order(U[:, c])
        order_v = descending_order(V[:, c])
        for offset in range(1 - b, b):
            p = np.arange(max(0, -offset), min(n1, n2 - offset))
            rows.append(order_u[p])
            cols.append(order_v[p + offset])

    linear = np.unique(np.concatenate(rows) * n2 + np.concatenate(cols))
    return linear // n2, linear % n2


def _greedy_completion(
    rows: np.ndarray, cols: np.ndarray, weights: np.ndarray, n1: int, n2: int
) -> Tuple[np.ndarray, np.ndarray]:
    row_free = np.ones(n1, dtype=bool)
    col_free = np.ones(n2, dtype=bool)
    pairs = []
    for e in np.lexsort((cols, rows, -weights)):
        r, c = rows[e], cols[e]
        if row_free[r] and col_free[c]:
            row_free[r] = col_free[c] = False
            pairs.append((r, c))
    for r, c in zip(np.flatnonzero(row_free), np.flatnonzero(col_free)):
        pairs.append((r, c))
    out = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return out[:, 0], out[:, 1]


def lowrank_assignment(U: np.ndarray, V: np.ndarray, b: int) -> Tuple[np.ndarray, np.ndarray]:
    """(rows, cols) of a pairing of size min(n1, n2), rows ascending"""
    if U.ndim != 2 or V.ndim != 2 or U.shape[1] != V.shape[1]:
        raise ValueError(f"factor shapes {U.shape} and {V.shape} have different column counts")
    if b < 1:
        raise ValueError(f"b must be >= 1, got {b}")
    n1, n2 = U.shape[0], V.shape[0]
    if n1 == 0 or n2 == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)

    rows, cols = _candidate_pairs(U, V, b)
    weights = np.einsum("ij,ij->i", U[rows], V[cols])

    if n1 * n2 <= config.DENSE_MATCH_CAP:
        # Non-candidates sit below any combination of candidates.
        penalty = float(weights.sum()) + 1.0
        score = np.full((n1, n2), -penalty)
        score[rows, cols] = weights
        match_rows, match_cols = linear_sum_assignment(score, maximize=True)
    else:
        cost = sp.csr_matrix(((weights.max() + 1.0) - weights, (rows, cols)), shape=(n1, n2))
        try:
            match_rows, match_cols = min_weight_full_bipartite_matching(cost)
        except ValueError:
            logger.warning("candidate graph has no full matching (n1=%d, n2=%d, b=%d); completing greedily", n1, n2, b)
            match_rows, match_cols = _greedy_completion(rows, cols, weights, n1, n2)

    order = np.argsort(match_rows, kind="stable")
    return np.asarray(match_rows, dtype=np.int64)[order], np.asarray(match_cols, dtype=np.int64)[order]


def lowrank_bipartite_match(U: np.ndarray, V: np.ndarray, b: Optional[int] = None) -> List[Tuple[int, int]]:
    """Approximate maximum-weight pairing for the weight matrix U V^T

    Candidates come from windows of width b around equal ranks in every
    column's descending order; the matching is exact on the candidate set,
    hence exact overall when b >= max(n1, n2).
    """
    b = config.MATCH_WINDOW if b is None else b
    U = np.asarray(U, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    if U.ndim == 1:
        U = U[:, np.newaxis]
    if V.ndim == 1:
        V = V[:, np.newaxis]
    rows, cols = lowrank_assignment(U, V, b)
    return [(int(r), int(c)) for r, c in zip(rows, cols)]


def pairing_weight(U: np.ndarray, V: np.ndarray, pairs: List[Tuple[int, int]]) -> float:
    """Weight of a pairing under U V^T"""
    if not pairs:
        return 0.0
    idx = np.asarray(pairs, dtype=np.int64)
    U = np.asarray(U, dtype=np.float64).reshape(np.shape(U)[0], -1)
    V = np.asarray(V, dtype=np.float64).reshape(np.shape(V)[0], -1)
    return float(np.einsum("ij,ij->", U[idx[:, 0]], V[idx[:, 1]]))


# -----------------------------------------------------------------------------
# Progressive matching
# -----------------------------------------------------------------------------

def _fold_rows(f: FactorSet, table: np.ndarray, variant: ProgressiveVariant) -> np.ndarray:
    """Row r summarizes the matched tuple table[r] over the modes folded so far"""
    product = np.ones((table.shape[0], f.rank), dtype=np.float64)
    total = np.zeros_like(product)
    for mode in range(table.shape[1]):
        rows = f.factors[mode][table[:, mode]]
        product *= rows
        # A positive global scale does not change a matching.
        peak = product.max()
        if peak > 0:
            product /= peak
        total += rows

    if variant == ProgressiveVariant.PRODUCT:
        return product

    product_sum, total_sum = product.sum(), total.sum()
    if product_sum == 0 and total_sum == 0:
        return total
    if product_sum == 0:
        logger.warning("product component is zero; using the sum component alone")
        return total / total_sum
    if total_sum == 0:
        return product / product_sum
    return 0.5 * product / product_sum + 0.5 * total / total_sum


def progressive_match(
    f: FactorSet,
    variant: ProgressiveVariant = ProgressiveVariant.PRODUCT,
    b: Optional[int] = None,
) -> Alignment:
    """Match modes 1 and 2, then fold each further mode into the tuple table"""
    b = config.MATCH_WINDOW if b is None else b
    variant = ProgressiveVariant(variant)
    for mode, n in enumerate(f.sizes):
        if n == 0:
            raise AlignmentError(f"mode {mode} has no nodes to match")

    rows, cols = lowrank_assignment(f.factors[0], f.factors[1], b)
    table = np.column_stack([rows, cols])

    for mode in range(2, f.k):
        folded = _fold_rows(f, table, variant)
        keep, matched = lowrank_assignment(folded, f.factors[mode], b)
        if keep.size == 0:
            raise AlignmentError(f"no matched rows remain when folding in mode {mode}")
        table = np.column_stack([table[keep], matched])
        logger.debug("folded mode %d: %d tuples", mode, table.shape[0])

    return Alignment.from_array(table, f.k)
