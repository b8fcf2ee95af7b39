"""Maximum-weight assignment between two collections of spans.

Finding the best one-to-one alignment between the rows and columns of a
similarity matrix is the classic rectangular assignment problem.  The
production solver delegates to scipy's modified Jonker-Volgenant
implementation; an exhaustive brute-force solver is kept alongside it as
an independent oracle for testing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InputValidationError

# Exhaustive enumeration beyond this size is pointless (8! = 40320 per
# column selection, and the count of selections explodes for M != N).
BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """An M x N similarity matrix between two span collections.

    Row m / column n holds the similarity between span m of the first
    sentence and span n of the second.  Entries must be finite; values
    are typically cosine similarities in [-1, 1] but any finite reals
    are accepted.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.float64)
        if arr.ndim != 2:
            raise InputValidationError(
                f"cost matrix must be 2-dimensional, got shape {arr.shape}"
            )
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InputValidationError(
                f"cost matrix must have at least one row and column, got {arr.shape}"
            )
        bad = np.argwhere(~np.isfinite(arr))
        if bad.size:
            m, n = bad[0]
            raise InputValidationError(
                f"non-finite entry at cell ({m}, {n}): {arr[m, n]!r}"
            )
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def transposed(self) -> "CostMatrix":
        return CostMatrix(self.entries.T.copy())


@dataclass(frozen=True)
class Assignment:
    """A one-to-one matching of rows to columns with its total weight.

    Always contains exactly min(M, N) pairs; leftover rows or columns of
    a rectangular matrix stay unmatched.  Row and column indices are
    each pairwise distinct, and ``objective`` is the sum of the selected
    matrix entries.
    """

    pairs: tuple[tuple[int, int], ...]
    objective: float

    def __post_init__(self):
        rows = [m for m, _ in self.pairs]
        cols = [n for _, n in self.pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise InputValidationError("assignment reuses a row or column index")


def _selection_sum(entries: np.ndarray, pairs) -> float:
    return float(sum(entries[m, n] for m, n in pairs))


def solve_max_assignment(matrix: CostMatrix) -> Assignment:
    """Solve the rectangular maximum-weight assignment problem exactly.

    Returns an assignment of size min(M, N) whose objective is the
    maximum achievable sum of selected entries.  Ties between equally
    optimal assignments are broken arbitrarily; only the objective value
    is part of the contract.
    """
    rows, cols = linear_sum_assignment(matrix.entries, maximize=True)
    pairs = tuple((int(m), int(n)) for m, n in zip(rows, cols))
    return Assignment(pairs=pairs, objective=_selection_sum(matrix.entries, pairs))


def brute_force_assignment(matrix: CostMatrix) -> Assignment:
    """Exhaustively enumerate all injective row-to-column matchings.

    Independent test oracle for :func:`solve_max_assignment`.  Refuses
    matrices with min(M, N) > 8 because enumeration blows up.
    """
    m, n = matrix.rows, matrix.cols
    if min(m, n) > BRUTE_FORCE_LIMIT:
        raise InputValidationError(
            f"brute force refuses min(M, N) = {min(m, n)} > {BRUTE_FORCE_LIMIT}"
        )
    entries = matrix.entries
    transpose = m > n
    if transpose:
        entries = entries.T
        m, n = n, m

    # m <= n: assign every row to a distinct column.
    best_perm = None
    best = -np.inf
    row_lists = entries.tolist()
    for perm in itertools.permutations(range(n), m):
        total = 0.0
        for i, j in enumerate(perm):
            total += row_lists[i][j]
        if total > best:
            best = total
            best_perm = perm

    pairs = [(i, j) for i, j in enumerate(best_perm)]
    if transpose:
        pairs = [(j, i) for i, j in pairs]
    pairs.sort()
    return Assignment(pairs=tuple(pairs), objective=_selection_sum(matrix.entries, pairs))
