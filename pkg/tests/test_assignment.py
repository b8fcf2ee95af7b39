"""Assignment solver against the exhaustive oracle and its invariants."""

import numpy as np
import pytest

from spanalign.assignment import (
    Assignment,
    CostMatrix,
    brute_force_assignment,
    solve_max_assignment,
)
from spanalign.errors import InputValidationError


def random_matrix(rng, max_side=7):
    m = int(rng.integers(1, max_side + 1))
    n = int(rng.integers(1, max_side + 1))
    return CostMatrix(rng.uniform(-1.0, 1.0, size=(m, n)))


class TestCostMatrix:
    def test_rejects_empty(self):
        with pytest.raises(InputValidationError):
            CostMatrix(np.empty((0, 3)))

    def test_rejects_non_finite_naming_cell(self):
        entries = np.zeros((2, 3))
        entries[1, 2] = np.nan
        with pytest.raises(InputValidationError, match=r"\(1, 2\)"):
            CostMatrix(entries)

    def test_rejects_one_dimensional(self):
        with pytest.raises(InputValidationError):
            CostMatrix(np.zeros(4))

    def test_shape_properties(self):
        matrix = CostMatrix([[0.0, 1.0, 2.0]])
        assert (matrix.rows, matrix.cols) == (1, 3)


class TestSolver:
    def test_identity_matrix_picks_diagonal(self):
        result = solve_max_assignment(CostMatrix([[1.0, 0.0], [0.0, 1.0]]))
        assert set(result.pairs) == {(0, 0), (1, 1)}
        assert result.objective == pytest.approx(2.0, abs=1e-9)

    def test_single_row_picks_max(self):
        result = solve_max_assignment(CostMatrix([[0.2, 0.9, 0.5]]))
        assert result.pairs == ((0, 1),)
        assert result.objective == pytest.approx(0.9, abs=1e-9)

    def test_pair_count_is_min_side(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            matrix = random_matrix(rng)
            result = solve_max_assignment(matrix)
            assert len(result.pairs) == min(matrix.rows, matrix.cols)

    def test_matches_oracle_on_random_instances(self):
        # 5x7 instances per the documented contract check
        rng = np.random.default_rng(42)
        for _ in range(100):
            matrix = CostMatrix(rng.uniform(-1.0, 1.0, size=(5, 7)))
            fast = solve_max_assignment(matrix)
            slow = brute_force_assignment(matrix)
            assert abs(fast.objective - slow.objective) <= 1e-9


class TestBruteForce:
    def test_one_by_one(self):
        result = brute_force_assignment(CostMatrix([[5.0]]))
        assert result.pairs == ((0, 0),)
        assert result.objective == pytest.approx(5.0)

    def test_identity_two_by_two(self):
        result = brute_force_assignment(CostMatrix([[1.0, 0.0], [0.0, 1.0]]))
        assert result.objective == pytest.approx(2.0)

    def test_hand_enumerated_three_by_three(self):
        # All six permutations enumerated by hand; 0.9 is the unique max.
        matrix = CostMatrix([[0.1, 0.2, 0.3], [0.3, 0.1, 0.2], [0.2, 0.3, 0.1]])
        result = brute_force_assignment(matrix)
        assert result.objective == pytest.approx(0.9, abs=1e-12)
        assert set(result.pairs) == {(0, 2), (1, 0), (2, 1)}

    def test_refuses_large_instances(self):
        with pytest.raises(InputValidationError, match="refuses"):
            brute_force_assignment(CostMatrix(np.zeros((9, 9))))

    def test_wide_and_tall_agree(self):
        rng = np.random.default_rng(3)
        entries = rng.uniform(-1.0, 1.0, size=(3, 6))
        wide = brute_force_assignment(CostMatrix(entries))
        tall = brute_force_assignment(CostMatrix(entries.T))
        assert wide.objective == pytest.approx(tall.objective, abs=1e-12)


class TestAssignmentInvariants:
    def test_duplicate_row_rejected(self):
        with pytest.raises(InputValidationError):
            Assignment(pairs=((0, 0), (0, 1)), objective=0.0)

    def test_objective_equals_selected_sum(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            matrix = random_matrix(rng)
            result = solve_max_assignment(matrix)
            total = sum(matrix.entries[m, n] for m, n in result.pairs)
            assert result.objective == pytest.approx(total, abs=1e-9)


class TestProperties:
    def test_transpose_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            matrix = random_matrix(rng)
            direct = solve_max_assignment(matrix)
            flipped = solve_max_assignment(matrix.transposed())
            assert direct.objective == pytest.approx(flipped.objective, abs=1e-9)

    def test_constant_shift_moves_objective_linearly(self):
        rng = np.random.default_rng(6)
        for _ in range(30):
            matrix = random_matrix(rng, max_side=5)
            shift = float(rng.uniform(-2.0, 2.0))
            base = solve_max_assignment(matrix)
            shifted_matrix = CostMatrix(matrix.entries + shift)
            shifted = solve_max_assignment(shifted_matrix)
            k = min(matrix.rows, matrix.cols)
            assert shifted.objective == pytest.approx(
                base.objective + shift * k, abs=1e-8
            )
            # the solution is still optimal for the shifted instance
            oracle = brute_force_assignment(shifted_matrix)
            assert shifted.objective == pytest.approx(oracle.objective, abs=1e-9)

    def test_row_and_column_permutation_equivariance(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            matrix = random_matrix(rng, max_side=6)
            row_perm = rng.permutation(matrix.rows)
            col_perm = rng.permutation(matrix.cols)
            permuted = CostMatrix(matrix.entries[np.ix_(row_perm, col_perm)])
            assert solve_max_assignment(permuted).objective == pytest.approx(
                solve_max_assignment(matrix).objective, abs=1e-9
            )
