"""Tests for least squares, LASSO, subspace pursuit, trimming and GPSP."""

import numpy as np
import pytest

from src.domain.assembly import column_normalize
from src.domain.dictionary import monomial_term
from src.domain.errors import RegressionError
from src.domain.models import GroupSystem, LinearSystem
from src.domain.regression import (
    contribution_scores,
    group_least_squares,
    group_subspace_pursuit,
    group_trim,
    l10_norm,
    lambda_grid,
    lasso,
    lasso_path,
    least_squares_on_support,
    soft_threshold,
    subspace_pursuit,
    top_k,
    trim,
)


def _terms(n):
    return tuple(monomial_term({0: k + 1}) for k in range(n))


def make_system(matrix, rhs, grid):
    rows = np.arange(matrix.shape[0])
    return LinearSystem(matrix, rhs, _terms(matrix.shape[1]), rows, np.zeros_like(rows), grid)


@pytest.fixture
def gaussian_system(periodic_grid):
    """Unit-norm Gaussian columns; b = F c with c supported on {1, 4, 7}."""
    rng = np.random.default_rng(11)
    F = rng.normal(size=(200, 10))
    F /= np.linalg.norm(F, axis=0)
    c = np.zeros(10)
    c[[1, 4, 7]] = [1.5, -2.0, 1.0]
    return make_system(F, F @ c, periodic_grid), c


@pytest.mark.unit
class TestLeastSquares:
    def test_exact_recovery(self, gaussian_system):
        sys, c = gaussian_system
        model = least_squares_on_support(sys, [7, 1, 4])
        assert model.support == (1, 4, 7)
        np.testing.assert_allclose(model.coeffs, c, atol=1e-10)
        assert model.residual < 1e-10
        assert model.coefficient_map() == pytest.approx({"u^2": 1.5, "u^5": -2.0, "u^8": 1.0})

    def test_physical_coefficients_after_scaling(self, periodic_grid):
        rng = np.random.default_rng(2)
        F = rng.normal(size=(40, 3)) * np.array([100.0, 0.01, 1.0])
        c = np.array([0.5, 30.0, -1.0])
        sys = column_normalize(make_system(F, F @ c, periodic_grid))
        model = least_squares_on_support(sys, [0, 1, 2])
        np.testing.assert_allclose(model.coeffs, c, rtol=1e-8)

    def test_rank_deficient_flag(self, periodic_grid):
        F = np.column_stack([np.arange(5.0), 2 * np.arange(5.0)])
        model = least_squares_on_support(make_system(F, np.arange(5.0), periodic_grid), [0, 1])
        assert "rank_deficient" in model.flags

    def test_empty_support(self, gaussian_system):
        sys, _ = gaussian_system
        model = least_squares_on_support(sys, [])
        assert model.residual == pytest.approx(np.linalg.norm(sys.rhs))
        assert not model.coeffs.any()


@pytest.mark.unit
class TestLasso:
    def test_soft_threshold(self):
        np.testing.assert_allclose(soft_threshold(np.array([-3.0, 0.5, 2.0]), 1.0), [-2.0, 0.0, 1.0])

    def test_orthonormal_columns_give_soft_threshold(self, periodic_grid):
        rng = np.random.default_rng(5)
        q, _ = np.linalg.qr(rng.normal(size=(30, 4)))
        b = rng.normal(size=30)
        result = lasso(make_system(q, b, periodic_grid), 0.3, tol=1e-12)
        np.testing.assert_allclose(result.coeffs, soft_threshold(q.T @ b, 0.3), atol=1e-6)
        assert result.converged and not result.flags

    def test_objective_never_increases(self, gaussian_system):
        sys, _ = gaussian_system
        result = lasso(sys, 0.05)
        assert np.all(np.diff(result.objective) <= 1e-12 * max(1.0, result.objective[0]))

    def test_large_lambda_gives_zero(self, gaussian_system):
        sys, _ = gaussian_system
        lam_max = float(np.abs(sys.matrix.T @ sys.rhs).max())
        assert not lasso(sys, lam_max).coeffs.any()

    def test_negative_lambda(self, gaussian_system):
        with pytest.raises(RegressionError):
            lasso(gaussian_system[0], -1.0)

    def test_unnormalized_columns_flagged(self, periodic_grid):
        F = np.diag([2.0, 3.0])
        assert "columns_not_normalized" in lasso(make_system(F, np.ones(2), periodic_grid), 0.1).flags

    def test_path(self, gaussian_system):
        sys, _ = gaussian_system
        grid = lambda_grid(sys, 10)
        assert len(grid) == 10
        assert grid[-1] == pytest.approx(1e-4 * grid[0])
        path = lasso_path(sys, 10)
        assert path[0][1] == ()
        assert {1, 4, 7} <= set(path[-1][1])


@pytest.mark.unit
class TestSubspacePursuit:
    def test_top_k_ties_prefer_lower_index(self):
        assert top_k(np.array([1.0, 3.0, 3.0, 0.0]), 2) == [1, 2]
        assert top_k(np.array([2.0, 2.0, 2.0]), 1) == [0]

    def test_exact_recovery(self, gaussian_system):
        sys, c = gaussian_system
        model = subspace_pursuit(sys, 3)
        assert model.support == (1, 4, 7)
        np.testing.assert_allclose(model.coeffs, c, atol=1e-8)
        assert all(a >= b for a, b in zip(model.history, model.history[1:]))

    @pytest.mark.parametrize("k", [0, 11])
    def test_sparsity_out_of_range(self, gaussian_system, k):
        with pytest.raises(RegressionError):
            subspace_pursuit(gaussian_system[0], k)


@pytest.mark.unit
class TestTrim:
    def test_drops_small_contributor(self, periodic_grid):
        rng = np.random.default_rng(4)
        F = rng.normal(size=(100, 3))
        F /= np.linalg.norm(F, axis=0)
        sys = make_system(F, F @ np.array([1.0, 0.01, -1.0]), periodic_grid)
        full = least_squares_on_support(sys, [0, 1, 2])
        np.testing.assert_allclose(contribution_scores(sys, full), [1.0, 0.01, 1.0], rtol=1e-6)
        trimmed = trim(sys, full, rho=0.05)
        assert trimmed.support == (0, 2)

    def test_scores_ignore_column_scaling(self, gaussian_system):
        sys, _ = gaussian_system
        scaled = column_normalize(make_system(sys.matrix * 7.0, sys.rhs, sys.grid))
        a = contribution_scores(sys, least_squares_on_support(sys, [1, 4, 7]))
        b = contribution_scores(scaled, least_squares_on_support(scaled, [1, 4, 7]))
        np.testing.assert_allclose(a, b, rtol=1e-8)

    def test_never_empties_support(self, gaussian_system):
        sys, _ = gaussian_system
        zero = make_system(sys.matrix, np.zeros(sys.n_rows), sys.grid)
        trimmed = trim(zero, least_squares_on_support(zero, [0, 1]))
        assert trimmed.sparsity == 1
        assert "trim_emptied" in trimmed.flags

    def test_input_model_is_not_mutated(self, gaussian_system):
        sys, _ = gaussian_system
        zero = make_system(sys.matrix, np.zeros(sys.n_rows), sys.grid)
        single = least_squares_on_support(zero, [3])
        trimmed = trim(zero, single)
        assert trimmed.flags == ["trim_emptied"]
        assert single.flags == []
        assert trimmed.support == single.support


@pytest.fixture
def group_system(periodic_grid):
    """Four groups of three columns; b lies in the span of groups 0 and 2."""
    rng = np.random.default_rng(8)
    F = rng.normal(size=(120, 12))
    group_index = np.repeat(np.arange(4), 3)
    coeffs = np.zeros(12)
    coeffs[0:3] = [1.0, -0.5, 0.25]
    coeffs[6:9] = [-2.0, 1.0, 0.5]
    rows = np.arange(120)
    gsys = GroupSystem(F, F @ coeffs, group_index, _terms(4), None, rows, np.zeros_like(rows))
    return gsys, coeffs


@pytest.mark.unit
class TestGroupRegression:
    def test_gpsp_recovers_groups(self, group_system):
        gsys, coeffs = group_system
        model = group_subspace_pursuit(gsys, 2)
        assert model.support == (0, 2)
        np.testing.assert_allclose(model.coeffs, coeffs, atol=1e-8)
        assert l10_norm(model.coeffs, gsys.group_index) == 2
        assert all(a >= b for a, b in zip(model.history, model.history[1:]))

    def test_gpsp_sparsity_out_of_range(self, group_system):
        with pytest.raises(RegressionError):
            group_subspace_pursuit(group_system[0], 5)

    def test_group_least_squares_residual(self, group_system):
        gsys, _ = group_system
        assert group_least_squares(gsys, [0, 2]).residual < 1e-8
        assert group_least_squares(gsys, [1]).residual > 1.0

    def test_l10_norm(self):
        assert l10_norm(np.array([0.0, 0.0, 1.0, 0.0, 2.0, 0.0]), np.repeat(np.arange(3), 2)) == 2

    def test_group_trim_drops_weak_group(self, group_system):
        gsys, coeffs = group_system
        weak = coeffs.copy()
        weak[3:6] = 1e-4
        gsys.rhs = gsys.matrix @ weak
        full = group_least_squares(gsys, [0, 1, 2])
        assert group_trim(gsys, full).support == (0, 2)

    def test_group_trim_flags_a_copy(self, group_system):
        gsys, _ = group_system
        gsys.rhs = np.zeros_like(gsys.rhs)
        full = group_least_squares(gsys, [0, 1])
        trimmed = group_trim(gsys, full)
        assert trimmed.support == (0, 1)
        assert "trim_emptied" in trimmed.flags
        assert "trim_emptied" not in full.flags
