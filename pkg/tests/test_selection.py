"""Tests for TEE, MTEE, CEE, RR, RRC and BEE."""

import numpy as np
import pytest

from src.domain.dictionary import monomial_term
from src.domain.errors import SelectionError
from src.domain.models import Boundary, CandidateModel, EvolutionScheme, Field, Grid, LinearSystem
from src.domain.regression import subspace_pursuit
from src.domain.selection import (
    bee,
    candidate_pde,
    cee,
    mtee,
    rr_select,
    rrc_select,
    tee,
    tee_candidates_from_path,
    tee_many,
)


def make_system(matrix, rhs, grid):
    rows = np.arange(matrix.shape[0])
    terms = tuple(monomial_term({0: k + 1}) for k in range(matrix.shape[1]))
    return LinearSystem(matrix, rhs, terms, rows, np.zeros_like(rows), grid)


def candidate(dictionary, coefficients):
    """CandidateModel over the dictionary's terms from {label: coefficient}."""
    coeffs = np.zeros(len(dictionary))
    for label, value in coefficients.items():
        coeffs[dictionary.labels.index(label)] = value
    support = tuple(int(i) for i in np.flatnonzero(coeffs))
    return CandidateModel(support, coeffs, 0.0, tuple(dictionary.terms))


@pytest.mark.unit
class TestTee:
    def test_exact_model_ranks_first(self, travelling_wave, monomial_dictionary):
        fine_dt = travelling_wave.grid.dt / 10
        exact = candidate(monomial_dictionary, {"u_x": -1.0})
        others = [
            candidate(monomial_dictionary, {"u_x": -1.2}),
            candidate(monomial_dictionary, {"u_x": -0.8}),
            candidate(monomial_dictionary, {"u_x": -1.0, "u": 0.1}),
            candidate(monomial_dictionary, {"u_x": -1.0, "u_xx": 0.01}),
            candidate(monomial_dictionary, {"u": 0.5}),
        ]
        errors = tee_many([exact] + others, travelling_wave, fine_dt, max_workers=2)
        assert errors[0] == min(errors)
        assert errors[0] < 0.5 * min(errors[1:])

    def test_zero_model_is_frozen_initial_state(self, travelling_wave, monomial_dictionary):
        grid = travelling_wave.grid
        zero = candidate(monomial_dictionary, {})
        U = travelling_wave.values
        expected = np.abs(U - U[:, :1]).sum() * grid.dx * grid.dt
        assert tee(zero, travelling_wave, grid.dt / 10) == pytest.approx(expected)

    def test_tee_many_keeps_order(self, travelling_wave, monomial_dictionary):
        fine_dt = travelling_wave.grid.dt / 10
        models = [candidate(monomial_dictionary, {"u_x": -0.8}), candidate(monomial_dictionary, {"u_x": -1.0})]
        assert tee_many(models, travelling_wave, fine_dt, max_workers=2) == [
            tee(m, travelling_wave, fine_dt) for m in models
        ]

    def test_step_must_be_fine(self, travelling_wave, monomial_dictionary):
        with pytest.raises(SelectionError, match="dt/10"):
            tee(candidate(monomial_dictionary, {"u_x": -1.0}), travelling_wave, travelling_wave.grid.dt / 5)

    def test_candidate_pde_scheme(self, periodic_grid, dirichlet_grid, monomial_dictionary):
        model = candidate(monomial_dictionary, {"u*u_x": -1.0, "u_xx": 0.1})
        pde = candidate_pde(model, periodic_grid, np.zeros(periodic_grid.nx))
        assert pde.scheme == EvolutionScheme.SPECTRAL
        assert [t.label for t in pde.terms] == ["u_xx", "u*u_x"]
        np.testing.assert_array_equal(pde.coeffs, [0.1, -1.0])
        assert candidate_pde(model, dirichlet_grid, np.zeros(dirichlet_grid.nx)).scheme == EvolutionScheme.FD


@pytest.mark.unit
class TestMtee:
    def test_short_window_is_smaller(self, travelling_wave, monomial_dictionary):
        exact = candidate(monomial_dictionary, {"u_x": -1.0})
        fine_dt = travelling_wave.grid.dt / 10
        short = mtee(exact, travelling_wave, fine_dt, w=1, max_workers=2)
        long = mtee(exact, travelling_wave, fine_dt, w=travelling_wave.grid.nt - 1)
        assert short <= 2 * long

    def test_diverged_shoots_get_penalty(self, monomial_dictionary):
        grid = Grid.over((0.0, 1.0), 32, 0.05, 6, Boundary.PERIODIC)
        x, t = np.meshgrid(grid.x, grid.t, indexing="ij")
        data = Field(grid, np.sin(2 * np.pi * x) * np.exp(-t))
        unstable = candidate(monomial_dictionary, {"u_xx": -1.0})
        assert mtee(unstable, data, grid.dt / 10, w=1) == pytest.approx(1e3 * np.linalg.norm(data.values))

    @pytest.mark.parametrize("w", [0, 101])
    def test_window_range(self, travelling_wave, monomial_dictionary, w):
        with pytest.raises(SelectionError, match="window"):
            mtee(candidate(monomial_dictionary, {"u_x": -1.0}), travelling_wave, 1e-4, w=w)


@pytest.mark.unit
class TestCee:
    def test_consistent_system_has_zero_error(self, periodic_grid):
        rng = np.random.default_rng(1)
        F = rng.normal(size=(50, 4))
        sys = make_system(F, F @ np.array([0.0, 2.0, 0.0, -1.0]), periodic_grid)
        assert cee(sys, [1, 3]) < 1e-6
        assert cee(sys, [0]) > 1.0

    def test_empty_support_is_validation_norm(self, periodic_grid):
        sys = make_system(np.ones((10, 2)), np.arange(10.0), periodic_grid)
        assert cee(sys, []) == pytest.approx(np.linalg.norm([8.0, 9.0]))

    def test_rank_deficient_flag(self, periodic_grid):
        F = np.column_stack([np.arange(10.0), np.arange(10.0)])
        flags = []
        cee(make_system(F, np.arange(10.0), periodic_grid), [0, 1], flags=flags)
        assert flags == ["rank_deficient"]

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 0.9])
    def test_bad_split(self, periodic_grid, alpha):
        with pytest.raises(SelectionError):
            cee(make_system(np.ones((3, 1)), np.ones(3), periodic_grid), [0], alpha=alpha)


@pytest.mark.unit
class TestResidualReduction:
    def test_plateau_after_true_sparsity(self):
        selection = rr_select([10.0, 0.1, 0.099, 0.098, 0.097, 0.096], n_rr=1)
        assert selection.k == 2 and not selection.flagged

    def test_scale_invariant(self):
        residuals = np.array([5.0, 2.0, 0.5, 0.49, 0.48, 0.47, 0.46, 0.45])
        assert rr_select(residuals, n_rr=2).k == rr_select(7.0 * residuals, n_rr=2).k == 3

    def test_no_plateau_falls_back(self):
        selection = rr_select(np.arange(10.0, 0.0, -1.0), n_rr=1)
        assert selection.flagged
        assert selection.k == 1
        assert len(selection.scores) == 9

    def test_too_few_residuals(self):
        with pytest.raises(SelectionError):
            rr_select([1.0, 0.5], n_rr=5)

    def test_subspace_pursuit_sweep_stops_at_true_sparsity(self, periodic_grid):
        rng = np.random.default_rng(0)
        matrix = rng.standard_normal((400, 12))
        matrix /= np.linalg.norm(matrix, axis=0)
        coeffs = np.zeros(12)
        coeffs[[1, 4, 7]] = [3.0, -2.0, 1.0]
        rhs = matrix @ coeffs + 1e-3 * rng.standard_normal(400)
        sys = make_system(matrix, rhs, periodic_grid)
        sweep = [subspace_pursuit(sys, k) for k in range(1, 13)]
        assert sweep[2].support == (1, 4, 7)
        squared = [m.residual ** 2 for m in sweep]
        selection = rr_select(squared, n_rr=5, rho=0.015)
        assert selection.k == 3 and not selection.flagged
        expected = [(squared[k] - squared[k + 5]) / (5 * squared[0]) for k in range(7)]
        np.testing.assert_allclose(selection.scores, expected)

    def test_squared_and_plain_norms_can_disagree(self):
        norms = np.array([2.04, 0.351, 0.0497, 0.049, 0.048, 0.047, 0.046, 0.045])
        assert rr_select(norms, n_rr=5).k == 3
        assert rr_select(norms ** 2, n_rr=5).k == 2

    def test_rrc_constant_errors(self):
        assert rrc_select([2.0, 1.0, 1.0, 1.0]).l == 1

    def test_rrc_zero_error_candidate(self):
        selection = rrc_select([1.0, 0.0, 0.0, 0.0])
        assert selection.l == 1 and selection.rho == 0.0

    def test_rrc_penalty_stops_at_knee(self):
        selection = rrc_select([5.0, 3.0, 0.1, 0.09, 0.085])
        assert selection.l == 2
        assert selection.rho == pytest.approx(np.mean([3.0, 0.1, 0.09, 0.085]))

    def test_rrc_too_short(self):
        with pytest.raises(SelectionError):
            rrc_select([1.0])


@pytest.mark.unit
class TestBee:
    def test_constant_magnitudes_pick_first(self):
        assert bee({5: [1.0, 2.0], 10: [1.0, 2.0], 15: [1.0, 2.0]}).nb == 5

    def test_plateau(self):
        selection = bee({5: [1.0, 1.0], 10: [1.5, 1.0], 15: [1.52, 1.0]})
        assert selection.nb == 10
        assert selection.changes[0] == pytest.approx(0.5)

    def test_change_is_relative_per_block(self):
        selection = bee({5: [10.0, 0.1], 10: [10.0, 0.2], 15: [10.0, 0.2]})
        assert selection.changes[0] == pytest.approx(1.0)
        assert selection.nb == 10

    def test_zero_blocks(self):
        assert bee({5: [1.0, 0.0], 10: [1.0, 0.0]}).nb == 5
        selection = bee({5: [1.0, 0.0], 10: [1.0, 0.3], 15: [1.0, 0.3]})
        assert selection.changes[0] == float("inf")
        assert selection.nb == 10

    def test_no_plateau_flags_largest(self):
        selection = bee({5: [1.0], 10: [2.0], 20: [4.0]})
        assert selection.nb == 20 and selection.flagged

    def test_empty(self):
        with pytest.raises(SelectionError):
            bee({})


@pytest.mark.unit
class TestTeeCandidates:
    def test_subsets_in_first_occurrence_order(self):
        path = [(1.0, ()), (0.5, (2,)), (0.1, (0, 2)), (0.01, tuple(range(13)))]
        assert tee_candidates_from_path(path) == [(2,), (0,), (0, 2)]

    def test_subset_count(self):
        assert len(tee_candidates_from_path([(0.1, (0, 1, 2))])) == 7
