"""Tests for coefficient, support, residual and dynamic metrics."""

import numpy as np
import pytest

from src.domain.dictionary import monomial_term, weak_term
from src.domain.errors import MetricError
from src.domain.metrics import (
    coefficient_errors,
    dynamic_error,
    evaluate_candidate,
    evaluate_report,
    function_error,
    nsr,
    residual_error,
    support_scores,
)
from src.domain.models import Boundary, CandidateModel, EvolutionScheme, Grid, LinearSystem, PdeSpec


@pytest.fixture
def small_system(periodic_grid):
    rng = np.random.default_rng(3)
    matrix = rng.standard_normal((120, 4))
    c_true = np.array([0.0, -1.0, 0.0, 0.1])
    terms = tuple(monomial_term({0: k + 1}) for k in range(4))
    rows = np.arange(120)
    sys = LinearSystem(matrix, matrix @ c_true, terms, rows, np.zeros_like(rows), periodic_grid)
    return sys, c_true


@pytest.fixture
def transport_grid():
    return Grid.over((0.0, 1.0), 64, 0.5, 11, Boundary.PERIODIC)


def transport(grid, coefficient, scheme=EvolutionScheme.SPECTRAL):
    return PdeSpec((weak_term(1, 1),), np.array([coefficient]), grid, np.sin(2 * np.pi * grid.x), scheme)


@pytest.mark.unit
class TestCoefficientErrors:
    def test_exact_is_zero(self):
        errors = coefficient_errors([-1.0, 0.0, 0.1], [-1.0, 0.0, 0.1])
        assert errors == {"e_c": 0.0, "e2": 0.0, "e_inf": 0.0}

    def test_single_term(self):
        errors = coefficient_errors([-1.02], [-1.0])
        assert errors["e_c"] == pytest.approx(0.02)
        assert errors["e2"] == pytest.approx(0.02)
        assert errors["e_inf"] == pytest.approx(0.02)

    def test_relative_to_l1_norm(self):
        errors = coefficient_errors([-1.0, 0.2, 0.0], [-1.0, 0.1, 0.0])
        assert errors["e_c"] == pytest.approx(0.1 / 1.1)

    def test_length_mismatch(self):
        with pytest.raises(MetricError, match="differ in length"):
            coefficient_errors([1.0, 2.0], [1.0])

    def test_zero_truth(self):
        with pytest.raises(MetricError, match="zero"):
            coefficient_errors([1.0], [0.0])

    def test_function_error(self):
        truth = np.linspace(1.0, 2.0, 50)
        assert function_error(truth, truth) == 0.0
        assert function_error(1.01 * truth, truth) == pytest.approx(0.01)


@pytest.mark.unit
class TestSupportScores:
    def test_exact(self):
        assert support_scores({1, 3}, [3, 1]) == {"tpr": 1.0, "ppv": 1.0, "jaccard": 1.0}

    def test_one_extra_term(self):
        assert support_scores(["u*u_x", "u"], ["u*u_x"]) == {"tpr": 1.0, "ppv": 0.5, "jaccard": 0.5}

    def test_disjoint(self):
        assert support_scores([0], [1]) == {"tpr": 0.0, "ppv": 0.0, "jaccard": 0.0}

    def test_empty_estimate_flags(self):
        flags = []
        scores = support_scores([], [2], flags)
        assert scores["ppv"] == 0.0 and scores["tpr"] == 0.0
        assert flags == ["empty_support"]

    def test_empty_truth(self):
        with pytest.raises(MetricError, match="true support is empty"):
            support_scores([1], [])


@pytest.mark.unit
class TestResidualAndNsr:
    def test_residual_zero_at_truth(self, small_system):
        sys, c_true = small_system
        assert residual_error(sys, c_true, c_true) == 0.0

    def test_residual_is_homogeneous(self, small_system):
        sys, c_true = small_system
        delta = np.array([0.0, 0.05, 0.0, -0.01])
        one = residual_error(sys, c_true + delta, c_true)
        assert one > 0
        assert residual_error(sys, c_true + 2 * delta, c_true) == pytest.approx(2 * one)

    def test_residual_uses_physical_matrix(self, small_system):
        sys, c_true = small_system
        scale = np.array([2.0, 0.5, 1.0, 4.0])
        scaled = LinearSystem(sys.matrix / scale, sys.rhs, sys.terms, sys.row_x, sys.row_t, sys.grid,
                              col_scale=scale)
        delta = np.array([0.1, 0.0, 0.0, 0.0])
        assert residual_error(scaled, c_true + delta, c_true) == pytest.approx(
            residual_error(sys, c_true + delta, c_true))

    def test_residual_wrong_length(self, small_system):
        sys, _ = small_system
        with pytest.raises(MetricError, match="length 4"):
            residual_error(sys, [0.0], [0.0])

    def test_nsr_consistent_system_is_zero(self, small_system):
        sys, c_true = small_system
        assert nsr(sys, c_true) == pytest.approx(0.0, abs=1e-12)

    def test_nsr_against_weakest_true_column(self, small_system):
        sys, c_true = small_system
        noise = np.random.default_rng(5).standard_normal(sys.n_rows) * 0.01
        noisy = LinearSystem(sys.matrix, sys.rhs + noise, sys.terms, sys.row_x, sys.row_t, sys.grid)
        weakest = min(np.linalg.norm(sys.matrix[:, 1]) * 1.0, np.linalg.norm(sys.matrix[:, 3]) * 0.1)
        assert nsr(noisy, c_true) == pytest.approx(np.linalg.norm(noise) / weakest)

    def test_nsr_zero_truth(self, small_system):
        sys, _ = small_system
        with pytest.raises(MetricError, match="zero"):
            nsr(sys, np.zeros(4))


@pytest.mark.unit
class TestDynamicError:
    def test_identical_models(self, transport_grid):
        assert dynamic_error(transport(transport_grid, -1.0), transport(transport_grid, -1.0)) == 0.0

    def test_wrong_speed_is_positive(self, transport_grid):
        assert dynamic_error(transport(transport_grid, -1.0), transport(transport_grid, -0.5)) > 0.1

    def test_diverged_estimate(self, transport_grid):
        flags = []
        backward_heat = PdeSpec((weak_term(2, 1),), np.array([-1.0]), transport_grid,
                                np.sin(2 * np.pi * transport_grid.x), EvolutionScheme.FD)
        error = dynamic_error(transport(transport_grid, -1.0), backward_heat, flags=flags)
        assert error == float("inf")
        assert flags == ["diverged"]

    def test_grid_mismatch(self, transport_grid):
        other = Grid.over((0.0, 1.0), 64, 0.5, 21, Boundary.PERIODIC)
        with pytest.raises(MetricError, match="same grid"):
            dynamic_error(transport(transport_grid, -1.0), transport(other, -1.0))


@pytest.mark.unit
class TestEvaluate:
    def test_candidate_at_truth(self, small_system):
        sys, c_true = small_system
        model = CandidateModel((1, 3), c_true.copy(), 0.0, sys.terms)
        metrics = evaluate_candidate(sys, model, c_true)
        assert metrics["e_c"] == 0.0 and metrics["e_r"] == 0.0
        assert metrics["tpr"] == 1.0 and metrics["ppv"] == 1.0
        assert metrics["nsr"] == pytest.approx(0.0, abs=1e-12)

    def test_report(self):
        report = {
            "dictionary": ["1", "u", "u_x", "u*u_x", "u_xx"],
            "chosen": {"support": ["u*u_x", "u_xx", "u"], "coefficients": {"u*u_x": -1.02, "u_xx": 0.1, "u": 0.01}},
        }
        metrics = evaluate_report(report, {"u*u_x": -1.0, "u_xx": 0.1})
        assert metrics["e_c"] == pytest.approx(0.03 / 1.1)
        assert metrics["tpr"] == 1.0
        assert metrics["ppv"] == pytest.approx(2 / 3)

    def test_report_unknown_truth_label(self):
        report = {"dictionary": ["u", "u_x"], "chosen": {"support": [], "coefficients": {}}}
        with pytest.raises(MetricError, match="u_xxx"):
            evaluate_report(report, {"u_xxx": 1.0})

    def test_report_without_dictionary(self):
        with pytest.raises(MetricError, match="no dictionary"):
            evaluate_report({"chosen": {}}, {"u": 1.0})
