"""Tests for grids, fields and the noise model."""

import numpy as np
import pytest

from src.domain.errors import FieldError, GridError, NoiseError
from src.domain.grid.noise import add_gaussian_noise, noise_sigma, sigma_from_nsr, sigma_from_percent
from src.domain.models import Boundary, Field, Grid, NoiseKind, NoiseSpec


@pytest.mark.unit
class TestGrid:
    def test_periodic_spacing_excludes_endpoint(self):
        grid = Grid.over((0.0, 2.0), 16, 1.0, 11)
        assert grid.dx == pytest.approx(0.125)
        assert grid.dt == pytest.approx(0.1)
        assert grid.x[-1] == pytest.approx(2.0 - 0.125)
        assert grid.length == pytest.approx(2.0)

    def test_dirichlet_spacing_includes_endpoint(self):
        grid = Grid.over((0.0, 1.0), 11, 1.0, 5, Boundary.DIRICHLET)
        assert grid.dx == pytest.approx(0.1)
        assert grid.x[-1] == pytest.approx(1.0)
        assert grid.length == pytest.approx(1.0)

    @pytest.mark.parametrize("kwargs", [
        {"nx": 7}, {"nt": 3}, {"dx": 0.0}, {"dt": -0.1},
    ])
    def test_rejects_bad_parameters(self, kwargs):
        params = dict(x0=0.0, dx=0.1, nx=10, t0=0.0, dt=0.1, nt=10)
        params.update(kwargs)
        with pytest.raises(GridError):
            Grid(**params)


@pytest.mark.unit
class TestField:
    def test_shape_must_match_grid(self, periodic_grid):
        with pytest.raises(FieldError, match="does not match"):
            Field(periodic_grid, np.zeros((periodic_grid.nx, periodic_grid.nt + 1)))

    def test_rejects_non_finite(self, periodic_grid):
        values = np.zeros((periodic_grid.nx, periodic_grid.nt))
        values[3, 4] = np.nan
        with pytest.raises(FieldError, match="non-finite"):
            Field(periodic_grid, values)

    def test_rejects_empty(self, periodic_grid):
        with pytest.raises(FieldError, match="empty field"):
            Field(periodic_grid, np.zeros((0, 0)))


@pytest.mark.unit
class TestSigma:
    def test_percent_of_constant(self, periodic_grid):
        field = Field(periodic_grid, np.full((periodic_grid.nx, periodic_grid.nt), 2.0))
        assert sigma_from_percent(field, 10) == pytest.approx(0.2)

    def test_percent_of_zero_field(self, periodic_grid):
        field = Field(periodic_grid, np.zeros((periodic_grid.nx, periodic_grid.nt)))
        assert sigma_from_percent(field, 50) == 0.0

    def test_empty_samples(self):
        with pytest.raises(FieldError, match="empty field"):
            sigma_from_percent(np.array([]), 5)

    def test_nsr_of_constant_is_zero(self):
        assert sigma_from_nsr(np.full(20, 3.7), 0.8) == 0.0

    def test_nsr_alternating(self):
        assert sigma_from_nsr(np.tile([1.0, -1.0], 50), 1.0) == pytest.approx(1.0)

    def test_nsr_sine_against_direct_sum(self):
        x = np.linspace(0.0, 2 * np.pi, 4000, endpoint=False)
        u = np.sin(x)
        mid = 0.5 * (u.max() + u.min())
        expected = 0.5 * np.sqrt(np.sum((u - mid) ** 2) / u.size)
        assert sigma_from_nsr(u, 0.5) == pytest.approx(expected, rel=1e-12)
        assert sigma_from_nsr(u, 0.5) == pytest.approx(0.5 * np.sqrt(0.5), rel=1e-3)

    def test_linear_in_level(self):
        u = np.linspace(-1.0, 3.0, 50)
        assert sigma_from_percent(u, 8) == pytest.approx(2 * sigma_from_percent(u, 4))
        assert sigma_from_nsr(u, 0.6) == pytest.approx(3 * sigma_from_nsr(u, 0.2))

    def test_negative_level(self):
        with pytest.raises(NoiseError):
            sigma_from_percent(np.ones(4), -1)
        with pytest.raises(NoiseError):
            NoiseSpec(NoiseKind.NSR, -0.1)


@pytest.mark.unit
class TestAddNoise:
    def test_zero_level_returns_input(self, travelling_wave):
        noisy = add_gaussian_noise(travelling_wave, NoiseSpec(NoiseKind.PERCENT, 0.0, seed=1))
        np.testing.assert_array_equal(noisy.values, travelling_wave.values)

    def test_deterministic_per_seed(self, travelling_wave):
        spec = NoiseSpec(NoiseKind.PERCENT, 0.05, seed=11)
        a = add_gaussian_noise(travelling_wave, spec)
        b = add_gaussian_noise(travelling_wave, spec)
        np.testing.assert_array_equal(a.values, b.values)
        c = add_gaussian_noise(travelling_wave, NoiseSpec(NoiseKind.PERCENT, 0.05, seed=12))
        assert not np.array_equal(a.values, c.values)

    def test_sample_statistics(self, travelling_wave):
        spec = NoiseSpec(NoiseKind.PERCENT, 0.08, seed=5)
        sigma = noise_sigma(travelling_wave, spec)
        diff = add_gaussian_noise(travelling_wave, spec).values - travelling_wave.values
        assert diff.size >= 10_000
        assert abs(diff.std() - sigma) < 0.05 * sigma
        assert abs(diff.mean()) < 0.05 * sigma

    def test_percent_level_is_fraction(self, travelling_wave):
        spec = NoiseSpec(NoiseKind.PERCENT, 0.04)
        assert noise_sigma(travelling_wave, spec) == pytest.approx(sigma_from_percent(travelling_wave, 4))
