"""
Pytest configuration and fixtures for pde-ident tests.
"""

import numpy as np
import pytest

from src.config.schema import DEFAULTS, merge_config, validate_config
from src.domain.dictionary.terms import build_dictionary
from src.domain.models import Boundary, DictionaryStyle, Field, Grid
from src.domain.simulation.reference import simulate_reference


@pytest.fixture
def config(tmp_path):
    """Validated defaults with every output redirected to tmp."""
    cfg = merge_config(DEFAULTS, {
        "output": {"dir": str(tmp_path / "out")},
        "logging": {"dir": str(tmp_path / "logs")},
        "parallel": {"max_workers": 2},
    })
    return validate_config(cfg)


@pytest.fixture
def periodic_grid():
    return Grid.over((0.0, 1.0), 64, 0.1, 21, Boundary.PERIODIC)


@pytest.fixture
def dirichlet_grid():
    return Grid.over((0.0, 1.0), 65, 0.1, 21, Boundary.DIRICHLET)


@pytest.fixture
def travelling_wave():
    """u = sin(2 pi (x - t)) on a periodic grid: u_t = -u_x exactly."""
    grid = Grid.over((0.0, 1.0), 128, 0.5, 101, Boundary.PERIODIC)
    x, t = np.meshgrid(grid.x, grid.t, indexing="ij")
    return Field(grid, np.sin(2 * np.pi * (x - t)))


@pytest.fixture(scope="session")
def burgers_field():
    """Viscous Burgers on a small periodic grid."""
    grid = Grid.over((0.0, 1.0), 128, 0.1, 51, Boundary.PERIODIC)
    return simulate_reference("viscous_burgers", grid, "sin2pi", refine=10)


@pytest.fixture
def weak_dictionary():
    return build_dictionary(2, 2, DictionaryStyle.WEAK)


@pytest.fixture
def monomial_dictionary():
    return build_dictionary(2, 2, DictionaryStyle.MONOMIAL, 2)
