"""Config sections turned into domain objects."""

import logging
from typing import Dict, Optional

import numpy as np

from src.domain.assembly.weak import default_test_function
from src.domain.denoising.sdd import smoothing_matrix
from src.domain.dictionary.terms import build_dictionary
from src.domain.errors import ConfigError
from src.domain.models import (
    Boundary,
    Dictionary,
    DictionaryStyle,
    Field,
    Grid,
    NoiseKind,
    NoiseSpec,
    SmootherConfig,
    SmootherKind,
    TestFunction,
)
from src.domain.simulation.reference import simulate_reference

logger = logging.getLogger(__name__)


def benchmark_settings(config: Dict, name: str) -> Dict:
    try:
        return config["benchmarks"][name]
    except KeyError:
        raise ConfigError(f"benchmarks.{name} is not configured")


def benchmark_grid(config: Dict, name: str) -> Grid:
    settings = benchmark_settings(config, name)
    return Grid.over(tuple(settings["x_range"]), int(settings["nx"]), float(settings["final_time"]),
                     int(settings["nt"]), Boundary(settings.get("boundary", "periodic")))


def simulate_benchmark(config: Dict, name: Optional[str] = None) -> Field:
    name = name or config["data"]["benchmark"]
    settings = benchmark_settings(config, name)
    return simulate_reference(name, benchmark_grid(config, name), settings.get("init", "sin2pi"),
                              int(settings.get("refine", 10)))


def noise_spec(config: Dict, seed: Optional[int] = None) -> NoiseSpec:
    """noise.level is in percent for kind 'percent' and a plain ratio for 'nsr'."""
    noise = config["noise"]
    kind = NoiseKind(noise["kind"])
    level = float(noise["level"])
    if kind == NoiseKind.PERCENT:
        level /= 100.0
    return NoiseSpec(kind, level, int(config["seed"] if seed is None else seed))


def smoother_config(config: Dict) -> SmootherConfig:
    denoise = config["denoise"]
    return SmootherConfig(SmootherKind(denoise["kind"]), denoise.get("h"), int(denoise.get("degree", 2)))


def dictionary_for(config: Dict, style: Optional[DictionaryStyle] = None) -> Dictionary:
    d = config["dictionary"]
    style = style or DictionaryStyle(d["style"])
    return build_dictionary(int(d["max_alpha"]), int(d["max_beta"]), style, int(d.get("max_total_degree") or 0))


def test_function_for(config: Dict, field: Field, dictionary: Dictionary) -> TestFunction:
    weak = config["weak"]
    return default_test_function(field, dictionary.max_alpha, weak.get("mx"), weak.get("mt"),
                                 weak.get("px"), int(weak.get("pt", 2)))


def fine_step(config: Dict, grid: Grid) -> float:
    return grid.dt / float(config["selection"]["fine_dt_ratio"])


def max_workers(config: Dict) -> int:
    return int(config["parallel"]["max_workers"])


def grid_summary(grid: Grid) -> Dict:
    return {
        "x0": grid.x0, "dx": grid.dx, "nx": grid.nx, "t0": grid.t0, "dt": grid.dt, "nt": grid.nt,
        "boundary": grid.boundary.value,
    }


def denoise_field(field: Field, cfg: SmootherConfig) -> Field:
    """Smoother applied to every time slice."""
    grid = field.grid
    smoother = smoothing_matrix(grid.nx, grid.dx, cfg, grid.periodic)
    return field.with_values(np.asarray(smoother @ field.values))
