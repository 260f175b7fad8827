"""System-level errors: residual error, NSR and the evolution (dynamic) error."""

import logging
from typing import List, Optional

import numpy as np

from src.domain.errors import MetricError
from src.domain.models import LinearSystem, PdeSpec
from src.domain.simulation.evolution import evolve_candidate

logger = logging.getLogger(__name__)


def residual_error(sys: LinearSystem, c_hat, c_true) -> float:
    """sqrt(dx dt) ||F (c_hat - c_true)|| on the physical feature matrix."""
    diff = np.asarray(c_hat, dtype=float) - np.asarray(c_true, dtype=float)
    if diff.shape != (sys.n_features,):
        raise MetricError(f"coefficients must have length {sys.n_features}, got {diff.shape}")
    grid = sys.grid
    return float(np.sqrt(grid.dx * grid.dt) * np.linalg.norm(sys.physical_matrix() @ diff))


def nsr(sys: LinearSystem, c_true) -> float:
    """||F c - b|| / min over the true support of ||F_j|| |c_j|."""
    c_true = np.asarray(c_true, dtype=float)
    if c_true.shape != (sys.n_features,):
        raise MetricError(f"coefficients must have length {sys.n_features}, got {c_true.shape}")
    support = np.flatnonzero(c_true)
    if support.size == 0:
        raise MetricError("true coefficient vector is zero")
    physical = sys.physical_matrix()
    signal = np.linalg.norm(physical[:, support], axis=0) * np.abs(c_true[support])
    weakest = float(signal.min())
    if weakest == 0:
        raise MetricError("a true feature column is zero on this system")
    return float(np.linalg.norm(physical @ c_true - sys.rhs) / weakest)


def dynamic_error(pde_true: PdeSpec, pde_hat: PdeSpec, fine_dt: Optional[float] = None,
                  flags: Optional[List[str]] = None) -> float:
    """dx dt sum |u - u_hat| with both PDEs evolved from the same start.

    A diverged evolution gives inf and the "diverged" flag.
    """
    grid = pde_true.grid
    if pde_hat.grid != grid:
        raise MetricError("both PDEs must live on the same grid")
    fine_dt = grid.dt / 10.0 if fine_dt is None else fine_dt
    start = np.asarray(pde_true.initial, dtype=float)
    ref = evolve_candidate(pde_true, fine_dt, grid.nt, start=start)
    est = evolve_candidate(pde_hat, fine_dt, grid.nt, start=start)
    if ref.diverged or est.diverged:
        logger.warning("Dynamic error: evolution diverged (true=%s, estimate=%s)", ref.diverged, est.diverged)
        if flags is not None:
            flags.append("diverged")
        return float("inf")
    return float(np.abs(ref.states - est.states).sum() * grid.dx * grid.dt)
