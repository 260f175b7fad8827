"""Forward-Euler evolution of candidate PDEs, used by TEE and MTEE.

Stiff candidates get their step halved until the explicit stability
indicator lambda * h <= 0.5; past 2^14 substeps per observation step the
candidate is declared diverged. Dirichlet boundary nodes stay fixed.
"""

import logging
import math
from typing import Optional

import numpy as np

from src.domain.denoising.finite_difference import derivative_matrix
from src.domain.dictionary.evaluation import DerivativeTable, eval_feature_pointwise
from src.domain.errors import SimulationError
from src.domain.models import EvolutionResult, EvolutionScheme, PdeSpec

from .spectral import spectral_derivative

logger = logging.getLogger(__name__)

MAX_SUBSTEPS = 2 ** 14
STABILITY_LIMIT = 0.5
# States growing past this multiple of the initial amplitude count as diverged.
GROWTH_LIMIT = 1e8


def stability_indicator(model: PdeSpec, amplitude: float) -> float:
    """Sum over terms of |c_k| * amplitude^(degree-1) * (symbol bound)^order."""
    grid = model.grid
    bound = np.pi / grid.dx if model.scheme == EvolutionScheme.SPECTRAL else 2.0 / grid.dx
    amp = max(1.0, amplitude)
    total = 0.0
    for coef, term in zip(model.coeffs, model.terms):
        if coef == 0:
            continue
        total += abs(coef) * amp ** max(term.degree - 1, 0) * bound ** term.max_order
    return total


def _differentiator(model: PdeSpec):
    grid = model.grid
    if model.scheme == EvolutionScheme.SPECTRAL:
        if not grid.periodic:
            raise SimulationError("spectral evolution requires a periodic grid")
        return lambda values, order: spectral_derivative(values, grid.dx, order)

    def fd(values, order):
        if order == 0:
            return values
        return derivative_matrix(grid.nx, grid.dx, order, grid.periodic) @ values
    return fd


def evolve_candidate(model: PdeSpec, fine_dt: float, horizon: int,
                     start: Optional[np.ndarray] = None) -> EvolutionResult:
    """Integrate u_t = sum c_k f_k from `start` and record `horizon` states.

    Column 0 of the result is the starting state, column n the state n
    observation steps later. A diverged run reports the observation index
    where it failed; later columns are NaN.
    """
    grid = model.grid
    if fine_dt <= 0 or fine_dt > grid.dt / 5.0 * (1 + 1e-12):
        raise SimulationError(f"fine_dt must be in (0, dt/5] = (0, {grid.dt / 5.0:g}], got {fine_dt:g}")
    if not 1 <= horizon <= grid.nt:
        raise SimulationError(f"horizon must be in [1, nt={grid.nt}], got {horizon}")

    u = np.array(model.initial if start is None else start, dtype=float)
    states = np.full((grid.nx, horizon), np.nan)
    states[:, 0] = u
    active = [(c, t) for c, t in zip(model.coeffs, model.terms) if c != 0]
    if not active or horizon == 1:
        states[:] = u[:, None]
        return EvolutionResult(states)

    amplitude = float(np.abs(u).max())
    substeps = math.ceil(grid.dt / fine_dt - 1e-9)
    h = grid.dt / substeps
    indicator = stability_indicator(model, amplitude)
    while h * indicator > STABILITY_LIMIT:
        h /= 2.0
        substeps *= 2
        if substeps > MAX_SUBSTEPS:
            logger.debug("Candidate needs more than %d substeps; treated as diverged", MAX_SUBSTEPS)
            return EvolutionResult(states, diverged=True, diverged_at=1, substeps=substeps)

    differentiate = _differentiator(model)
    fixed_ends = not grid.periodic
    limit = GROWTH_LIMIT * max(1.0, amplitude)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, horizon):
            for _ in range(substeps):
                table = DerivativeTable(u, differentiate)
                rate = np.zeros_like(u)
                for coef, term in active:
                    rate += coef * eval_feature_pointwise(term, table)
                if fixed_ends:
                    rate[0] = rate[-1] = 0.0
                u = u + h * rate
            if not np.all(np.isfinite(u)) or np.abs(u).max() > limit:
                return EvolutionResult(states, diverged=True, diverged_at=n, substeps=substeps)
            states[:, n] = u
    return EvolutionResult(states, substeps=substeps)
