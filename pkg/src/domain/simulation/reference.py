"""Reference solutions for the benchmark PDEs.

Periodic grids: Fourier derivatives with integrating-factor RK4 on the
linear part. Dirichlet grids: second-order central differences with RK4,
boundary nodes held fixed and internal steps subdivided for stability.
"""

import logging
import math
from typing import Union

import numpy as np

from src.domain.denoising.finite_difference import derivative_matrix
from src.domain.errors import SimulationError
from src.domain.models import Field, Grid

from .benchmarks import Benchmark, get_benchmark, initial_condition
from .spectral import derivative_symbol

logger = logging.getLogger(__name__)

BLOW_UP = "blow-up; reduce internal step"


def _check(u: np.ndarray, name: str, n: int):
    if not np.all(np.isfinite(u)):
        logger.error("%s reference simulation became non-finite at slice %d", name, n)
        raise SimulationError(BLOW_UP)


def _integrating_factor_rk4(bm: Benchmark, grid: Grid, u0: np.ndarray, refine: int) -> np.ndarray:
    nx, dx = grid.nx, grid.dx
    h = grid.dt / refine
    linear = np.zeros(nx // 2 + 1, dtype=complex)
    for order, coef in bm.linear.items():
        linear += coef * derivative_symbol(nx, dx, order)
    d1 = derivative_symbol(nx, dx, 1)
    e_half = np.exp(linear * h / 2)
    e_full = e_half * e_half

    def nonlinear(v):
        if bm.flux == 0.0:
            return 0.0
        u = np.fft.irfft(v, n=nx)
        return bm.flux * d1 * np.fft.rfft(u * u)

    out = np.empty((nx, grid.nt))
    out[:, 0] = u0
    v = np.fft.rfft(u0)
    for n in range(1, grid.nt):
        for _ in range(refine):
            k1 = nonlinear(v)
            k2 = nonlinear(e_half * (v + 0.5 * h * k1))
            k3 = nonlinear(e_half * v + 0.5 * h * k2)
            k4 = nonlinear(e_full * v + h * e_half * k3)
            v = e_full * v + h / 6.0 * (e_full * k1 + 2.0 * e_half * (k2 + k3) + k4)
        out[:, n] = np.fft.irfft(v, n=nx)
        _check(out[:, n], bm.name, n)
    return out


def _dirichlet_rk4(bm: Benchmark, grid: Grid, u0: np.ndarray, refine: int) -> np.ndarray:
    nx, dx = grid.nx, grid.dx
    mats = {order: derivative_matrix(nx, dx, order, False) for order in bm.linear}
    d1 = derivative_matrix(nx, dx, 1, False)

    def rhs(u):
        du = np.zeros_like(u)
        for order, coef in bm.linear.items():
            du += coef * (mats[order] @ u)
        if bm.flux:
            du += bm.flux * (d1 @ (u * u))
        du[0] = du[-1] = 0.0
        return du

    # explicit RK4 needs h * spectral radius of order one
    radius = sum(abs(c) * (2.0 / dx) ** j for j, c in bm.linear.items())
    radius += 4.0 * abs(bm.flux) * max(1.0, float(np.abs(u0).max())) / dx
    sub = max(1, math.ceil(grid.dt / refine * radius))
    h = grid.dt / (refine * sub)
    if sub > 1:
        logger.debug("%s: %d stability substeps per internal step", bm.name, sub)

    out = np.empty((nx, grid.nt))
    out[:, 0] = u0
    u = u0.copy()
    for n in range(1, grid.nt):
        for _ in range(refine * sub):
            k1 = rhs(u)
            k2 = rhs(u + 0.5 * h * k1)
            k3 = rhs(u + 0.5 * h * k2)
            k4 = rhs(u + h * k3)
            u = u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[:, n] = u
        _check(u, bm.name, n)
    return out


def simulate_reference(name: str, grid: Grid, init: Union[str, np.ndarray] = "sin2pi",
                       refine: int = 10) -> Field:
    """Solve benchmark `name` on a time grid refined `refine` times and subsample to `grid`."""
    bm = get_benchmark(name)
    if refine < 1:
        raise SimulationError(f"refine must be at least 1, got {refine}")
    if bm.periodic_only and not grid.periodic:
        raise SimulationError(f"{name} requires a periodic grid")

    if isinstance(init, str):
        u0 = initial_condition(init, grid.x, grid.x0, grid.length)
    else:
        u0 = np.asarray(init, dtype=float)
        if u0.shape != (grid.nx,):
            raise SimulationError(f"initial samples must have length nx={grid.nx}, got {u0.shape}")

    logger.info("Simulating %s: nx=%d nt=%d dt=%g refine=%d (%s)",
                name, grid.nx, grid.nt, grid.dt, refine, grid.boundary.value)
    if grid.periodic:
        values = _integrating_factor_rk4(bm, grid, u0, refine)
    else:
        values = _dirichlet_rk4(bm, grid, u0, refine)
    return Field(grid, values)
