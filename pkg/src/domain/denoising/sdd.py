"""Successively denoised differentiation: d^k u ~ (S D)^k S [U].

S is the configured smoother and D the first-derivative matrix, both
applied along one axis. The time derivative uses the same contract along
t with a non-periodic D; the MLS bandwidth keeps its width in grid
spacings when carried over to the time axis.
"""

import logging
from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.domain.errors import SmootherError
from src.domain.models import Field, SmootherConfig, SmootherKind

from .finite_difference import derivative_matrix
from .lsma import lsma_matrix
from .mls import bandwidth, mls_matrix

logger = logging.getLogger(__name__)


def smoothing_matrix(n: int, spacing: float, cfg: SmootherConfig, periodic: bool,
                     h: Optional[float] = None) -> sp.csr_matrix:
    if cfg.kind == SmootherKind.NONE:
        return sp.identity(n, format="csr")
    if cfg.kind == SmootherKind.LSMA:
        return lsma_matrix(n, bool(periodic))
    h = bandwidth(cfg, spacing) if h is None else h
    return mls_matrix(n, float(spacing), float(h), cfg.degree, bool(periodic))


def sdd_apply(values: np.ndarray, spacing: float, order: int, cfg: SmootherConfig,
              periodic: bool, h: Optional[float] = None) -> np.ndarray:
    """(S D)^order S applied along axis 0."""
    if order < 0:
        raise SmootherError(f"derivative order must be nonnegative, got {order}")
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    smoother = smoothing_matrix(n, spacing, cfg, periodic, h)
    result = np.asarray(smoother @ values)
    if order:
        diff = derivative_matrix(n, float(spacing), 1, bool(periodic))
        for _ in range(order):
            result = np.asarray(smoother @ (diff @ result))
    return result


def sdd_derivative(field: Field, order: int, cfg: SmootherConfig) -> np.ndarray:
    grid = field.grid
    return sdd_apply(field.values, grid.dx, order, cfg, grid.periodic)


def sdd_time_derivative(field: Field, cfg: SmootherConfig) -> np.ndarray:
    """S_t D_t S_t along time."""
    grid = field.grid
    h_t = None
    if cfg.kind == SmootherKind.MLS:
        h_t = bandwidth(cfg, grid.dx) / grid.dx * grid.dt
    return sdd_apply(field.values.T, grid.dt, 1, cfg, False, h_t).T
