"""Moving least squares: Gaussian-weighted local polynomial fit at every node."""

import logging
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_triangular

from src.domain.errors import SmootherError
from src.domain.models import SmootherConfig, SmootherKind

logger = logging.getLogger(__name__)

# Window half-width in bandwidths; exp(-36) is below double precision relevance.
WINDOW_BANDWIDTHS = 6.0
_RANK_TOL = 1e-10


@lru_cache(maxsize=64)
def mls_matrix(n: int, spacing: float, h: float, degree: int, periodic: bool = False) -> sp.csr_matrix:
    radius = int(np.floor(WINDOW_BANDWIDTHS * h / spacing))
    if periodic:
        radius = min(radius, (n - 1) // 2)
    rows, cols, vals = [], [], []
    for i in range(n):
        if periodic:
            offs = np.arange(-radius, radius + 1)
            idx = (i + offs) % n
        else:
            idx = np.arange(max(0, i - radius), min(n - 1, i + radius) + 1)
            offs = idx - i
        if len(offs) < degree + 1:
            raise SmootherError(f"bandwidth too small: h={h:g} leaves {len(offs)} points in the window")
        sqrt_w = np.exp(-0.5 * (offs * spacing / h) ** 2)
        scale = max(1, int(np.abs(offs).max()))
        design = np.vander(offs / scale, degree + 1, increasing=True) * sqrt_w[:, None]
        q, r = np.linalg.qr(design)
        diag = np.abs(np.diag(r))
        if diag.min() < _RANK_TOL * diag.max():
            raise SmootherError(f"bandwidth too small: h={h:g} gives a singular local fit at node {i}")
        weights = solve_triangular(r, q.T)[0] * sqrt_w
        rows.extend([i] * len(idx))
        cols.extend(idx.tolist())
        vals.extend(weights.tolist())
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def bandwidth(cfg: SmootherConfig, spacing: float) -> float:
    return cfg.mls_bandwidth if cfg.mls_bandwidth is not None else 5.0 * spacing


def mls_smooth(field_slice, spacing: float, cfg: SmootherConfig, periodic: bool = False) -> np.ndarray:
    """MLS along axis 0 with kernel exp(-|x_i - x_j|^2 / h^2)."""
    if cfg.kind != SmootherKind.MLS:
        raise SmootherError(f"mls_smooth needs an MLS smoother config, got {cfg.kind.value}")
    values = np.asarray(field_slice, dtype=float)
    matrix = mls_matrix(values.shape[0], float(spacing), float(bandwidth(cfg, spacing)), cfg.degree, bool(periodic))
    return np.asarray(matrix @ values)
