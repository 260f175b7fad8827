"""Least-squares moving average.

At interior points a quadratic is fitted so that its 5-point moving
averages match the data's 5-point moving averages at the point and its
four neighbours; the smoothed value is the quadratic at the point. The
resulting 9-point weights are fixed, so the smoother is a sparse matrix.
Near Dirichlet edges the window shrinks to the largest symmetric one and
falls back to a plain least-squares quadratic.
"""

from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_triangular

from src.domain.errors import SmootherError

MIN_LENGTH = 9
_HALF = 4


def _quadratic_eval_weights(offsets: np.ndarray, at: float) -> np.ndarray:
    """Weights on samples at `offsets` giving the LS quadratic's value at `at`."""
    design = np.vander(offsets.astype(float), 3, increasing=True)
    q, r = np.linalg.qr(design)
    coef_map = solve_triangular(r, q.T)
    return np.array([1.0, at, at * at]) @ coef_map


@lru_cache(maxsize=1)
def interior_weights() -> np.ndarray:
    """Weights on U[i-4..i+4]."""
    d = np.arange(-2, 3, dtype=float)
    # moving average of s -> a0 + a1 s + a2 s^2 over five points shifts a2 by mean(l^2) = 2
    design = np.column_stack([np.ones(5), d, d ** 2 + 2.0])
    q, r = np.linalg.qr(design)
    on_averages = solve_triangular(r, q.T)[0]
    return np.convolve(on_averages, np.full(5, 0.2))


@lru_cache(maxsize=64)
def lsma_matrix(n: int, periodic: bool = False) -> sp.csr_matrix:
    if n < MIN_LENGTH:
        raise SmootherError(f"LSMA needs at least {MIN_LENGTH} samples, got {n}")
    interior = interior_weights()
    offsets = np.arange(-_HALF, _HALF + 1)
    rows, cols, vals = [], [], []
    for i in range(n):
        radius = min(i, n - 1 - i)
        if periodic or radius >= _HALF:
            idx = offsets + i
            if periodic:
                idx %= n
            weights = interior
        elif radius >= 2:
            local = np.arange(-radius, radius + 1)
            idx = local + i
            weights = _quadratic_eval_weights(local, 0.0)
        else:
            start = 0 if i < n - 1 - i else n - 5
            idx = np.arange(start, start + 5)
            weights = _quadratic_eval_weights(idx - start, float(i - start))
        rows.extend([i] * len(idx))
        cols.extend(idx.tolist())
        vals.extend(weights.tolist())
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def lsma_smooth(samples, spacing: float, periodic: bool = False) -> np.ndarray:
    """LSMA along axis 0. The weights do not depend on the spacing."""
    if spacing <= 0:
        raise SmootherError(f"spacing must be positive, got {spacing}")
    values = np.asarray(samples, dtype=float)
    return np.asarray(lsma_matrix(values.shape[0], bool(periodic)) @ values)
