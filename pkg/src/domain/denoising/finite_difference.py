"""Second-order finite-difference differentiation as cached sparse matrices.

Interior rows use central stencils; Dirichlet grids switch to one-sided
stencils of order + 2 points near the edges, periodic grids wrap around.
"""

import logging
from functools import lru_cache
from math import factorial
from typing import Tuple, Union

import numpy as np
import scipy.sparse as sp

from src.domain.errors import DifferentiationError
from src.domain.models import Boundary

logger = logging.getLogger(__name__)

MAX_ORDER = 4


@lru_cache(maxsize=None)
def stencil_weights(offsets: Tuple[int, ...], order: int) -> np.ndarray:
    """Weights w with sum_j w_j f(x + o_j h) ~ h^order f^(order)(x)."""
    offs = np.asarray(offsets, dtype=float)
    vander = np.vander(offs, len(offs), increasing=True).T
    target = np.zeros(len(offs))
    target[order] = factorial(order)
    return np.linalg.solve(vander, target)


def central_offsets(order: int) -> Tuple[int, ...]:
    return (-1, 0, 1) if order <= 2 else (-2, -1, 0, 1, 2)


@lru_cache(maxsize=128)
def derivative_matrix(n: int, spacing: float, order: int, periodic: bool) -> sp.csr_matrix:
    if not 0 <= order <= MAX_ORDER:
        raise DifferentiationError(f"derivative order must be in [0, {MAX_ORDER}], got {order}")
    if order == 0:
        return sp.identity(n, format="csr")
    offsets = central_offsets(order)
    half = len(offsets) // 2
    width = order + 2
    needed = len(offsets) if periodic else max(len(offsets), width)
    if n < needed:
        raise DifferentiationError(
            f"sequence of length {n} is shorter than the {needed}-point stencil for order {order}"
        )

    central = stencil_weights(offsets, order)
    rows, cols, vals = [], [], []
    for i in range(n):
        if periodic or half <= i < n - half:
            idx = np.asarray(offsets) + i
            if periodic:
                idx %= n
            weights = central
        else:
            start = 0 if i < half else n - width
            idx = np.arange(start, start + width)
            weights = stencil_weights(tuple(int(o) for o in idx - i), order)
        rows.extend([i] * len(idx))
        cols.extend(idx.tolist())
        vals.extend(weights.tolist())
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return matrix / spacing ** order


def _is_periodic(boundary: Union[Boundary, str, bool]) -> bool:
    if isinstance(boundary, bool):
        return boundary
    return Boundary(boundary) == Boundary.PERIODIC


def fd_derivative(samples, spacing: float, order: int, boundary: Union[Boundary, str, bool]) -> np.ndarray:
    """d^order/dx^order along axis 0 of samples (1-D, or 2-D with space on axis 0)."""
    values = np.asarray(samples, dtype=float)
    matrix = derivative_matrix(values.shape[0], float(spacing), int(order), _is_periodic(boundary))
    return np.asarray(matrix @ values)


def time_derivative(values: np.ndarray, dt: float, order: int = 1) -> np.ndarray:
    """Derivative along axis 1; time is never periodic."""
    matrix = derivative_matrix(values.shape[1], float(dt), order, False)
    return np.asarray(matrix @ values.T).T
