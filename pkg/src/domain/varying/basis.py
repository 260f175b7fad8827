"""Uniform-knot bases for varying coefficients.

Hats are degree-1 B-splines, so both kinds go through scipy's BSpline with
clamped knots and form a partition of unity on the domain. `order` is the
polynomial degree of the spline pieces.
"""

import logging
from typing import Tuple

import numpy as np
from scipy.interpolate import BSpline

from src.domain.errors import BasisError
from src.domain.models import BasisKind, BasisSet, Grid

logger = logging.getLogger(__name__)


def clamped_knots(lo: float, hi: float, nb: int, degree: int) -> np.ndarray:
    interior = np.linspace(lo, hi, nb - degree + 1)
    return np.concatenate([np.full(degree, lo), interior, np.full(degree, hi)])


def _spline_knots(lo: float, hi: float, nb: int, degree: int) -> Tuple[np.ndarray, int]:
    degree = min(degree, nb - 1)
    return clamped_knots(lo, hi, nb, degree), degree


def build_basis(kind, nb: int, grid: Grid, in_time: bool = False, order: int = 3,
                nb_time: int = 3) -> BasisSet:
    kind = BasisKind(kind)
    x_domain = (grid.x0, grid.x0 + grid.length)
    t_domain = (grid.t0, grid.t0 + (grid.nt - 1) * grid.dt)
    if kind == BasisKind.CONSTANT:
        return BasisSet(kind, 1, 0, x_domain, np.array([]), t_domain=t_domain)
    if nb < 2:
        raise BasisError(f"basis needs at least 2 functions, got {nb}")
    if in_time and nb_time < 1:
        raise BasisError(f"time basis needs at least 1 function, got {nb_time}")

    degree = 1 if kind == BasisKind.HAT else order
    knots, degree = _spline_knots(*x_domain, nb, degree)
    t_knots, t_degree = None, 0
    if in_time and nb_time > 1:
        t_knots, t_degree = _spline_knots(*t_domain, nb_time, degree)
    logger.debug("Built %s basis: nb=%d degree=%d in_time=%s", kind.value, nb, degree, in_time)
    return BasisSet(kind, nb, degree, x_domain, knots, in_time=in_time,
                    nb_time=nb_time if in_time else 1, t_domain=t_domain,
                    t_knots=t_knots, t_order=t_degree)


def _evaluate(knots, degree, n, points, deriv) -> np.ndarray:
    if knots is None or n == 1:
        return np.ones((len(points), 1)) if deriv == 0 else np.zeros((len(points), 1))
    spline = BSpline(knots, np.eye(n), degree)
    if deriv:
        spline = spline.derivative(deriv) if deriv <= degree else None
        if spline is None:
            return np.zeros((len(points), n))
    return spline(np.asarray(points, dtype=float))


def evaluate_space(basis: BasisSet, x: np.ndarray, deriv: int = 0) -> np.ndarray:
    """(len(x), nb) values of d^deriv phi_m."""
    if basis.kind == BasisKind.CONSTANT:
        return _evaluate(None, 0, 1, x, deriv)
    return _evaluate(basis.knots, basis.order, basis.nb, x, deriv)


def evaluate_time(basis: BasisSet, t: np.ndarray) -> np.ndarray:
    """(len(t), nb_time) values; a single constant column when not time-varying."""
    if not basis.in_time:
        return np.ones((len(t), 1))
    return _evaluate(basis.t_knots, basis.t_order, basis.nb_time, t, 0)


def node_values(basis: BasisSet, grid: Grid, row_x: np.ndarray, row_t: np.ndarray,
                deriv: int = 0) -> np.ndarray:
    """(rows, basis.size) tensor-product values at grid nodes (row_x[h], row_t[h])."""
    bx = evaluate_space(basis, grid.x[row_x], deriv)
    bt = evaluate_time(basis, grid.t[row_t])
    return (bx[:, :, None] * bt[:, None, :]).reshape(len(row_x), -1)


def field_values(basis: BasisSet, grid: Grid, index: int, deriv: int = 0) -> np.ndarray:
    """(nx, nt) samples of d^deriv/dx^deriv of basis function `index`."""
    nb_t = basis.nb_time if basis.in_time else 1
    mx, mt = divmod(index, nb_t)
    bx = evaluate_space(basis, grid.x, deriv)[:, mx]
    bt = evaluate_time(basis, grid.t)[:, mt]
    return np.outer(bx, bt)
