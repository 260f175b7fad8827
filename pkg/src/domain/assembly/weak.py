"""Weak-form system W c = b.

Row h integrates the PDE against the bump phi_h centred at (x_i, t_n):
W[h, k] = (-1)^a sum U^b d^a phi_h dx dt and b[h] = -sum U d_t phi_h dx dt.
All rows of one column come from a single FFT correlation of U^b with the
sampled kernel. Periodic grids wrap in x; otherwise, and always in t, only
centres whose support stays inside the data are kept.
"""

import logging
from math import comb
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.signal import fftconvolve

from src.domain.errors import AssemblyError
from src.domain.models import Dictionary, DictionaryStyle, Field, LinearSystem, TestFunction

logger = logging.getLogger(__name__)

DEFAULT_MAX_ROWS = 10_000


def bump_samples(m: int, p: int, spacing: float, order: int = 0) -> np.ndarray:
    """d^order/dxi^order of (1 - (xi / (m h))^2)^p at xi = -m h .. m h."""
    poly = Polynomial([1.0, 0.0, -1.0]) ** p
    if order:
        poly = poly.deriv(order)
    scaled = np.arange(-m, m + 1) / m
    return poly(scaled) / (m * spacing) ** order


def default_test_function(field: Field, max_alpha: int, mx: Optional[int] = None, mt: Optional[int] = None,
                          px: Optional[int] = None, pt: int = 2) -> TestFunction:
    """Support spans about 1/8 of each axis; px = max_alpha + 2."""
    grid = field.grid
    mx = mx or max(2, grid.nx // 16)
    mt = mt or max(1, grid.nt // 16)
    px = px or max_alpha + 2
    return TestFunction(int(mx), int(mt), int(px), int(pt))


class WeakIntegrator:
    """Correlates fields with derivatives of one test function over a row lattice."""

    def __init__(self, field: Field, phi: TestFunction, stride: Tuple[int, int] = (1, 1),
                 max_rows: int = DEFAULT_MAX_ROWS):
        grid = field.grid
        if 2 * phi.mx + 1 > grid.nx or 2 * phi.mt + 1 > grid.nt:
            raise AssemblyError(
                f"mx/mt too large: support {2 * phi.mx + 1}x{2 * phi.mt + 1} exceeds grid {grid.nx}x{grid.nt}"
            )
        if phi.mx < 1 or phi.mt < 1:
            raise AssemblyError(f"mx and mt must be at least 1, got {phi.mx}, {phi.mt}")
        self.field = field
        self.grid = grid
        self.phi = phi

        x_centres = np.arange(grid.nx) if grid.periodic else np.arange(phi.mx, grid.nx - phi.mx)
        t_centres = np.arange(phi.mt, grid.nt - phi.mt)
        sx, st = int(stride[0]), int(stride[1])
        factor = 1
        while len(x_centres[::sx * factor]) * len(t_centres[::st * factor]) > max_rows:
            factor += 1
        if factor > 1:
            logger.info("Weak system capped at %d rows: stride (%d, %d) -> (%d, %d)",
                        max_rows, sx, st, sx * factor, st * factor)
        self.stride = (sx * factor, st * factor)
        self.x_centres = x_centres[::self.stride[0]]
        self.t_centres = t_centres[::self.stride[1]]
        row_x, row_t = np.meshgrid(self.x_centres, self.t_centres, indexing="ij")
        self.row_x = row_x.ravel(order="F")
        self.row_t = row_t.ravel(order="F")

        self._norm = (bump_samples(phi.mx, phi.px, grid.dx).sum() * grid.dx
                      * bump_samples(phi.mt, phi.pt, grid.dt).sum() * grid.dt)

    @property
    def n_rows(self) -> int:
        return len(self.row_x)

    def kernel(self, x_order: int = 0, t_order: int = 0) -> np.ndarray:
        """Normalized phi derivative sampled on its (2mx+1) x (2mt+1) support."""
        phi, grid = self.phi, self.grid
        kx = bump_samples(phi.mx, phi.px, grid.dx, x_order)
        kt = bump_samples(phi.mt, phi.pt, grid.dt, t_order)
        return np.outer(kx, kt) / self._norm

    def correlate(self, values: np.ndarray, x_order: int = 0, t_order: int = 0) -> np.ndarray:
        """dx dt sum over the support of values * d^x_order d_t^t_order phi_h, per row."""
        phi, grid = self.phi, self.grid
        values = np.asarray(values, dtype=float)
        if grid.periodic:
            values = np.pad(values, ((phi.mx, phi.mx), (0, 0)), mode="wrap")
            x_index = self.x_centres
        else:
            x_index = self.x_centres - phi.mx
        kernel = self.kernel(x_order, t_order)
        full = fftconvolve(values, kernel[::-1, ::-1], mode="valid")
        picked = full[np.ix_(x_index, self.t_centres - phi.mt)]
        return picked.ravel(order="F") * grid.dx * grid.dt

    def correlate_direct(self, values: np.ndarray, x_order: int = 0, t_order: int = 0) -> np.ndarray:
        """Nested-loop quadrature; reference for correlate()."""
        phi, grid = self.phi, self.grid
        kernel = self.kernel(x_order, t_order)
        out = np.empty(self.n_rows)
        for h, (i, n) in enumerate(zip(self.row_x, self.row_t)):
            total = 0.0
            for a in range(-phi.mx, phi.mx + 1):
                ii = (i + a) % grid.nx if grid.periodic else i + a
                for b in range(-phi.mt, phi.mt + 1):
                    total += values[ii, n + b] * kernel[a + phi.mx, b + phi.mt]
            out[h] = total * grid.dx * grid.dt
        return out


def _check_weak_dictionary(dictionary: Dictionary, phi: TestFunction):
    if dictionary.style != DictionaryStyle.WEAK:
        raise AssemblyError("weak assembly needs a weak-form dictionary")
    max_alpha = max((t.alpha for t in dictionary.terms), default=0)
    if phi.px < max_alpha + 1:
        raise AssemblyError(f"px={phi.px} must be at least max_alpha + 1 = {max_alpha + 1}")


def leading_coefficient_scores(U: Field, dictionary: Dictionary, phi: TestFunction,
                               stride: Tuple[int, int] = (1, 1), max_rows: int = DEFAULT_MAX_ROWS,
                               integrator: Optional[WeakIntegrator] = None) -> np.ndarray:
    """s(h, k) = beta |sum u^(beta-1) d^alpha phi_h dx dt|; 1 for the constant term."""
    _check_weak_dictionary(dictionary, phi)
    integrator = integrator or WeakIntegrator(U, phi, stride, max_rows)
    scores = np.ones((integrator.n_rows, len(dictionary.terms)))
    for k, term in enumerate(dictionary.terms):
        if term.beta == 0:
            continue
        base = U.values ** (term.beta - 1)
        scores[:, k] = term.beta * np.abs(integrator.correlate(base, x_order=term.alpha))
    return scores


def assemble_weak(U: Field, dictionary: Dictionary, phi: TestFunction, stride: Tuple[int, int] = (1, 1),
                  max_rows: int = DEFAULT_MAX_ROWS) -> LinearSystem:
    _check_weak_dictionary(dictionary, phi)
    integrator = WeakIntegrator(U, phi, stride, max_rows)
    columns = []
    for term in dictionary.terms:
        power = np.ones_like(U.values) if term.beta == 0 else U.values ** term.beta
        columns.append((-1.0) ** term.alpha * integrator.correlate(power, x_order=term.alpha))
    rhs = -integrator.correlate(U.values, t_order=1)
    scores = leading_coefficient_scores(U, dictionary, phi, integrator=integrator)

    logger.info("Assembled weak system: %d rows x %d features (mx=%d mt=%d px=%d pt=%d stride=%s)",
                integrator.n_rows, len(columns), phi.mx, phi.mt, phi.px, phi.pt, integrator.stride)
    return LinearSystem(
        matrix=np.column_stack(columns),
        rhs=rhs,
        terms=dictionary.terms,
        row_x=integrator.row_x,
        row_t=integrator.row_t,
        grid=U.grid,
        form="weak",
        scores=scores,
    )


def leibniz_terms(alpha: int):
    """(binomial, order on the coefficient, order on phi) for d^alpha (c phi)."""
    return [(comb(alpha, j), j, alpha - j) for j in range(alpha + 1)]
