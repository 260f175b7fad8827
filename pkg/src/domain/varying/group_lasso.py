"""Group LASSO over block systems and the block magnitudes used to size the basis."""

import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from src.domain.assembly.weak import DEFAULT_MAX_ROWS
from src.domain.errors import RegressionError
from src.domain.models import Dictionary, Field, GroupSystem, SmootherConfig, TestFunction
from src.domain.regression.proximal import ProximalResult, proximal_gradient
from src.domain.selection.bee import DEFAULT_PLATEAU_TOL, BeeSelection, bee

from .basis import build_basis, field_values
from .group_system import assemble_group_system, normalize_group_columns

logger = logging.getLogger(__name__)


def group_soft_threshold(values: np.ndarray, group_index: np.ndarray, threshold: float) -> np.ndarray:
    """Block shrinkage max(0, 1 - threshold / ||v_g||) v_g."""
    out = np.zeros_like(values)
    for g in np.unique(group_index):
        cols = group_index == g
        norm = np.linalg.norm(values[cols])
        if norm > threshold:
            out[cols] = (1.0 - threshold / norm) * values[cols]
    return out


def group_penalty(coeffs: np.ndarray, group_index: np.ndarray) -> float:
    return float(sum(np.linalg.norm(coeffs[group_index == g]) for g in np.unique(group_index)))


def group_lambda_max(gsys: GroupSystem) -> float:
    """Smallest lambda whose minimizer is zero: max_g ||F_g^T b||."""
    correlation = gsys.matrix.T @ gsys.rhs
    return max(float(np.linalg.norm(correlation[gsys.group_index == g])) for g in range(gsys.n_groups))


def group_lasso(gsys: GroupSystem, lam: float, tol: float = 1e-8, max_iter: int = 100_000) -> ProximalResult:
    """min 0.5 ||b - F c||^2 + lam sum_g ||c_g||, solve space."""
    if lam < 0:
        raise RegressionError(f"lambda must be nonnegative, got {lam}")
    index = gsys.group_index
    return proximal_gradient(
        gsys.matrix, gsys.rhs,
        prox=lambda v, step: group_soft_threshold(v, index, lam * step),
        penalty=lambda c: lam * group_penalty(c, index),
        tol=tol, max_iter=max_iter,
    )


def block_magnitudes(gsys: GroupSystem, coeffs: np.ndarray) -> np.ndarray:
    """B_k = ||F_k||_1 * ||c_k||_L1 per feature, with c_k rebuilt from physical coeffs.

    F_k is the constant-coefficient feature column; the L1 norm of c_k is
    taken over the grid with quadrature weights dx (and dt in time).
    """
    grid, basis = gsys.grid, gsys.basis
    if gsys.feature_matrix is None:
        raise RegressionError("block magnitudes need the constant-coefficient feature matrix")
    weight = grid.dx * (grid.dt if basis.in_time else 1.0)
    sampled = [field_values(basis, grid, m) for m in range(basis.size)]
    out = np.zeros(gsys.n_groups)
    for g in range(gsys.n_groups):
        cols = gsys.columns_of(g)
        c = np.asarray(coeffs, dtype=float)[cols]
        if len(cols) == 1:
            c_k = np.full((grid.nx, grid.nt if basis.in_time else 1), c[0])
        else:
            c_k = sum(c[m] * sampled[m] for m in range(basis.size))
            if not basis.in_time:
                c_k = c_k[:, :1]
        out[g] = np.abs(gsys.feature_matrix[:, g]).sum() * np.abs(c_k).sum() * weight
    return out


def select_basis_size(U: Field, dictionary: Dictionary, nb_grid: Sequence[int], kind: str = "bspline",
                      order: int = 3, relative_lambda: float = 0.01, form: str = "differential",
                      smoother: Optional[SmootherConfig] = None, phi: Optional[TestFunction] = None,
                      stride: Tuple[int, int] = (1, 1), max_rows: int = DEFAULT_MAX_ROWS,
                      mask: Optional[Dict[str, str]] = None, plateau_tol: float = DEFAULT_PLATEAU_TOL,
                      tol: float = 1e-8, max_iter: int = 100_000) -> Tuple[BeeSelection, Dict[int, np.ndarray]]:
    """Group LASSO at each N_b of the grid, then BEE on the block magnitudes.

    lambda is relative_lambda times the lambda_max of each system.
    """
    if not nb_grid:
        raise RegressionError("basis size grid is empty")
    magnitudes: Dict[int, np.ndarray] = {}
    for nb in sorted({int(n) for n in nb_grid}):
        basis = build_basis(kind, nb, U.grid, order=order)
        gsys = normalize_group_columns(assemble_group_system(
            U, dictionary, basis, form, smoother=smoother, phi=phi, stride=stride,
            max_rows=max_rows, mask=mask))
        lam = relative_lambda * group_lambda_max(gsys)
        result = group_lasso(gsys, lam, tol, max_iter)
        magnitudes[nb] = block_magnitudes(gsys, result.coeffs / gsys.col_scale)
        logger.debug("N_b=%d block magnitudes %s", nb, np.round(magnitudes[nb], 6).tolist())
    selection = bee(magnitudes, plateau_tol)
    logger.info("BEE picked N_b=%d (changes %s)", selection.nb, [round(c, 4) for c in selection.changes])
    return selection, magnitudes
