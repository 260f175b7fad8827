"""LASSO: 0.5 ||b - F c||^2 + lambda ||c||_1, and the lambda path used by IDENT."""

import logging
from typing import List, Tuple

import numpy as np

from src.domain.errors import RegressionError
from src.domain.models import LinearSystem

from .proximal import ProximalResult, proximal_gradient

logger = logging.getLogger(__name__)


def soft_threshold(values: np.ndarray, threshold: float) -> np.ndarray:
    return np.sign(values) * np.maximum(np.abs(values) - threshold, 0.0)


def lasso(sys: LinearSystem, lam: float, tol: float = 1e-8, max_iter: int = 100_000) -> ProximalResult:
    """Solve-space minimizer (columns as stored in sys)."""
    if lam < 0:
        raise RegressionError(f"lambda must be nonnegative, got {lam}")
    norms = np.linalg.norm(sys.matrix, axis=0)
    flags = []
    if np.any(np.abs(norms - 1.0) > 1e-6):
        logger.warning("LASSO on a system without unit-norm columns; lambda acts unevenly")
        flags.append("columns_not_normalized")
    result = proximal_gradient(
        sys.matrix, sys.rhs,
        prox=lambda v, step: soft_threshold(v, lam * step),
        penalty=lambda c: lam * float(np.abs(c).sum()),
        tol=tol, max_iter=max_iter,
    )
    result.flags = flags + result.flags
    return result


def lambda_grid(sys: LinearSystem, n_lambdas: int = 20) -> np.ndarray:
    """Geometric grid from ||F^T b||_inf down to 1e-4 of it."""
    lam_max = float(np.abs(sys.matrix.T @ sys.rhs).max())
    return lam_max * np.geomspace(1.0, 1e-4, n_lambdas)


def lasso_path(sys: LinearSystem, n_lambdas: int = 20, tol: float = 1e-8,
               max_iter: int = 100_000) -> List[Tuple[float, Tuple[int, ...]]]:
    """(lambda, active set) for each grid value."""
    path = []
    for lam in lambda_grid(sys, n_lambdas):
        result = lasso(sys, lam, tol, max_iter)
        active = tuple(int(i) for i in np.flatnonzero(np.abs(result.coeffs) > 0))
        path.append((float(lam), active))
        logger.debug("lambda=%.3g active=%s", lam, [sys.terms[i].label for i in active])
    return path
