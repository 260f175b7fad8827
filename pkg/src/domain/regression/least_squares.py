"""Least squares restricted to a support."""

import logging
from typing import Sequence, Tuple

import numpy as np

from src.domain.models import CandidateModel, LinearSystem

logger = logging.getLogger(__name__)


def solve_columns(matrix: np.ndarray, rhs: np.ndarray, columns: Sequence[int]) -> Tuple[np.ndarray, np.ndarray, bool]:
    """Minimum-norm LS on the given columns: (solution, residual vector, rank_deficient)."""
    columns = list(columns)
    if not columns:
        return np.zeros(0), rhs.copy(), False
    sub = matrix[:, columns]
    sol, _, rank, _ = np.linalg.lstsq(sub, rhs, rcond=None)
    return sol, rhs - sub @ sol, rank < len(columns)


def least_squares_on_support(sys: LinearSystem, support: Sequence[int]) -> CandidateModel:
    """Fit c on the support; coefficients come back in physical scale."""
    support = tuple(sorted({int(i) for i in support}))
    sol, residual, deficient = solve_columns(sys.matrix, sys.rhs, support)
    flags = []
    if deficient:
        logger.warning("Rank-deficient support %s; using the minimum-norm solution",
                       [sys.terms[i].label for i in support])
        flags.append("rank_deficient")
    coeffs = np.zeros(sys.n_features)
    if support:
        coeffs[list(support)] = sol / sys.col_scale[list(support)]
    return CandidateModel(support, coeffs, float(np.linalg.norm(residual)), tuple(sys.terms), flags=flags)
