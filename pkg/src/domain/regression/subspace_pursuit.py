"""Subspace pursuit: greedy expand/shrink search for a k-sparse LS support."""

import logging
from typing import List

import numpy as np

from src.domain.errors import RegressionError
from src.domain.models import CandidateModel, LinearSystem

from .least_squares import least_squares_on_support, solve_columns

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 50


def top_k(values: np.ndarray, k: int) -> List[int]:
    """Indices of the k largest values; the lower index wins ties."""
    order = np.argsort(-np.asarray(values), kind="stable")
    return sorted(int(i) for i in order[:k])


def subspace_pursuit(sys: LinearSystem, k: int, max_iter: int = MAX_ITERATIONS) -> CandidateModel:
    F, b = sys.matrix, sys.rhs
    if not 1 <= k <= min(F.shape):
        raise RegressionError(f"sparsity k must be in [1, {min(F.shape)}], got {k}")

    support = top_k(np.abs(F.T @ b), k)
    _, r, _ = solve_columns(F, b, support)
    res = float(np.linalg.norm(r))
    history = [res]
    for _ in range(max_iter):
        if res == 0.0:
            break
        union = sorted(set(support) | set(top_k(np.abs(F.T @ r), k)))
        sol, _, _ = solve_columns(F, b, union)
        candidate = sorted(union[i] for i in top_k(np.abs(sol), k))
        _, r_new, _ = solve_columns(F, b, candidate)
        res_new = float(np.linalg.norm(r_new))
        if res_new >= res:
            break
        support, r, res = candidate, r_new, res_new
        history.append(res)

    model = least_squares_on_support(sys, support)
    model.history = history
    logger.debug("SP k=%d -> %s residual=%.4g", k, model.labels, model.residual)
    return model
