"""Group projected subspace pursuit (GPSP) over block systems.

Groups are scored by how much of the residual their column span explains,
P(r, F_g) = ||Q_g^T r|| / ||r|| with Q_g an orthonormal basis of F_g.
An iteration is accepted only if it lowers the residual, so the accepted
residual history never increases.
"""

import logging
from typing import List, Sequence

import numpy as np

from src.domain.errors import RegressionError
from src.domain.models import CandidateModel, GroupSystem

from .least_squares import solve_columns
from .subspace_pursuit import MAX_ITERATIONS, top_k

logger = logging.getLogger(__name__)


def group_columns(gsys: GroupSystem, groups: Sequence[int]) -> List[int]:
    return [int(c) for g in sorted(groups) for c in gsys.columns_of(g)]


def group_least_squares(gsys: GroupSystem, groups: Sequence[int]) -> CandidateModel:
    """LS on the union of the groups' columns; coeffs over columns, physical scale."""
    groups = tuple(sorted({int(g) for g in groups}))
    columns = group_columns(gsys, groups)
    sol, residual, deficient = solve_columns(gsys.matrix, gsys.rhs, columns)
    flags = []
    if deficient:
        logger.warning("Rank-deficient group support %s; using the minimum-norm solution",
                       [gsys.terms[g].label for g in groups])
        flags.append("rank_deficient")
    coeffs = np.zeros(gsys.matrix.shape[1])
    if columns:
        coeffs[columns] = sol / gsys.col_scale[columns]
    return CandidateModel(groups, coeffs, float(np.linalg.norm(residual)), tuple(gsys.terms), flags=flags)


def _orthonormal_bases(gsys: GroupSystem) -> List[np.ndarray]:
    bases = []
    for g in range(gsys.n_groups):
        block = gsys.matrix[:, gsys.columns_of(g)]
        u, s, _ = np.linalg.svd(block, full_matrices=False)
        rank = int(np.sum(s > s.max() * 1e-12)) if s.size and s.max() > 0 else 0
        bases.append(u[:, :rank])
    return bases


def projection_scores(bases: List[np.ndarray], residual: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(residual)
    if norm == 0:
        return np.zeros(len(bases))
    return np.array([np.linalg.norm(q.T @ residual) / norm if q.size else 0.0 for q in bases])


def group_subspace_pursuit(gsys: GroupSystem, k: int, max_iter: int = MAX_ITERATIONS) -> CandidateModel:
    if not 1 <= k <= gsys.n_groups:
        raise RegressionError(f"group sparsity k must be in [1, {gsys.n_groups}], got {k}")
    F, b = gsys.matrix, gsys.rhs
    bases = _orthonormal_bases(gsys)

    support = top_k(projection_scores(bases, b), k)
    _, r, _ = solve_columns(F, b, group_columns(gsys, support))
    res = float(np.linalg.norm(r))
    history = [res]
    for _ in range(max_iter):
        if res == 0.0:
            break
        union = sorted(set(support) | set(top_k(projection_scores(bases, r), k)))
        columns = group_columns(gsys, union)
        sol, _, _ = solve_columns(F, b, columns)
        full = np.zeros(F.shape[1])
        full[columns] = sol
        energy = np.array([np.linalg.norm(F[:, gsys.columns_of(g)] @ full[gsys.columns_of(g)]) for g in union])
        candidate = sorted(union[i] for i in top_k(energy, k))
        _, r_new, _ = solve_columns(F, b, group_columns(gsys, candidate))
        res_new = float(np.linalg.norm(r_new))
        if res_new >= res:
            break
        support, r, res = candidate, r_new, res_new
        history.append(res)

    model = group_least_squares(gsys, support)
    model.history = history
    logger.debug("GPSP k=%d -> %s residual=%.4g", k, model.labels, model.residual)
    return model


def l10_norm(coeffs: np.ndarray, group_index: np.ndarray) -> int:
    """Number of groups with a nonzero coefficient."""
    return int(sum(np.abs(coeffs[group_index == g]).sum() > 0 for g in np.unique(group_index)))
