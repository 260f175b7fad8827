"""Trimming of weak contributors.

Contribution of feature i is ||F_i|| |c_i| (invariant to column scaling),
normalized by the largest one.
"""

import logging
from dataclasses import replace

import numpy as np

from src.domain.models import CandidateModel, GroupSystem, LinearSystem

from .group import group_least_squares
from .least_squares import least_squares_on_support

logger = logging.getLogger(__name__)

DEFAULT_RHO = 0.05


def contribution_scores(sys: LinearSystem, model: CandidateModel) -> np.ndarray:
    support = list(model.support)
    physical = sys.physical_matrix()[:, support]
    contrib = np.linalg.norm(physical, axis=0) * np.abs(model.coeffs[support])
    top = contrib.max() if contrib.size else 0.0
    return contrib / top if top > 0 else np.zeros_like(contrib)


def trim(sys: LinearSystem, model: CandidateModel, rho: float = DEFAULT_RHO) -> CandidateModel:
    """Drop the weakest feature while its score is below rho, refitting each time."""
    current = model
    while current.support:
        scores = contribution_scores(sys, current)
        weakest = int(np.argmin(scores))
        if scores[weakest] >= rho:
            break
        remaining = [i for j, i in enumerate(current.support) if j != weakest]
        if not remaining:
            logger.warning("Trimming would empty the support; keeping %s", current.labels)
            current = replace(current, flags=current.flags + ["trim_emptied"])
            break
        logger.debug("Trimming %s (score %.3g)", sys.terms[current.support[weakest]].label, scores[weakest])
        current = least_squares_on_support(sys, remaining)
    return current


def group_contributions(gsys: GroupSystem, model: CandidateModel) -> np.ndarray:
    physical = gsys.matrix * gsys.col_scale
    contrib = np.array([
        np.linalg.norm(physical[:, gsys.columns_of(g)] @ model.coeffs[gsys.columns_of(g)])
        for g in model.support
    ])
    top = contrib.max() if contrib.size else 0.0
    return contrib / top if top > 0 else np.zeros_like(contrib)


def group_trim(gsys: GroupSystem, model: CandidateModel, rho: float = DEFAULT_RHO) -> CandidateModel:
    """Drop every group with contribution below rho in one pass and refit."""
    if not model.support:
        return model
    scores = group_contributions(gsys, model)
    keep = [g for g, s in zip(model.support, scores) if s >= rho]
    if len(keep) == len(model.support):
        return model
    if not keep:
        logger.warning("Group trimming would empty the support; keeping %s", model.labels)
        return replace(model, flags=model.flags + ["trim_emptied"])
    return group_least_squares(gsys, keep)
