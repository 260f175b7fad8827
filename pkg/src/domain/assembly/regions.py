"""High-dynamic region: rows whose leading-coefficient score exceeds the junction threshold."""

import logging

import numpy as np

from src.domain.dictionary.lookup import resolve_label
from src.domain.errors import AssemblyError
from src.domain.models import LinearSystem

logger = logging.getLogger(__name__)

DEFAULT_BINS = 200


def junction_cost(cumulative: np.ndarray, junction: int) -> float:
    """Weighted misfit of the best continuous one-junction linear fit to B(j)."""
    j = np.arange(len(cumulative), dtype=float)
    valid = cumulative > 0
    sqrt_w = np.zeros(len(cumulative))
    sqrt_w[valid] = 1.0 / cumulative[valid]
    design = np.column_stack([np.ones_like(j), j, np.maximum(j - junction, 0.0)])
    coef, *_ = np.linalg.lstsq(design * sqrt_w[:, None], cumulative * sqrt_w, rcond=None)
    misfit = (cumulative - design @ coef) * sqrt_w
    return float(misfit @ misfit)


def junction_threshold(scores: np.ndarray, bins: int = DEFAULT_BINS) -> float:
    """Gamma: lower edge of the bin after the best junction; -inf when undefined."""
    scores = np.asarray(scores, dtype=float)
    if bins < 3 or np.ptp(scores) == 0:
        return -np.inf
    counts, edges = np.histogram(scores, bins=bins)
    cumulative = np.cumsum(counts).astype(float)
    costs = [junction_cost(cumulative, junction) for junction in range(1, bins - 1)]
    best = 1 + int(np.argmin(costs))
    return float(edges[best + 1])


def high_dynamic_region(sys: LinearSystem, score_feature: str, bins: int = DEFAULT_BINS) -> np.ndarray:
    """Ascending row indices with s(h) >= Gamma for the score feature's column."""
    if sys.scores is None:
        raise AssemblyError("high dynamic region needs leading-coefficient scores")
    column = resolve_label(sys, score_feature)
    scores = sys.scores[:, column]
    gamma = junction_threshold(scores, bins)
    rows = np.flatnonzero(scores >= gamma)
    logger.info("High dynamic region on %s: Gamma=%.4g keeps %d of %d rows",
                score_feature, gamma, len(rows), len(scores))
    return rows
