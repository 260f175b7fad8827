"""Reduction-in-residual criteria (RR for nested sparsities, RRC with a complexity penalty)."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src.domain.errors import SelectionError

logger = logging.getLogger(__name__)

DEFAULT_N_RR = 5
DEFAULT_RHO = 0.015


@dataclass
class RrSelection:
    k: int
    scores: List[float] = field(default_factory=list)
    flagged: bool = False


@dataclass
class RrcSelection:
    l: int
    scores: List[float] = field(default_factory=list)
    rho: float = 0.0


def rr_select(residuals: Sequence[float], n_rr: int = DEFAULT_N_RR, rho: float = DEFAULT_RHO) -> RrSelection:
    """k* = min{k : (R_k - R_{k+n_rr}) / (n_rr R_1) < rho}; residuals[0] is R_1.

    R_k is the squared residual ||F c^k - b||_2^2 of the k-sparse fit, not its norm.
    """
    residuals = np.asarray(residuals, dtype=float)
    n_f = len(residuals)
    if n_rr < 1:
        raise SelectionError(f"n_rr must be at least 1, got {n_rr}")
    if n_f <= n_rr:
        raise SelectionError(f"need more than n_rr={n_rr} residuals, got {n_f}")
    if residuals[0] == 0:
        return RrSelection(1, [0.0] * (n_f - n_rr))
    scores = (residuals[:n_f - n_rr] - residuals[n_rr:]) / (n_rr * residuals[0])
    below = np.flatnonzero(scores < rho)
    if below.size:
        return RrSelection(int(below[0]) + 1, scores.tolist())
    k = int(np.argmin(scores)) + 1
    logger.warning("RR: no plateau below rho=%g; falling back to k=%d", rho, k)
    return RrSelection(k, scores.tolist(), flagged=True)


def rrc_select(errors: Sequence[float], rho: Optional[float] = None) -> RrcSelection:
    """l* = argmin_{l >= 1} E_l + rho l / N_f, errors[l] = E(c^l), errors[0] the empty model.

    rho defaults to the mean of E_l over l >= 1.
    """
    errors = np.asarray(errors, dtype=float)
    n_f = len(errors)
    if n_f < 2:
        raise SelectionError("rrc_select needs errors for at least l = 0 and l = 1")
    if rho is None:
        finite = errors[1:][np.isfinite(errors[1:])]
        rho = float(finite.mean()) if finite.size else 0.0
    levels = np.arange(n_f)
    scores = errors + rho * levels / n_f
    best = 1 + int(np.argmin(scores[1:]))
    return RrcSelection(best, scores.tolist(), float(rho))
