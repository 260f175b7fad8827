"""Coefficient and support accuracy against a known truth."""

import logging
from typing import Dict, Iterable, List, Optional

import numpy as np

from src.domain.errors import MetricError

logger = logging.getLogger(__name__)


def _pair(c_hat, c_true):
    c_hat = np.asarray(c_hat, dtype=float).ravel()
    c_true = np.asarray(c_true, dtype=float).ravel()
    if c_hat.shape != c_true.shape:
        raise MetricError(f"coefficient vectors differ in length: {c_hat.size} vs {c_true.size}")
    if not np.any(c_true):
        raise MetricError("true coefficient vector is zero")
    return c_hat, c_true


def coefficient_errors(c_hat, c_true) -> Dict[str, float]:
    """Relative errors in the l1 (e_c), l2 and max norms."""
    c_hat, c_true = _pair(c_hat, c_true)
    diff = c_hat - c_true
    return {
        "e_c": float(np.abs(diff).sum() / np.abs(c_true).sum()),
        "e2": float(np.linalg.norm(diff) / np.linalg.norm(c_true)),
        "e_inf": float(np.abs(diff).max() / np.abs(c_true).max()),
    }


def function_error(c_hat, c_true) -> float:
    """Relative L2 error of a sampled coefficient function."""
    c_hat, c_true = _pair(c_hat, c_true)
    return float(np.linalg.norm(c_hat - c_true) / np.linalg.norm(c_true))


def support_scores(support_hat: Iterable, support_true: Iterable,
                   flags: Optional[List[str]] = None) -> Dict[str, float]:
    """TPR, PPV and Jaccard index of two supports (indices or labels).

    An empty estimate scores PPV 0 and raises the "empty_support" flag.
    """
    s_hat, s_true = set(support_hat), set(support_true)
    if not s_true:
        raise MetricError("true support is empty")
    hits = len(s_hat & s_true)
    if not s_hat:
        logger.warning("Empty estimated support; PPV set to 0")
        if flags is not None:
            flags.append("empty_support")
    return {
        "tpr": hits / len(s_true),
        "ppv": hits / len(s_hat) if s_hat else 0.0,
        "jaccard": hits / len(s_hat | s_true),
    }
