"""Metric bundles for reports."""

import logging
from typing import Dict, List, Mapping, Optional

import numpy as np

from src.domain.errors import MetricError
from src.domain.models import CandidateModel, LinearSystem

from .accuracy import coefficient_errors, support_scores
from .dynamics import nsr, residual_error

logger = logging.getLogger(__name__)


def evaluate_candidate(sys: LinearSystem, model: CandidateModel, c_true,
                       flags: Optional[List[str]] = None) -> Dict[str, float]:
    """Coefficient errors, e_r, support scores and NSR of a model fitted on sys."""
    c_true = np.asarray(c_true, dtype=float)
    metrics = coefficient_errors(model.coeffs, c_true)
    metrics["e_r"] = residual_error(sys, model.coeffs, c_true)
    metrics.update(support_scores(model.support, np.flatnonzero(c_true).tolist(), flags))
    metrics["nsr"] = nsr(sys, c_true)
    return metrics


def evaluate_report(report: Mapping, truth: Mapping[str, float],
                    flags: Optional[List[str]] = None) -> Dict[str, float]:
    """Coefficient errors and support scores of a report's chosen model.

    truth maps feature labels to true coefficients; labels missing from it
    count as zero.
    """
    chosen = report.get("chosen") or {}
    labels = list(report.get("dictionary") or [])
    coefficients = chosen.get("coefficients") or {}
    if not labels:
        raise MetricError("report lists no dictionary labels")
    unknown = set(truth) - set(labels)
    if unknown:
        raise MetricError(f"true terms not in the report's dictionary: {sorted(unknown)}")
    c_hat = np.array([float(coefficients.get(label, 0.0)) for label in labels])
    c_true = np.array([float(truth.get(label, 0.0)) for label in labels])
    metrics = coefficient_errors(c_hat, c_true)
    true_support = [label for label in labels if truth.get(label, 0.0) != 0]
    metrics.update(support_scores(chosen.get("support") or [], true_support, flags))
    return metrics
