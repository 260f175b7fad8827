"""Column scalings, row restriction and coherence diagnostics.

Scalings divide columns and multiply LinearSystem.col_scale, so solve-space
coefficients convert back to physical ones by dividing by col_scale.
Columns whose scale is zero are dropped with a warning.
"""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.domain.errors import AssemblyError
from src.domain.models import LinearSystem

logger = logging.getLogger(__name__)


def select_columns(sys: LinearSystem, keep: Sequence[int]) -> LinearSystem:
    keep = np.asarray(keep, dtype=int)
    return replace(
        sys,
        matrix=sys.matrix[:, keep],
        terms=tuple(sys.terms[k] for k in keep),
        scores=None if sys.scores is None else sys.scores[:, keep],
        col_scale=sys.col_scale[keep],
        col_norms=None if sys.col_norms is None else sys.col_norms[keep],
        error_scales=sys.error_scales[keep],
        warnings=list(sys.warnings),
    )


def _scale_columns(sys: LinearSystem, scales: np.ndarray, what: str) -> Tuple[LinearSystem, np.ndarray]:
    zero = scales == 0
    if zero.any():
        keep = np.flatnonzero(~zero)
        dropped = [sys.terms[k].label for k in np.flatnonzero(zero)]
        for label in dropped:
            logger.warning("Dropping column %s: zero %s", label, what)
        sys = select_columns(sys, keep)
        sys.warnings.extend(f"dropped_column:{label}" for label in dropped)
        scales = scales[keep]
    out = replace(sys, matrix=sys.matrix / scales, col_scale=sys.col_scale * scales,
                  warnings=list(sys.warnings))
    return out, scales


def column_normalize(sys: LinearSystem) -> LinearSystem:
    """F'_k = F_k / ||F_k||_2."""
    norms = np.linalg.norm(sys.matrix, axis=0)
    out, norms = _scale_columns(sys, norms, "norm")
    out.col_norms = norms
    return out


def error_normalize(sys: LinearSystem, scores: Optional[np.ndarray] = None) -> LinearSystem:
    """F'_k = F_k / mean_h s(h, k)."""
    scores = sys.scores if scores is None else scores
    if scores is None:
        raise AssemblyError("error normalization needs leading-coefficient scores")
    means = np.asarray(scores, dtype=float).mean(axis=0)
    out, means = _scale_columns(replace(sys, scores=scores), means, "mean score")
    out.error_scales = out.error_scales * means
    return out


def narrow_system(sys: LinearSystem, rows: Sequence[int]) -> LinearSystem:
    """Row restriction; column metadata is kept as is."""
    rows = np.asarray(rows, dtype=int)
    if rows.size == 0:
        raise AssemblyError("empty row set for narrow system")
    return replace(
        sys,
        matrix=sys.matrix[rows],
        rhs=sys.rhs[rows],
        row_x=sys.row_x[rows],
        row_t=sys.row_t[rows],
        scores=None if sys.scores is None else sys.scores[rows],
        warnings=list(sys.warnings),
    )


def mutual_coherence(sys: LinearSystem) -> Tuple[float, Tuple[int, int]]:
    """max_{j != l} |<F_j, F_l>| / (||F_j|| ||F_l||) and the maximizing pair."""
    if sys.n_features < 2:
        raise AssemblyError("mutual coherence needs at least 2 columns")
    norms = np.linalg.norm(sys.matrix, axis=0)
    norms[norms == 0] = 1.0
    unit = sys.matrix / norms
    gram = np.abs(unit.T @ unit)
    np.fill_diagonal(gram, -1.0)
    j, l = np.unravel_index(int(np.argmax(gram)), gram.shape)
    j, l = (int(j), int(l)) if j < l else (int(l), int(j))
    return float(gram[j, l]), (j, l)


def dump_system_csv(sys: LinearSystem, path: str) -> str:
    """Write rows as x index, t index, rhs and one column per feature label."""
    frame = pd.DataFrame(sys.physical_matrix(), columns=sys.labels)
    frame.insert(0, "rhs", sys.rhs)
    frame.insert(0, "t_index", sys.row_t)
    frame.insert(0, "x_index", sys.row_x)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info("Wrote %d x %d system to %s", sys.n_rows, sys.n_features, path)
    return str(path)
