"""Cross-validation estimation error on a fixed row split."""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from src.domain.errors import SelectionError
from src.domain.models import LinearSystem
from src.domain.regression.least_squares import solve_columns

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.8


def cee(sys: LinearSystem, support: Sequence[int], alpha: float = DEFAULT_ALPHA,
        flags: Optional[List[str]] = None) -> float:
    """Fit on the first ceil(alpha H) rows, return the residual norm on the rest."""
    if not 0 < alpha < 1:
        raise SelectionError(f"alpha must be in (0, 1), got {alpha}")
    split = math.ceil(alpha * sys.n_rows)
    if split >= sys.n_rows:
        raise SelectionError(f"no validation rows left with alpha={alpha} and {sys.n_rows} rows")
    support = sorted(int(i) for i in support)
    train_f, train_b = sys.matrix[:split], sys.rhs[:split]
    sol, _, deficient = solve_columns(train_f, train_b, support)
    if deficient:
        logger.warning("CEE: support %s rank-deficient on training rows", support)
        if flags is not None:
            flags.append("rank_deficient")
    prediction = sys.matrix[split:, support] @ sol if support else 0.0
    return float(np.linalg.norm(sys.rhs[split:] - prediction))
