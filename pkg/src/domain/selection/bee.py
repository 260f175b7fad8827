"""Base-element expansion: pick the basis size where block magnitudes plateau."""

import logging
from dataclasses import dataclass, field
from typing import List, Mapping, Sequence

import numpy as np

from src.domain.errors import SelectionError

logger = logging.getLogger(__name__)

DEFAULT_PLATEAU_TOL = 0.05


@dataclass
class BeeSelection:
    nb: int
    changes: List[float] = field(default_factory=list)
    flagged: bool = False


def bee(block_magnitudes: Mapping[int, Sequence[float]], plateau_tol: float = DEFAULT_PLATEAU_TOL) -> BeeSelection:
    """Smallest N_b whose magnitudes change by less than plateau_tol up to the next grid value.

    Change between consecutive grid values is max_k |dB_k| / |B_k|. A block that is zero at
    both sizes counts as unchanged; one that leaves zero counts as an infinite change.
    """
    if not block_magnitudes:
        raise SelectionError("bee needs at least one basis size")
    sizes = sorted(block_magnitudes)
    changes = []
    for lo, hi in zip(sizes, sizes[1:]):
        a = np.asarray(block_magnitudes[lo], dtype=float)
        b = np.asarray(block_magnitudes[hi], dtype=float)
        change = _relative_change(a, b)
        changes.append(change)
        if change < plateau_tol:
            return BeeSelection(lo, changes)
    if len(sizes) == 1:
        return BeeSelection(sizes[0], changes)
    logger.warning("BEE: no plateau below %g in %s; using N_b=%d", plateau_tol, sizes, sizes[-1])
    return BeeSelection(sizes[-1], changes, flagged=True)


def _relative_change(a: np.ndarray, b: np.ndarray) -> float:
    delta = np.abs(b - a)
    scale = np.abs(a)
    moved = delta > 0
    if not moved.any():
        return 0.0
    if np.any(moved & (scale == 0)):
        return float("inf")
    return float(np.max(delta[moved] / scale[moved]))
