"""Coefficient-as-local-regression: one constant-coefficient system per spatial patch.

The patch systems are stacked block-diagonally with the columns permuted so
that group k holds feature k of every patch. A group-sparse solve then
picks features shared by all patches while letting their values differ.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import block_diag

from src.domain.assembly.normalization import narrow_system
from src.domain.errors import RegressionError
from src.domain.models import GroupSystem, LinearSystem
from src.domain.regression.group import group_subspace_pursuit
from src.domain.selection.residual_reduction import RrcSelection, rrc_select

logger = logging.getLogger(__name__)

DEFAULT_OVERLAP = 0.25


@dataclass
class CaslrResult:
    support: Tuple[int, ...]
    labels: List[str]
    coefficients: np.ndarray  # (patches, features), physical scale
    error: float
    local_errors: List[float] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)


@dataclass
class CaslrPath:
    results: List[CaslrResult]
    errors: List[float]
    selection: RrcSelection

    @property
    def chosen(self) -> CaslrResult:
        return self.results[self.selection.l - 1]


def tile_patches(n: int, n_patches: int, overlap: float = DEFAULT_OVERLAP) -> List[Tuple[int, int]]:
    """Index ranges [lo, hi) of equal patches covering range(n), neighbours sharing `overlap`."""
    if n_patches < 1:
        raise RegressionError(f"need at least one patch, got {n_patches}")
    if not 0 <= overlap < 1:
        raise RegressionError(f"overlap must be in [0, 1), got {overlap}")
    width = n / (n_patches - (n_patches - 1) * overlap)
    patches = []
    for j in range(n_patches):
        lo = int(round(j * width * (1 - overlap)))
        hi = n if j == n_patches - 1 else min(n, int(round(lo + width)))
        patches.append((lo, hi))
    return patches


def patch_systems(sys: LinearSystem, n_patches: int, overlap: float = DEFAULT_OVERLAP) -> List[LinearSystem]:
    """Row restrictions of sys to x-patches of the grid."""
    out = []
    for lo, hi in tile_patches(sys.grid.nx, n_patches, overlap):
        rows = np.flatnonzero((sys.row_x >= lo) & (sys.row_x < hi))
        if rows.size == 0:
            raise RegressionError(f"patch [{lo}, {hi}) holds no rows; use fewer patches")
        out.append(narrow_system(sys, rows))
    return out


def stack_patches(patches: Sequence[LinearSystem]) -> GroupSystem:
    if not patches:
        raise RegressionError("no patch systems to stack")
    labels = patches[0].labels
    for p in patches[1:]:
        if p.labels != labels:
            raise RegressionError("patch systems must share one dictionary")
    n_patches, n_features = len(patches), patches[0].n_features
    matrix = block_diag([p.matrix for p in patches]).toarray()
    perm = [j * n_features + k for k in range(n_features) for j in range(n_patches)]
    scale = np.concatenate([p.col_scale for p in patches])
    return GroupSystem(
        matrix=matrix[:, perm],
        rhs=np.concatenate([p.rhs for p in patches]),
        group_index=np.repeat(np.arange(n_features), n_patches),
        terms=tuple(patches[0].terms),
        basis=None,
        row_x=np.concatenate([p.row_x for p in patches]),
        row_t=np.concatenate([p.row_t for p in patches]),
        grid=patches[0].grid,
        col_scale=scale[perm],
    )


def local_error(patch: LinearSystem, coeffs: np.ndarray) -> float:
    """||F_j c_j - b_j|| / ||b_j||; 0 for an all-zero right-hand side."""
    norm = np.linalg.norm(patch.rhs)
    if norm == 0:
        return 0.0
    return float(np.linalg.norm(patch.physical_matrix() @ coeffs - patch.rhs) / norm)


def caslr(patches: Sequence[LinearSystem], l: int, stacked: Optional[GroupSystem] = None) -> CaslrResult:
    """Group-sparse fit with l shared features."""
    gsys = stacked or stack_patches(patches)
    model = group_subspace_pursuit(gsys, l)
    n_patches = len(patches)
    coefficients = model.coeffs.reshape(gsys.n_groups, n_patches).T
    local = [local_error(p, coefficients[j]) for j, p in enumerate(patches)]
    return CaslrResult(tuple(model.support), model.labels, coefficients, float(sum(local)),
                       local, list(model.flags))


def caslr_path(patches: Sequence[LinearSystem], max_l: Optional[int] = None,
               rho: Optional[float] = None) -> CaslrPath:
    """Fits for l = 1..max_l and the RRC choice; errors[0] is the empty model."""
    gsys = stack_patches(patches)
    max_l = min(gsys.n_groups, max_l or gsys.n_groups)
    empty = float(sum(1.0 if np.linalg.norm(p.rhs) > 0 else 0.0 for p in patches))
    results = [caslr(patches, l, stacked=gsys) for l in range(1, max_l + 1)]
    errors = [empty] + [r.error for r in results]
    selection = rrc_select(errors, rho)
    chosen = results[selection.l - 1]
    logger.info("CaSLR picked l=%d: %s (E=%.4g, rho=%.4g)", selection.l, chosen.labels,
                chosen.error, selection.rho)
    return CaslrPath(results, errors, selection)
