"""Block systems for coefficients expanded in a basis: c_k(x) = sum_m c_{k,m} phi_m(x).

Differential form: the columns of feature k are F_k * phi_m at the row
nodes. Weak form: d^a (phi_m u^b) is moved onto the test function with
the Leibniz rule, giving sum_j C(a, j) corr(u^b d^j phi_m, a - j).
The columns of one feature are contiguous, in basis order.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.domain.assembly.differential import assemble_differential
from src.domain.assembly.weak import DEFAULT_MAX_ROWS, WeakIntegrator, leibniz_terms
from src.domain.errors import AssemblyError
from src.domain.models import (
    BasisSet,
    Dictionary,
    DictionaryStyle,
    Field,
    GroupSystem,
    SmootherConfig,
    TestFunction,
)

from .basis import field_values, node_values

logger = logging.getLogger(__name__)

MASK_ROLES = ("constant", "varying", "excluded")


def _roles(dictionary: Dictionary, mask: Optional[Dict[str, str]]) -> List[str]:
    mask = dict(mask or {})
    unknown = set(mask) - set(dictionary.labels)
    if unknown:
        raise AssemblyError(f"mask names unknown features: {sorted(unknown)}")
    for label, role in mask.items():
        if role not in MASK_ROLES:
            raise AssemblyError(f"mask role for {label} must be one of {MASK_ROLES}, got {role!r}")
    return [mask.get(label, "varying") for label in dictionary.labels]


def _differential_blocks(U: Field, dictionary: Dictionary, basis: BasisSet, roles: List[str],
                         smoother: SmootherConfig):
    base = assemble_differential(U, dictionary, smoother)
    phi = node_values(basis, U.grid, base.row_x, base.row_t)
    blocks = []
    for k, role in enumerate(roles):
        column = base.matrix[:, k]
        blocks.append(column[:, None] if role == "constant" else column[:, None] * phi)
    return blocks, base


def _weak_blocks(U: Field, dictionary: Dictionary, basis: BasisSet, roles: List[str],
                 phi: TestFunction, stride: Tuple[int, int], max_rows: int):
    if dictionary.style != DictionaryStyle.WEAK:
        raise AssemblyError("weak group assembly needs a weak-form dictionary")
    integrator = WeakIntegrator(U, phi, stride, max_rows)
    grid = U.grid
    blocks, features = [], []
    for term, role in zip(dictionary.terms, roles):
        power = np.ones_like(U.values) if term.beta == 0 else U.values ** term.beta
        sign = (-1.0) ** term.alpha
        constant = sign * integrator.correlate(power, x_order=term.alpha)
        features.append(constant)
        if role == "constant":
            blocks.append(constant[:, None])
            continue
        block = np.empty((integrator.n_rows, basis.size))
        for m in range(basis.size):
            total = np.zeros(integrator.n_rows)
            for binom, on_coef, on_phi in leibniz_terms(term.alpha):
                weighted = power * field_values(basis, grid, m, deriv=on_coef)
                total += binom * integrator.correlate(weighted, x_order=on_phi)
            block[:, m] = sign * total
        blocks.append(block)
    rhs = -integrator.correlate(U.values, t_order=1)
    return blocks, np.column_stack(features), rhs, integrator


def assemble_group_system(U: Field, dictionary: Dictionary, basis: BasisSet, form: str = "differential",
                          smoother: Optional[SmootherConfig] = None, phi: Optional[TestFunction] = None,
                          stride: Tuple[int, int] = (1, 1), max_rows: int = DEFAULT_MAX_ROWS,
                          mask: Optional[Dict[str, str]] = None) -> GroupSystem:
    """Group system over the dictionary; `mask` marks features constant, varying or excluded."""
    roles = _roles(dictionary, mask)
    keep = [k for k, role in enumerate(roles) if role != "excluded"]
    if not keep:
        raise AssemblyError("every feature is excluded by the mask")
    kept = Dictionary(tuple(dictionary.terms[k] for k in keep), dictionary.max_alpha,
                      dictionary.max_beta, dictionary.style, dictionary.max_total_degree)
    roles = [roles[k] for k in keep]

    if form == "differential":
        blocks, base = _differential_blocks(U, kept, basis, roles, smoother or SmootherConfig())
        features, rhs, row_x, row_t = base.matrix, base.rhs, base.row_x, base.row_t
    elif form == "weak":
        if phi is None:
            raise AssemblyError("weak group assembly needs a test function")
        blocks, features, rhs, integrator = _weak_blocks(U, kept, basis, roles, phi, stride, max_rows)
        row_x, row_t = integrator.row_x, integrator.row_t
    else:
        raise AssemblyError(f"form must be 'differential' or 'weak', got {form!r}")

    group_index = np.concatenate([np.full(b.shape[1], k) for k, b in enumerate(blocks)])
    logger.info("Assembled %s group system: %d rows x %d columns in %d groups (nb=%d)",
                form, len(rhs), len(group_index), len(blocks), basis.nb)
    return GroupSystem(
        matrix=np.column_stack(blocks),
        rhs=rhs,
        group_index=group_index,
        terms=kept.terms,
        basis=basis,
        row_x=row_x,
        row_t=row_t,
        grid=U.grid,
        feature_matrix=features,
    )


def normalize_group_columns(gsys: GroupSystem) -> GroupSystem:
    """Unit 2-norm columns; all-zero columns keep scale 1."""
    norms = np.linalg.norm(gsys.matrix, axis=0)
    zero = norms == 0
    warnings = list(gsys.warnings)
    if zero.any():
        for g in np.unique(gsys.group_index[zero]):
            logger.warning("Group %s has all-zero columns", gsys.terms[g].label)
            warnings.append(f"zero_columns:{gsys.terms[g].label}")
        norms = np.where(zero, 1.0, norms)
    return GroupSystem(
        matrix=gsys.matrix / norms,
        rhs=gsys.rhs,
        group_index=gsys.group_index,
        terms=gsys.terms,
        basis=gsys.basis,
        row_x=gsys.row_x,
        row_t=gsys.row_t,
        grid=gsys.grid,
        feature_matrix=gsys.feature_matrix,
        col_scale=gsys.col_scale * norms,
        warnings=warnings,
    )


def coefficient_functions(gsys: GroupSystem, coeffs: np.ndarray,
                          groups: Optional[List[int]] = None) -> Dict[str, np.ndarray]:
    """Reconstructed c_k on the grid, shape (nx,) or (nx, nt) for time-varying bases.

    coeffs are physical, full length over the columns of gsys.
    """
    grid, basis = gsys.grid, gsys.basis
    groups = range(gsys.n_groups) if groups is None else groups
    out = {}
    for g in groups:
        cols = gsys.columns_of(g)
        c = np.asarray(coeffs, dtype=float)[cols]
        shape = (grid.nx, grid.nt) if basis.in_time else (grid.nx,)
        if len(cols) == 1:
            out[gsys.terms[g].label] = np.full(shape, float(c[0]))
            continue
        values = sum(c[m] * field_values(basis, grid, m) for m in range(basis.size))
        out[gsys.terms[g].label] = values if basis.in_time else values[:, 0]
    return out
