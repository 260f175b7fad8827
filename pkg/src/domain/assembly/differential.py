"""Differential-form system F c = b on grid nodes."""

import logging
from typing import Optional, Tuple

import numpy as np

from src.domain.denoising.sdd import sdd_apply, sdd_time_derivative
from src.domain.dictionary.evaluation import DerivativeTable, eval_feature_pointwise
from src.domain.models import Dictionary, Field, LinearSystem, SmootherConfig

logger = logging.getLogger(__name__)


def interior_nodes(field: Field, max_order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes kept as rows: one-sided stencil zones and the first/last slice are dropped."""
    grid = field.grid
    mx = 0 if grid.periodic else max(2, max_order)
    xi = np.arange(mx, grid.nx - mx)
    tn = np.arange(1, grid.nt - 1)
    return xi, tn


def flatten_rows(values: np.ndarray, xi: np.ndarray, tn: np.ndarray) -> np.ndarray:
    """Restrict to xi x tn and flatten with space varying fastest."""
    return values[np.ix_(xi, tn)].ravel(order="F")


def assemble_differential(U: Field, dictionary: Dictionary, smoother: SmootherConfig,
                          max_order: Optional[int] = None) -> LinearSystem:
    grid = U.grid
    max_order = dictionary.max_alpha if max_order is None else max_order

    def differentiate(values, order):
        return sdd_apply(values, grid.dx, order, smoother, grid.periodic)

    table = DerivativeTable(U.values, differentiate, max_order=max(max_order, 4))
    xi, tn = interior_nodes(U, max_order)
    columns = [flatten_rows(eval_feature_pointwise(term, table), xi, tn) for term in dictionary.terms]
    rhs = flatten_rows(sdd_time_derivative(U, smoother), xi, tn)
    row_x, row_t = np.meshgrid(xi, tn, indexing="ij")

    logger.info("Assembled differential system: %d rows x %d features (smoother=%s)",
                len(rhs), len(columns), smoother.kind.value)
    return LinearSystem(
        matrix=np.column_stack(columns),
        rhs=rhs,
        terms=dictionary.terms,
        row_x=row_x.ravel(order="F"),
        row_t=row_t.ravel(order="F"),
        grid=grid,
        form="differential",
    )
