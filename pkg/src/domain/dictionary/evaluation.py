"""Pointwise feature evaluation from a table of derivative estimates."""

import logging
from typing import Callable, Dict, Mapping, Tuple, Union

import numpy as np

from src.domain.errors import DictionaryError
from src.domain.models import DictionaryStyle, FeatureTerm

logger = logging.getLogger(__name__)

Key = Union[int, Tuple[int, int]]


class DerivativeTable(Mapping):
    """Lazy table of derivative estimates of one field.

    table[j] is d^j u; table[(a, b)] is d^a (u^b), the power taken before
    differentiating. `differentiate(values, order)` must include any
    smoothing, so table[0] is the (smoothed) field itself.
    """

    def __init__(self, values: np.ndarray, differentiate: Callable[[np.ndarray, int], np.ndarray],
                 max_order: int = 4):
        self._values = np.asarray(values, dtype=float)
        self._differentiate = differentiate
        self._max_order = max_order
        self._cache: Dict[Tuple[int, int], np.ndarray] = {}

    def _compute(self, alpha: int, beta: int) -> np.ndarray:
        if alpha > self._max_order:
            raise DictionaryError(f"missing derivative order {alpha} (table holds up to {self._max_order})")
        if beta == 1:
            return self._differentiate(self._values, alpha)
        power = self[(0, 1)] ** beta
        if alpha == 0:
            return power
        return self._differentiate(power, alpha)

    def __getitem__(self, key: Key) -> np.ndarray:
        alpha, beta = (key, 1) if isinstance(key, (int, np.integer)) else key
        alpha, beta = int(alpha), int(beta)
        if (alpha, beta) not in self._cache:
            self._cache[(alpha, beta)] = self._compute(alpha, beta)
        return self._cache[(alpha, beta)]

    def __iter__(self):
        return iter(range(self._max_order + 1))

    def __len__(self) -> int:
        return self._max_order + 1

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._values.shape


def _lookup(table: Mapping, alpha: int, beta: int) -> np.ndarray:
    try:
        if isinstance(table, DerivativeTable):
            return table[(alpha, beta)]
        if (alpha, beta) in table:
            return np.asarray(table[(alpha, beta)], dtype=float)
        if beta == 1:
            return np.asarray(table[alpha], dtype=float)
        if alpha == 0:
            return np.asarray(table[0], dtype=float) ** beta
    except KeyError:
        pass
    raise DictionaryError(f"missing derivative order {alpha} of u^{beta} in derivative table")


def _table_shape(table: Mapping) -> Tuple[int, ...]:
    if isinstance(table, DerivativeTable):
        return table.shape
    for value in table.values():
        return np.shape(value)
    raise DictionaryError("empty derivative table")


def eval_feature_pointwise(term: FeatureTerm, derivative_table: Mapping) -> np.ndarray:
    """Evaluate one feature at every node covered by the table."""
    if term.is_constant:
        return np.ones(_table_shape(derivative_table))
    if term.style == DictionaryStyle.WEAK:
        return _lookup(derivative_table, term.alpha, term.beta).copy()
    result = None
    for order, power in term.exponents:
        factor = _lookup(derivative_table, order, 1) ** power
        result = factor.copy() if result is None else result * factor
    return result
