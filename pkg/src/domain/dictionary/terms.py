"""Feature dictionary construction.

WEAK dictionaries hold d^a/dx^a (u^b) for a <= max_alpha, b <= max_beta,
skipping b = 0 with a >= 1 (identically zero). MONOMIAL dictionaries hold
products of u, u_x, ... up to derivative order max_alpha, each factor with
power <= max_beta and total degree <= max_total_degree (0: no cap).
"""

import itertools
import logging
from typing import Dict, Tuple

from src.domain.errors import DictionaryError
from src.domain.models import Dictionary, DictionaryStyle, FeatureTerm

logger = logging.getLogger(__name__)

MAX_ALPHA = 4
MAX_BETA = 6


def derivative_label(order: int) -> str:
    return "u" if order == 0 else "u_" + "x" * order


def weak_label(alpha: int, beta: int) -> str:
    if beta == 0:
        return "1"
    power = "u" if beta == 1 else f"u^{beta}"
    if alpha == 0:
        return power
    if beta == 1:
        return derivative_label(alpha)
    return f"({power})_" + "x" * alpha


def monomial_label(exponents: Tuple[Tuple[int, int], ...]) -> str:
    if not exponents:
        return "1"
    factors = []
    for order, power in exponents:
        base = derivative_label(order)
        factors.append(base if power == 1 else f"{base}^{power}")
    return "*".join(factors)


def weak_term(alpha: int, beta: int) -> FeatureTerm:
    return FeatureTerm(DictionaryStyle.WEAK, weak_label(alpha, beta), alpha=alpha, beta=beta)


def monomial_term(exponents: Dict[int, int]) -> FeatureTerm:
    pairs = tuple(sorted((int(o), int(p)) for o, p in exponents.items() if p > 0))
    return FeatureTerm(DictionaryStyle.MONOMIAL, monomial_label(pairs), exponents=pairs)


def _monomial_sort_key(term: FeatureTerm):
    powers = dict(term.exponents)
    return term.degree, term.max_order, tuple(-powers.get(o, 0) for o in range(MAX_ALPHA + 1))


def build_dictionary(max_alpha: int, max_beta: int, style: DictionaryStyle = DictionaryStyle.WEAK,
                     max_total_degree: int = 0) -> Dictionary:
    """Enumerate the dictionary; the order is a pure function of the arguments."""
    style = DictionaryStyle(style)
    if not 0 <= max_alpha <= MAX_ALPHA:
        raise DictionaryError(f"max_alpha must be in [0, {MAX_ALPHA}], got {max_alpha}")
    if not 0 <= max_beta <= MAX_BETA:
        raise DictionaryError(f"max_beta must be in [0, {MAX_BETA}], got {max_beta}")
    if max_total_degree < 0:
        raise DictionaryError(f"max_total_degree must be nonnegative, got {max_total_degree}")

    if style == DictionaryStyle.WEAK:
        terms = [weak_term(a, b)
                 for a in range(max_alpha + 1)
                 for b in range(max_beta + 1)
                 if not (b == 0 and a >= 1)]
    else:
        orders = range(max_alpha + 1)
        terms = []
        for powers in itertools.product(range(max_beta + 1), repeat=len(orders)):
            if max_total_degree and sum(powers) > max_total_degree:
                continue
            terms.append(monomial_term(dict(zip(orders, powers))))
        terms.sort(key=_monomial_sort_key)

    logger.debug("Built %s dictionary with %d terms", style.value, len(terms))
    return Dictionary(tuple(terms), max_alpha, max_beta, style, max_total_degree)
