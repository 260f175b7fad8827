"""Label lookup and parsing for dictionaries."""

import logging
import re
from typing import Dict, List, Sequence

from rapidfuzz import fuzz, process

from src.domain.errors import DictionaryError
from src.domain.models import Dictionary, DictionaryStyle, FeatureTerm

from .terms import MAX_ALPHA, monomial_term, weak_term

logger = logging.getLogger(__name__)

_POWER = re.compile(r"^u(?:\^(\d+))?$")
_DERIVATIVE = re.compile(r"^u_(x+)(?:\^(\d+))?$")
_WEAK_DERIVATIVE = re.compile(r"^\(u\^(\d+)\)_(x+)$")


def _normalize(label: str) -> str:
    return label.replace(" ", "")


def suggest_labels(labels: Sequence[str], name: str, limit: int = 3) -> List[str]:
    matches = process.extract(_normalize(name), list(labels), scorer=fuzz.ratio, limit=limit)
    return [label for label, score, _ in matches if score >= 50]


def resolve_label(dictionary, name: str) -> int:
    """Column index of `name`; unknown names raise with close matches listed."""
    labels = list(dictionary.labels)
    key = _normalize(name)
    if key in labels:
        return labels.index(key)
    hints = suggest_labels(labels, key)
    hint = f" (did you mean {', '.join(hints)}?)" if hints else ""
    raise DictionaryError(f"unknown feature label {name!r}{hint}")


def parse_label(label: str, style: DictionaryStyle) -> FeatureTerm:
    label = _normalize(label)
    if label == "1":
        return weak_term(0, 0) if style == DictionaryStyle.WEAK else monomial_term({})
    if style == DictionaryStyle.WEAK:
        m = _POWER.match(label)
        if m:
            return weak_term(0, int(m.group(1) or 1))
        m = _DERIVATIVE.match(label)
        if m and m.group(2) is None:
            return weak_term(len(m.group(1)), 1)
        m = _WEAK_DERIVATIVE.match(label)
        if m:
            return weak_term(len(m.group(2)), int(m.group(1)))
        raise DictionaryError(f"cannot parse weak-form label {label!r}")

    exponents: Dict[int, int] = {}
    for factor in label.split("*"):
        m = _POWER.match(factor)
        if m:
            order, power = 0, int(m.group(1) or 1)
        else:
            m = _DERIVATIVE.match(factor)
            if not m:
                raise DictionaryError(f"cannot parse monomial factor {factor!r} in {label!r}")
            order, power = len(m.group(1)), int(m.group(2) or 1)
        if order > MAX_ALPHA:
            raise DictionaryError(f"derivative order {order} in {label!r} exceeds {MAX_ALPHA}")
        exponents[order] = exponents.get(order, 0) + power
    return monomial_term(exponents)


def dictionary_from_labels(labels: Sequence[str], style: DictionaryStyle) -> Dictionary:
    """Rebuild a dictionary from report labels, keeping their order."""
    style = DictionaryStyle(style)
    terms = tuple(parse_label(label, style) for label in labels)
    if len({t.label for t in terms}) != len(terms):
        raise DictionaryError("duplicate labels in dictionary")
    max_alpha = max((t.max_order for t in terms), default=0)
    if style == DictionaryStyle.WEAK:
        max_beta = max((t.beta for t in terms), default=0)
    else:
        max_beta = max((p for t in terms for _, p in t.exponents), default=0)
    max_degree = max((t.degree for t in terms), default=0)
    return Dictionary(terms, max_alpha, max_beta, style, max_degree)
