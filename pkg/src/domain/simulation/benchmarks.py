"""Benchmark PDEs of the form u_t = sum_j c_j d^j u + a (u^2)_x."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

import numpy as np

from src.domain.errors import SimulationError
from src.domain.models import DictionaryStyle, FeatureTerm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Benchmark:
    """Linear part {derivative order: coefficient} plus flux a * (u^2)_x."""
    name: str
    linear: Dict[int, float] = field(default_factory=dict)
    flux: float = 0.0
    periodic_only: bool = False

    def coefficient_of(self, term: FeatureTerm) -> float:
        # a (u^2)_x == 2a u u_x
        if term.style == DictionaryStyle.WEAK:
            if term.beta == 1:
                return float(self.linear.get(term.alpha, 0.0))
            if (term.alpha, term.beta) == (1, 2):
                return float(self.flux)
            return 0.0
        powers = dict(term.exponents)
        if len(powers) == 1:
            (order, power), = powers.items()
            if power == 1:
                return float(self.linear.get(order, 0.0))
        if powers == {0: 1, 1: 1}:
            return 2.0 * float(self.flux)
        return 0.0

    def true_coefficients(self, terms: Sequence[FeatureTerm]) -> np.ndarray:
        """Coefficient vector over `terms` (a Dictionary's or a system's)."""
        terms = getattr(terms, "terms", terms)
        return np.array([self.coefficient_of(t) for t in terms])

    def true_support(self, terms: Sequence[FeatureTerm]) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.true_coefficients(terms))]


BENCHMARKS: Dict[str, Benchmark] = {
    "burgers": Benchmark("burgers", flux=-0.5),
    "viscous_burgers": Benchmark("viscous_burgers", {2: 0.1}, flux=-0.5),
    "transport": Benchmark("transport", {1: -1.0}),
    "transport_diffusion": Benchmark("transport_diffusion", {1: -1.0, 2: 0.05}),
    "kdv": Benchmark("kdv", {3: -1.0}, flux=-0.25, periodic_only=True),
    "ks": Benchmark("ks", {2: -1.0, 4: -1.0}, flux=-0.5, periodic_only=True),
}

# Initial conditions in the relative coordinate s = (x - x0) / L.
INITIAL_CONDITIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin2pi": lambda s: np.sin(2 * np.pi * s),
    "sin4pi": lambda s: np.sin(4 * np.pi * s),
    "sin4pi_cos2pi": lambda s: np.sin(4 * np.pi * s) * np.cos(2 * np.pi * s),
    "cos": lambda s: np.cos(2 * np.pi * s),
    "ks": lambda s: np.cos(2 * np.pi * s) * (1 + np.sin(2 * np.pi * s)),
    "gauss": lambda s: np.exp(-((s - 0.5) / 0.1) ** 2),
}


def get_benchmark(name: str) -> Benchmark:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise SimulationError(f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}")


def initial_condition(name: str, x: np.ndarray, x0: float, length: float) -> np.ndarray:
    try:
        func = INITIAL_CONDITIONS[name]
    except KeyError:
        raise SimulationError(f"unknown initial condition {name!r}; choose from {sorted(INITIAL_CONDITIONS)}")
    return func((np.asarray(x) - x0) / length)
