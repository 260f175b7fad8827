from .benchmarks import BENCHMARKS, Benchmark, get_benchmark, initial_condition
from .evolution import evolve_candidate, stability_indicator
from .reference import simulate_reference
from .spectral import spectral_derivative
