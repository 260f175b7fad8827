"""Exception hierarchy.

Every error raised on purpose by the library derives from IdentError, which
itself derives from ValueError so callers that only know about ValueError
keep working. Recoverable numerical degradations do not raise: they are
reported as string flags on the returned objects.
"""


class IdentError(ValueError):
    """Base class for all identification errors."""


class ConfigError(IdentError):
    """Invalid or unreadable configuration."""


class GridError(IdentError):
    """Grid parameters out of range."""


class FieldError(IdentError):
    """Field values inconsistent with their grid, or unreadable field file."""


class NoiseError(IdentError):
    """Invalid noise specification."""


class SimulationError(IdentError):
    """Reference simulation or candidate evolution failed."""


class DifferentiationError(IdentError):
    """Finite-difference stencil does not fit the input."""


class SmootherError(IdentError):
    """LSMA / MLS smoothing failed."""


class DictionaryError(IdentError):
    """Dictionary limits exceeded, unknown label or missing derivative."""


class AssemblyError(IdentError):
    """Linear-system assembly failed."""


class RegressionError(IdentError):
    """Sparse regression called with invalid arguments."""


class SelectionError(IdentError):
    """Model-selection criterion called with invalid arguments."""


class BasisError(IdentError):
    """Invalid basis for varying coefficients."""


class MetricError(IdentError):
    """Metric undefined for the given inputs."""
