from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.domain.errors import FieldError, GridError, NoiseError, SmootherError


class Boundary(Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


class NoiseKind(Enum):
    """PERCENT: sigma relative to the rms of the field; NSR: relative to the centered rms."""
    PERCENT = "percent"
    NSR = "nsr"


class SmootherKind(Enum):
    LSMA = "lsma"
    MLS = "mls"
    NONE = "none"


class DictionaryStyle(Enum):
    WEAK = "weak"
    MONOMIAL = "monomial"


class EvolutionScheme(Enum):
    SPECTRAL = "spectral"
    FD = "fd"


class BasisKind(Enum):
    HAT = "hat"
    BSPLINE = "bspline"
    CONSTANT = "constant"


@dataclass(frozen=True)
class Grid:
    """Uniform space-time grid. Periodic grids exclude the right endpoint."""
    x0: float
    dx: float
    nx: int
    t0: float
    dt: float
    nt: int
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if not (self.dx > 0 and self.dt > 0):
            raise GridError(f"dx and dt must be positive (dx={self.dx}, dt={self.dt})")
        if self.nx < 8:
            raise GridError(f"nx must be at least 8, got {self.nx}")
        if self.nt < 4:
            raise GridError(f"nt must be at least 4, got {self.nt}")

    @classmethod
    def over(cls, x_range: Tuple[float, float], nx: int, final_time: float, nt: int,
             boundary: Boundary = Boundary.PERIODIC, t0: float = 0.0) -> "Grid":
        """Grid covering x_range with nx nodes and [t0, final_time] with nt slices."""
        lo, hi = x_range
        dx = (hi - lo) / nx if boundary == Boundary.PERIODIC else (hi - lo) / (nx - 1)
        dt = (final_time - t0) / (nt - 1)
        return cls(float(lo), float(dx), int(nx), float(t0), float(dt), int(nt), boundary)

    @property
    def periodic(self) -> bool:
        return self.boundary == Boundary.PERIODIC

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.nt)

    @property
    def length(self) -> float:
        return self.dx * (self.nx if self.periodic else self.nx - 1)

    def with_times(self, nt: int) -> "Grid":
        return Grid(self.x0, self.dx, self.nx, self.t0, self.dt, nt, self.boundary)


@dataclass(frozen=True, eq=False)
class Field:
    """Sampled solution U[i, n] = u(x_i, t_n); space along axis 0."""
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.size == 0:
            raise FieldError("empty field")
        if values.shape != (self.grid.nx, self.grid.nt):
            raise FieldError(
                f"field shape {values.shape} does not match grid ({self.grid.nx}, {self.grid.nt})"
            )
        if not np.all(np.isfinite(values)):
            raise FieldError("field contains non-finite values")
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind = NoiseKind.PERCENT
    level: float = 0.0  # p/100 for PERCENT, sigma_NSR for NSR
    seed: int = 0

    def __post_init__(self):
        if self.level < 0:
            raise NoiseError(f"noise level must be nonnegative, got {self.level}")


@dataclass(frozen=True)
class SmootherConfig:
    kind: SmootherKind = SmootherKind.MLS
    # Kernel width in x units; None means 5 grid spacings.
    mls_bandwidth: Optional[float] = None
    degree: int = 2

    def __post_init__(self):
        if self.mls_bandwidth is not None and self.mls_bandwidth <= 0:
            raise SmootherError(f"MLS bandwidth must be positive, got {self.mls_bandwidth}")
        if self.degree not in (2, 3, 4):
            raise SmootherError(f"local polynomial degree must be 2, 3 or 4, got {self.degree}")


@dataclass(frozen=True)
class FeatureTerm:
    """One dictionary entry.

    WEAK terms are d^alpha/dx^alpha (u^beta). MONOMIAL terms are products of
    derivatives of u: exponents holds sorted (derivative order, power) pairs.
    """
    style: DictionaryStyle
    label: str
    alpha: int = 0
    beta: int = 0
    exponents: Tuple[Tuple[int, int], ...] = ()

    @property
    def is_constant(self) -> bool:
        if self.style == DictionaryStyle.WEAK:
            return self.alpha == 0 and self.beta == 0
        return not self.exponents

    @property
    def max_order(self) -> int:
        if self.style == DictionaryStyle.WEAK:
            return self.alpha
        return max((order for order, _ in self.exponents), default=0)

    @property
    def degree(self) -> int:
        if self.style == DictionaryStyle.WEAK:
            return self.beta
        return sum(power for _, power in self.exponents)


@dataclass(frozen=True)
class Dictionary:
    terms: Tuple[FeatureTerm, ...]
    max_alpha: int
    max_beta: int
    style: DictionaryStyle
    max_total_degree: int = 0

    @property
    def labels(self) -> List[str]:
        return [t.label for t in self.terms]

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class TestFunction:
    """Separable polynomial bump; mx, mt are half-widths in grid units."""
    __test__ = False  # not a pytest class

    mx: int
    mt: int
    px: int
    pt: int


@dataclass(eq=False)
class LinearSystem:
    """Identification system matrix @ c = rhs.

    The stored matrix is the physical feature matrix with each column divided
    by col_scale, so physical coefficients are solve-space coefficients
    divided by col_scale.
    """
    matrix: np.ndarray
    rhs: np.ndarray
    terms: Tuple[FeatureTerm, ...]
    row_x: np.ndarray
    row_t: np.ndarray
    grid: Grid
    form: str = "differential"
    scores: Optional[np.ndarray] = None
    col_scale: Optional[np.ndarray] = None
    col_norms: Optional[np.ndarray] = None
    error_scales: Optional[np.ndarray] = None
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        n_cols = self.matrix.shape[1]
        if self.col_scale is None:
            self.col_scale = np.ones(n_cols)
        if self.error_scales is None:
            self.error_scales = np.ones(n_cols)

    @property
    def labels(self) -> List[str]:
        return [t.label for t in self.terms]

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]

    def physical_matrix(self) -> np.ndarray:
        return self.matrix * self.col_scale


@dataclass(eq=False)
class CandidateModel:
    """A support over the columns of one system with its least-squares fit.

    support holds column indices (feature indices for group models); coeffs
    is full length over the system's columns, physical scale.
    """
    support: Tuple[int, ...]
    coeffs: np.ndarray
    residual: float
    terms: Tuple[FeatureTerm, ...]
    scores: Dict[str, float] = field(default_factory=dict)
    flags: List[str] = field(default_factory=list)
    history: List[float] = field(default_factory=list)

    @property
    def sparsity(self) -> int:
        return len(self.support)

    @property
    def labels(self) -> List[str]:
        return [self.terms[i].label for i in self.support]

    def coefficient_map(self) -> Dict[str, float]:
        return {self.terms[i].label: float(self.coeffs[i]) for i in self.support}


@dataclass(frozen=True, eq=False)
class BasisSet:
    """Uniform-knot B-spline basis (hats are degree-1 B-splines)."""
    kind: BasisKind
    nb: int
    order: int
    domain: Tuple[float, float]
    knots: np.ndarray
    in_time: bool = False
    nb_time: int = 1
    t_domain: Tuple[float, float] = (0.0, 1.0)
    t_knots: Optional[np.ndarray] = None
    t_order: int = 1

    @property
    def size(self) -> int:
        return self.nb * (self.nb_time if self.in_time else 1)


@dataclass(eq=False)
class GroupSystem:
    """Block system: the columns of feature k are contiguous (group_index == k)."""
    matrix: np.ndarray
    rhs: np.ndarray
    group_index: np.ndarray
    terms: Tuple[FeatureTerm, ...]
    basis: Optional[BasisSet]
    row_x: np.ndarray
    row_t: np.ndarray
    grid: Optional[Grid] = None
    feature_matrix: Optional[np.ndarray] = None
    col_scale: Optional[np.ndarray] = None
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.col_scale is None:
            self.col_scale = np.ones(self.matrix.shape[1])

    @property
    def n_groups(self) -> int:
        return len(self.terms)

    @property
    def labels(self) -> List[str]:
        return [t.label for t in self.terms]

    def columns_of(self, group: int) -> np.ndarray:
        return np.flatnonzero(self.group_index == group)


@dataclass(frozen=True, eq=False)
class PdeSpec:
    """u_t = sum_k coeffs[k] * f_k, evolved on grid from `initial`."""
    terms: Tuple[FeatureTerm, ...]
    coeffs: np.ndarray
    grid: Grid
    initial: np.ndarray
    scheme: EvolutionScheme = EvolutionScheme.FD

    def __post_init__(self):
        if len(self.terms) != len(self.coeffs):
            raise ValueError("coeffs length must equal number of terms")
        if len(self.initial) != self.grid.nx:
            raise ValueError("initial length must equal nx")


@dataclass
class EvolutionResult:
    """States at observation times, column 0 is the starting state."""
    states: np.ndarray
    diverged: bool = False
    diverged_at: Optional[int] = None
    substeps: int = 0


@dataclass
class PipelineOptions:
    """Typed options for one identification run."""
    pipeline: str = "weak_ident"
    data_path: str = ""
    benchmark: str = ""
    seed: int = 0
    output_dir: str = ""
    write_outputs: bool = True


@dataclass
class PipelineResult:
    """Result of a complete identification run."""
    report: dict = field(default_factory=dict)
    chosen: Optional[CandidateModel] = None
    output_paths: List[str] = field(default_factory=list)
    duration_seconds: float = 0.0
    warnings: List[str] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return bool(self.warnings)
