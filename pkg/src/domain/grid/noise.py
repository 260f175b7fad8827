"""Noise model: sigma from a percentage of the rms or from a centered-rms ratio."""

import logging

import numpy as np

from src.domain.errors import FieldError, NoiseError
from src.domain.models import Field, NoiseKind, NoiseSpec

logger = logging.getLogger(__name__)


def _samples(clean) -> np.ndarray:
    values = clean.values if isinstance(clean, Field) else np.asarray(clean, dtype=float)
    if values.size == 0:
        raise FieldError("empty field")
    return values


def sigma_from_percent(clean, p: float) -> float:
    """(p/100) * rms(u) over all grid samples."""
    if p < 0:
        raise NoiseError(f"noise percentage must be nonnegative, got {p}")
    u = _samples(clean)
    return float(p / 100.0 * np.sqrt(np.mean(u ** 2)))


def sigma_from_nsr(clean, nsr: float) -> float:
    """nsr * rms(u - midrange(u)); reflects the local variation of the data."""
    if nsr < 0:
        raise NoiseError(f"noise-to-signal ratio must be nonnegative, got {nsr}")
    u = _samples(clean)
    mid = 0.5 * (u.max() + u.min())
    return float(nsr * np.sqrt(np.mean((u - mid) ** 2)))


def noise_sigma(clean: Field, spec: NoiseSpec) -> float:
    if spec.kind == NoiseKind.PERCENT:
        return sigma_from_percent(clean, 100.0 * spec.level)
    return sigma_from_nsr(clean, spec.level)


def add_gaussian_noise(clean: Field, spec: NoiseSpec) -> Field:
    """clean + iid N(0, sigma^2); deterministic for a fixed seed."""
    sigma = noise_sigma(clean, spec)
    if sigma == 0.0:
        return clean.with_values(clean.values.copy())
    rng = np.random.default_rng(spec.seed)
    noise = rng.normal(0.0, sigma, size=clean.values.shape)
    logger.info("Added Gaussian noise: kind=%s level=%g sigma=%.4g seed=%d",
                spec.kind.value, spec.level, sigma, spec.seed)
    return clean.with_values(clean.values + noise)
