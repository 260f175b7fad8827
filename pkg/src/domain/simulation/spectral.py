"""Fourier symbols for periodic grids."""

import numpy as np


def wavenumbers(nx: int, dx: float) -> np.ndarray:
    return 2.0 * np.pi * np.fft.rfftfreq(nx, d=dx)


def derivative_symbol(nx: int, dx: float, order: int) -> np.ndarray:
    """(ik)^order; the Nyquist mode is zeroed for odd orders."""
    symbol = (1j * wavenumbers(nx, dx)) ** order
    if order % 2 == 1 and nx % 2 == 0:
        symbol[-1] = 0.0
    return symbol


def spectral_derivative(values: np.ndarray, dx: float, order: int) -> np.ndarray:
    """Derivative along axis 0."""
    if order == 0:
        return np.array(values, dtype=float)
    nx = values.shape[0]
    symbol = derivative_symbol(nx, dx, order)
    if values.ndim > 1:
        symbol = symbol.reshape((-1,) + (1,) * (values.ndim - 1))
    return np.fft.irfft(symbol * np.fft.rfft(values, axis=0), n=nx, axis=0)
