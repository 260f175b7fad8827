"""Accelerated proximal gradient with function-value restart.

Shared by LASSO and group LASSO. Each accepted iterate has an objective no
larger than the previous one: when the momentum step increases it, the
iteration restarts with a plain proximal step from the current iterate.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class ProximalResult:
    coeffs: np.ndarray
    objective: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = True
    flags: List[str] = field(default_factory=list)


def lipschitz_constant(matrix: np.ndarray, iterations: int = 200) -> float:
    """1.01 x largest eigenvalue of F^T F by power iteration."""
    n = matrix.shape[1]
    v = np.ones(n) / np.sqrt(n)
    value = 0.0
    for _ in range(iterations):
        w = matrix.T @ (matrix @ v)
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        value = float(v @ w)
        v = w / norm
    return 1.01 * value


def proximal_gradient(matrix: np.ndarray, rhs: np.ndarray,
                      prox: Callable[[np.ndarray, float], np.ndarray],
                      penalty: Callable[[np.ndarray], float],
                      tol: float = 1e-8, max_iter: int = 100_000) -> ProximalResult:
    """Minimize 0.5 ||F c - b||^2 + penalty(c); prox(v, step) is the penalty's prox."""
    n = matrix.shape[1]
    lipschitz = lipschitz_constant(matrix)
    x = np.zeros(n)
    if lipschitz == 0.0:
        return ProximalResult(x, [0.5 * float(rhs @ rhs)], 0, True)

    def objective(c):
        r = matrix @ c - rhs
        return 0.5 * float(r @ r) + penalty(c)

    def step_from(v):
        # gradient and threshold share one step factor, so lambda >= ||F^T b||_inf gives exact zeros
        step = 1.0 / lipschitz
        return prox(v - (matrix.T @ (matrix @ v - rhs)) * step, step)

    f = objective(x)
    history = [f]
    y = x.copy()
    t = 1.0
    for it in range(1, max_iter + 1):
        x_new = step_from(y)
        f_new = objective(x_new)
        if f_new > f:
            t = 1.0
            x_new = step_from(x)
            f_new = objective(x_new)
            while f_new > f + 1e-12 * max(1.0, abs(f)) and lipschitz < 1e300:
                lipschitz *= 2.0
                x_new = step_from(x)
                f_new = objective(x_new)
            y = x_new.copy()
        else:
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            y = x_new + (t - 1.0) / t_new * (x_new - x)
            t = t_new
        step = float(np.abs(x_new - x).max())
        change = abs(f - f_new) / max(abs(f), 1e-300)
        x, f = x_new, f_new
        history.append(f)
        if change < tol and step <= 10.0 * tol * max(1.0, float(np.abs(x).max())):
            return ProximalResult(x, history, it, True)

    logger.warning("Proximal gradient did not converge in %d iterations", max_iter)
    return ProximalResult(x, history, max_iter, False, ["not_converged"])
