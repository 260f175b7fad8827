"""Time-evolution errors: evolve a candidate at a fine step and compare with the data."""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.domain.errors import SelectionError
from src.domain.models import CandidateModel, EvolutionScheme, Field, Grid, PdeSpec
from src.domain.simulation.evolution import evolve_candidate

logger = logging.getLogger(__name__)

# Penalty factor on ||U||_F for a diverged MTEE shoot.
DIVERGED_SHOOT_PENALTY = 1e3
MAX_SUBSET_SIZE = 12


def candidate_pde(candidate: CandidateModel, grid: Grid, initial: np.ndarray,
                  scheme: Optional[EvolutionScheme] = None) -> PdeSpec:
    support = list(candidate.support)
    if scheme is None:
        scheme = EvolutionScheme.SPECTRAL if grid.periodic else EvolutionScheme.FD
    return PdeSpec(
        terms=tuple(candidate.terms[i] for i in support),
        coeffs=np.asarray(candidate.coeffs, dtype=float)[support],
        grid=grid,
        initial=np.asarray(initial, dtype=float),
        scheme=scheme,
    )


def tee(candidate: CandidateModel, data: Field, fine_dt: float, initial: Optional[np.ndarray] = None,
        scheme: Optional[EvolutionScheme] = None) -> float:
    """sum |U_hat - U| dx dt over the whole record; inf if the candidate diverges."""
    grid = data.grid
    if fine_dt > grid.dt / 10.0 * (1 + 1e-12):
        raise SelectionError(f"TEE needs fine_dt <= dt/10 = {grid.dt / 10.0:g}, got {fine_dt:g}")
    initial = data.values[:, 0] if initial is None else initial
    result = evolve_candidate(candidate_pde(candidate, grid, initial, scheme), fine_dt, grid.nt)
    if result.diverged:
        logger.debug("TEE: %s diverged at step %s", candidate.labels, result.diverged_at)
        return float("inf")
    return float(np.abs(result.states - data.values).sum() * grid.dx * grid.dt)


def tee_many(candidates: Sequence[CandidateModel], data: Field, fine_dt: float,
             initial: Optional[np.ndarray] = None, max_workers: int = 1) -> List[float]:
    """TEE of each candidate, in candidate order."""
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(lambda c: tee(c, data, fine_dt, initial), candidates))


def default_window(nt: int) -> int:
    return max(1, nt // 10)


def mtee(candidate: CandidateModel, data: Field, fine_dt: float, w: Optional[int] = None,
         max_workers: int = 1) -> float:
    """Mean over starts n of ||U_hat^(n+w | n) - U^(n+w)||_2."""
    grid = data.grid
    w = default_window(grid.nt) if w is None else int(w)
    if not 1 <= w < grid.nt:
        raise SelectionError(f"MTEE window must be in [1, {grid.nt - 1}], got {w}")
    if fine_dt > grid.dt / 10.0 * (1 + 1e-12):
        raise SelectionError(f"MTEE needs fine_dt <= dt/10 = {grid.dt / 10.0:g}, got {fine_dt:g}")
    pde = candidate_pde(candidate, grid, data.values[:, 0])
    penalty = DIVERGED_SHOOT_PENALTY * float(np.linalg.norm(data.values))

    def shoot(n: int) -> float:
        result = evolve_candidate(pde, fine_dt, w + 1, start=data.values[:, n])
        if result.diverged:
            return penalty
        return float(np.linalg.norm(result.states[:, w] - data.values[:, n + w]))

    starts = range(grid.nt - w)
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        errors = list(executor.map(shoot, starts))
    return float(np.mean(errors))


def tee_candidates_from_path(path: Sequence[Tuple[float, Tuple[int, ...]]],
                             max_subset_size: int = MAX_SUBSET_SIZE) -> List[Tuple[int, ...]]:
    """Every nonempty subset of each active set on a LASSO path, first occurrence order.

    Active sets larger than max_subset_size are skipped with a warning.
    """
    seen = set()
    out: List[Tuple[int, ...]] = []
    for lam, active in path:
        if len(active) > max_subset_size:
            logger.warning("Active set of size %d at lambda=%.3g exceeds %d; skipped",
                           len(active), lam, max_subset_size)
            continue
        for size in range(1, len(active) + 1):
            for subset in combinations(sorted(active), size):
                if subset not in seen:
                    seen.add(subset)
                    out.append(subset)
    return out
