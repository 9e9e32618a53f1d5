"""Probing trajectories: run prefixes turned into classifier inputs.

The hardness filter sees a single short trajectory from the generalist
solver; the selector sees the three solvers' trajectories concatenated in
fixed portfolio order. Values are best-so-far error per generation, so
segments have equal length regardless of population size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solvers import CMA_ES, DE, POPULATION, PSO, SOLVER_ORDER, RunRecord, SolverError

PROBE_GENERATIONS = 7
HARDNESS_PROBE_COST = PROBE_GENERATIONS * POPULATION[CMA_ES]          # 70
SELECTOR_PROBE_COST = PROBE_GENERATIONS * sum(POPULATION.values())    # 560
INCREMENTAL_PROBE_COST = PROBE_GENERATIONS * (POPULATION[DE] + POPULATION[PSO])  # 490


class TrajectoryError(ValueError):
    """Malformed trajectory input."""


@dataclass(frozen=True)
class ProbingTrajectory:
    solver: str
    values: np.ndarray  # best-so-far error per probing generation
    evaluations_cost: int

    def __post_init__(self) -> None:
        if self.solver not in POPULATION:
            raise TrajectoryError(f"unknown solver {self.solver!r}")
        expected = len(self.values) * POPULATION[self.solver]
        if self.evaluations_cost != expected:
            raise TrajectoryError(
                f"cost {self.evaluations_cost} != generations x population {expected}"
            )


@dataclass(frozen=True)
class ConcatenatedTrajectory:
    parts: tuple[ProbingTrajectory, ProbingTrajectory, ProbingTrajectory]
    total_cost: int

    @property
    def values(self) -> np.ndarray:
        return np.concatenate([p.values for p in self.parts])


def prefix(record: RunRecord, generations: int = PROBE_GENERATIONS) -> ProbingTrajectory:
    """First `generations` best-so-far values of a run; a true run prefix."""
    if generations < 1:
        raise TrajectoryError(f"need at least one generation, got {generations}")
    if generations > record.generations:
        raise SolverError(
            f"record has {record.generations} generations, prefix of {generations} requested"
        )
    values = np.asarray(record.best_so_far[:generations], dtype=float)
    values.setflags(write=False)
    return ProbingTrajectory(
        solver=record.solver,
        values=values,
        evaluations_cost=generations * record.population,
    )


def concat(
    cma: ProbingTrajectory, de: ProbingTrajectory, pso: ProbingTrajectory
) -> ConcatenatedTrajectory:
    """Fixed-order concatenation (CMA-ES, DE, PSO) of equal-length probes."""
    expected = (CMA_ES, DE, PSO)
    got = (cma.solver, de.solver, pso.solver)
    if got != expected:
        raise TrajectoryError(f"solver order must be {expected}, got {got}")
    lengths = {len(p.values) for p in (cma, de, pso)}
    if len(lengths) != 1:
        raise TrajectoryError(f"probing lengths differ: {sorted(lengths)}")
    total = cma.evaluations_cost + de.evaluations_cost + pso.evaluations_cost
    return ConcatenatedTrajectory(parts=(cma, de, pso), total_cost=total)


def signed_log(values: np.ndarray) -> np.ndarray:
    """sign(v) * log10(1 + |v|), elementwise."""
    values = np.asarray(values, dtype=float)
    return np.sign(values) * np.log10(1.0 + np.abs(values))


def normalize(values: np.ndarray) -> np.ndarray:
    """Signed-log transform then per-trajectory standardization.

    Raw errors span many orders of magnitude; the signed log compresses
    them and the standardization removes the remaining per-instance scale.
    Constant trajectories map to all-zeros.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise TrajectoryError("empty trajectory")
    if not np.all(np.isfinite(values)):
        raise TrajectoryError("non-finite trajectory values")
    out = signed_log(values)
    std = out.std()
    if std == 0.0:
        return np.zeros_like(out)
    return (out - out.mean()) / std
