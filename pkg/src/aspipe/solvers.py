"""Portfolio solvers: CMA-ES, DE and PSO as seeded, generation-based minimizers.

Every run records the best-so-far error after each completed generation, so
any fixed-budget query at generation granularity can be answered from the
record. Runs are pure functions of (instance, config): re-running with a
larger horizon reproduces the shorter record as a prefix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import suite
from .suite import DOMAIN, ProblemInstance

CMA_ES = "cma-es"
DE = "de"
PSO = "pso"
SOLVER_ORDER: tuple[str, ...] = (CMA_ES, DE, PSO)
POPULATION: dict[str, int] = {CMA_ES: 10, DE: 30, PSO: 40}


class SolverError(ValueError):
    """Base error for solver misuse."""


class EmptyRunError(SolverError):
    """Budget too small for a single generation."""


class OutOfHorizonError(SolverError):
    """Query beyond the recorded horizon; the caller must extend the run."""


@dataclass(frozen=True)
class SolverConfig:
    solver: str
    seed: int
    max_evaluations: int
    target_error: float | None = None  # early stop at generation granularity

    def __post_init__(self) -> None:
        if self.solver not in POPULATION:
            raise SolverError(f"unknown solver {self.solver!r}")
        pop = POPULATION[self.solver]
        if self.max_evaluations < pop:
            raise EmptyRunError(
                f"max_evaluations {self.max_evaluations} below one generation ({pop})"
            )
        if self.max_evaluations % pop != 0:
            raise SolverError(
                f"max_evaluations {self.max_evaluations} not a multiple of population {pop}"
            )

    @property
    def population(self) -> int:
        return POPULATION[self.solver]


@dataclass(frozen=True)
class RunRecord:
    function: int
    instance_seed: int
    dimension: int
    solver: str
    run_seed: int
    population: int
    best_so_far: np.ndarray  # error per completed generation, non-increasing
    evaluations_used: int

    @property
    def generations(self) -> int:
        return len(self.best_so_far)

    @property
    def final_error(self) -> float:
        return float(self.best_so_far[-1])

    def key(self) -> tuple[int, int, str, int]:
        return (self.function, self.instance_seed, self.solver, self.run_seed)


def _rng_for(inst: ProblemInstance, cfg: SolverConfig) -> np.random.Generator:
    solver_idx = SOLVER_ORDER.index(cfg.solver)
    return np.random.default_rng(
        np.random.SeedSequence(
            [inst.function, inst.instance_seed, inst.dimension, solver_idx, cfg.seed]
        )
    )


def run(inst: ProblemInstance, cfg: SolverConfig) -> RunRecord:
    """Execute one seeded run and record per-generation best-so-far error."""
    rng = _rng_for(inst, cfg)
    if cfg.solver == CMA_ES:
        series = _run_cma(inst, cfg, rng)
    elif cfg.solver == DE:
        series = _run_de(inst, cfg, rng)
    else:
        series = _run_pso(inst, cfg, rng)
    best = np.asarray(series, dtype=float)
    return RunRecord(
        function=inst.function,
        instance_seed=inst.instance_seed,
        dimension=inst.dimension,
        solver=cfg.solver,
        run_seed=cfg.seed,
        population=cfg.population,
        best_so_far=best,
        evaluations_used=len(best) * cfg.population,
    )


def extend_run(inst: ProblemInstance, record: RunRecord, max_evaluations: int) -> RunRecord:
    """Deterministic continuation: re-run from seed with a larger horizon."""
    if max_evaluations <= record.evaluations_used:
        return record
    cfg = SolverConfig(record.solver, record.run_seed, max_evaluations)
    return run(inst, cfg)


def best_at(record: RunRecord, evaluations: int) -> float:
    """Best-so-far error after floor(evaluations / population) generations."""
    if evaluations < record.population:
        raise SolverError(
            f"query {evaluations} below one generation ({record.population})"
        )
    gens = evaluations // record.population
    if gens > record.generations:
        raise OutOfHorizonError(
            f"query at {evaluations} evaluations exceeds recorded horizon "
            f"{record.evaluations_used}"
        )
    return float(record.best_so_far[gens - 1])


# ---------------------------------------------------------------------------
# CMA-ES: (mu/mu_w, lambda) with cumulative step-size adaptation and
# rank-one + rank-mu covariance update. Candidates are clamped to the box
# for evaluation; the distribution update uses the unclamped samples, and
# ranking adds a quadratic out-of-box penalty so the mean keeps a selection
# gradient back toward the feasible region.

def _run_cma(inst: ProblemInstance, cfg: SolverConfig, rng: np.random.Generator) -> list[float]:
    d = inst.dimension
    lam = cfg.population
    mu = lam // 2
    w = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    w /= w.sum()
    mueff = 1.0 / np.sum(w**2)

    cc = (4.0 + mueff / d) / (d + 4.0 + 2.0 * mueff / d)
    cs = (mueff + 2.0) / (d + mueff + 5.0)
    c1 = 2.0 / ((d + 1.3) ** 2 + mueff)
    cmu = min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((d + 2.0) ** 2 + mueff))
    damps = 1.0 + 2.0 * max(0.0, np.sqrt((mueff - 1.0) / (d + 1.0)) - 1.0) + cs
    chi_n = np.sqrt(d) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d))

    mean = rng.uniform(DOMAIN.lower, DOMAIN.upper, size=d)
    sigma = 0.4 * DOMAIN.width
    pc = np.zeros(d)
    ps = np.zeros(d)
    cov = np.eye(d)

    generations = cfg.max_evaluations // lam
    series: list[float] = []
    best = np.inf
    for gen in range(generations):
        eigvals, basis = np.linalg.eigh(cov)
        eigvals = np.maximum(eigvals, 1e-30)
        scale = np.sqrt(eigvals)

        z = rng.standard_normal((lam, d))
        y = (z * scale) @ basis.T
        x = mean + sigma * y
        x_eval = DOMAIN.clamp(x)
        errs = suite.evaluate_many(inst, x_eval) - inst.f_opt

        best = min(best, float(errs.min()))
        series.append(best)

        rank_vals = errs + np.sum((x - x_eval) ** 2, axis=-1)
        order = np.argsort(rank_vals, kind="stable")[:mu]
        zbar = w @ z[order]
        ybar = (zbar * scale) @ basis.T
        mean = mean + sigma * ybar

        ps = (1.0 - cs) * ps + np.sqrt(cs * (2.0 - cs) * mueff) * (basis @ zbar)
        ps_norm = np.linalg.norm(ps)
        hsig = ps_norm / np.sqrt(1.0 - (1.0 - cs) ** (2 * (gen + 1))) / chi_n < 1.4 + 2.0 / (d + 1.0)
        pc = (1.0 - cc) * pc + hsig * np.sqrt(cc * (2.0 - cc) * mueff) * ybar

        y_sel = y[order]
        rank_mu = (y_sel * w[:, None]).T @ y_sel
        cov = (
            (1.0 - c1 - cmu) * cov
            + c1 * (np.outer(pc, pc) + (1.0 - hsig) * cc * (2.0 - cc) * cov)
            + cmu * rank_mu
        )
        cov = 0.5 * (cov + cov.T)
        sigma *= np.exp((cs / damps) * (ps_norm / chi_n - 1.0))
        sigma = float(np.clip(sigma, 1e-30, 1e30))

        if cfg.target_error is not None and best < cfg.target_error:
            break
    return series


# ---------------------------------------------------------------------------
# DE: rand/1/bin with F = 0.5, CR = 0.9; generation 1 evaluates the seeded
# initial population.

DE_F = 0.5
DE_CR = 0.9


def _distinct_rows(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """k random indices per row, distinct from each other and the row index."""
    out = np.empty((n, k), dtype=int)
    base = np.arange(n)
    for j in range(k):
        cand = rng.integers(0, n, size=n)
        while True:
            clash = cand == base
            for prev in range(j):
                clash |= cand == out[:, prev]
            if not clash.any():
                break
            cand[clash] = rng.integers(0, n, size=int(clash.sum()))
        out[:, j] = cand
    return out


def _run_de(inst: ProblemInstance, cfg: SolverConfig, rng: np.random.Generator) -> list[float]:
    d = inst.dimension
    npop = cfg.population
    x = DOMAIN.sample(rng, npop, d)
    errs = suite.evaluate_many(inst, x) - inst.f_opt

    series = [float(errs.min())]
    generations = cfg.max_evaluations // npop
    for _ in range(1, generations):
        if cfg.target_error is not None and series[-1] < cfg.target_error:
            break
        r = _distinct_rows(rng, npop, 3)
        mutant = x[r[:, 0]] + DE_F * (x[r[:, 1]] - x[r[:, 2]])
        cross = rng.random((npop, d)) < DE_CR
        cross[np.arange(npop), rng.integers(0, d, size=npop)] = True
        trial = DOMAIN.clamp(np.where(cross, mutant, x))
        trial_errs = suite.evaluate_many(inst, trial) - inst.f_opt
        accept = trial_errs <= errs
        x[accept] = trial[accept]
        errs[accept] = trial_errs[accept]
        series.append(min(series[-1], float(errs.min())))
    return series


# ---------------------------------------------------------------------------
# PSO: global-best topology with constriction-style coefficients.

PSO_INERTIA = 0.729
PSO_COGNITIVE = 1.49445
PSO_SOCIAL = 1.49445


def _run_pso(inst: ProblemInstance, cfg: SolverConfig, rng: np.random.Generator) -> list[float]:
    d = inst.dimension
    npop = cfg.population
    x = DOMAIN.sample(rng, npop, d)
    vel = np.zeros((npop, d))
    errs = suite.evaluate_many(inst, x) - inst.f_opt

    pbest = x.copy()
    pbest_errs = errs.copy()
    g = int(np.argmin(errs))
    gbest = x[g].copy()
    gbest_err = float(errs[g])

    series = [gbest_err]
    generations = cfg.max_evaluations // npop
    for _ in range(1, generations):
        if cfg.target_error is not None and series[-1] < cfg.target_error:
            break
        r1 = rng.random((npop, d))
        r2 = rng.random((npop, d))
        vel = (
            PSO_INERTIA * vel
            + PSO_COGNITIVE * r1 * (pbest - x)
            + PSO_SOCIAL * r2 * (gbest - x)
        )
        x = DOMAIN.clamp(x + vel)
        errs = suite.evaluate_many(inst, x) - inst.f_opt

        improved = errs < pbest_errs
        pbest[improved] = x[improved]
        pbest_errs[improved] = errs[improved]
        g = int(np.argmin(pbest_errs))
        if pbest_errs[g] < gbest_err:
            gbest = pbest[g].copy()
            gbest_err = float(pbest_errs[g])
        series.append(gbest_err)
    return series
