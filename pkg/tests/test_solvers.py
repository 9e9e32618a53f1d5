from __future__ import annotations

import numpy as np
import pytest

from aspipe import solvers, suite
from aspipe.suite import DOMAIN


@pytest.fixture(scope="module")
def sphere():
    return suite.generate_instance(1, 1, 10)


@pytest.fixture(scope="module")
def rastrigin():
    return suite.generate_instance(3, 2, 10)


def test_config_validation():
    with pytest.raises(solvers.SolverError):
        solvers.SolverConfig("newton", 1, 1000)
    with pytest.raises(solvers.SolverError):
        solvers.SolverConfig("de", 1, 100)  # not a multiple of 30
    with pytest.raises(solvers.EmptyRunError):
        solvers.SolverConfig("pso", 1, 30)  # below one generation


@pytest.mark.parametrize("solver", solvers.SOLVER_ORDER)
def test_run_is_deterministic(solver, rastrigin):
    cfg = solvers.SolverConfig(solver, 7, solvers.POPULATION[solver] * 20)
    a = solvers.run(rastrigin, cfg)
    b = solvers.run(rastrigin, cfg)
    assert np.array_equal(a.best_so_far, b.best_so_far)
    assert a.evaluations_used == b.evaluations_used


@pytest.mark.parametrize("solver", solvers.SOLVER_ORDER)
@pytest.mark.parametrize("fid", [1, 3, 20])
def test_series_monotone_nonnegative_and_budget_exact(solver, fid):
    inst = suite.generate_instance(fid, 1, 10)
    pop = solvers.POPULATION[solver]
    rec = solvers.run(inst, solvers.SolverConfig(solver, 3, pop * 30))
    assert np.all(np.diff(rec.best_so_far) <= 0.0)
    assert np.all(rec.best_so_far >= 0.0)
    assert rec.evaluations_used == rec.generations * pop == pop * 30


@pytest.mark.parametrize("solver", ["de", "pso"])
def test_first_generation_is_initial_population_minimum(solver, rastrigin):
    pop = solvers.POPULATION[solver]
    cfg = solvers.SolverConfig(solver, 11, pop)
    rec = solvers.run(rastrigin, cfg)
    assert rec.generations == 1
    rng = solvers._rng_for(rastrigin, cfg)
    x0 = DOMAIN.sample(rng, pop, 10)
    expected = float(np.min(rastrigin.error_many(x0)))
    assert rec.best_so_far[0] == expected


def test_cma_single_generation(sphere):
    rec = solvers.run(sphere, solvers.SolverConfig("cma-es", 1, 10))
    assert rec.generations == 1
    assert rec.evaluations_used == 10


def test_de_and_pso_records_differ(rastrigin):
    de = solvers.run(rastrigin, solvers.SolverConfig("de", 5, 1200))
    pso = solvers.run(rastrigin, solvers.SolverConfig("pso", 5, 1200))
    assert de.generations != pso.generations or not np.array_equal(
        de.best_so_far[: pso.generations], pso.best_so_far[: de.generations]
    )


def test_best_at_boundaries(rastrigin):
    rec = solvers.run(rastrigin, solvers.SolverConfig("de", 1, 900))
    assert solvers.best_at(rec, rec.evaluations_used) == rec.best_so_far[-1]
    assert solvers.best_at(rec, rec.population) == rec.best_so_far[0]


def test_best_at_non_increasing(rastrigin):
    rec = solvers.run(rastrigin, solvers.SolverConfig("pso", 2, 2000))
    rng = np.random.default_rng(0)
    queries = np.sort(rng.integers(rec.population, rec.evaluations_used + 1, size=50))
    values = [solvers.best_at(rec, int(q)) for q in queries]
    assert np.all(np.diff(values) <= 0.0)


def test_best_at_errors(rastrigin):
    rec = solvers.run(rastrigin, solvers.SolverConfig("de", 1, 300))
    with pytest.raises(solvers.OutOfHorizonError):
        solvers.best_at(rec, 301)
    with pytest.raises(solvers.SolverError):
        solvers.best_at(rec, 10)


@pytest.mark.parametrize("solver", solvers.SOLVER_ORDER)
def test_longer_horizon_reproduces_prefix(solver, rastrigin):
    pop = solvers.POPULATION[solver]
    short = solvers.run(rastrigin, solvers.SolverConfig(solver, 9, pop * 15))
    long = solvers.extend_run(rastrigin, short, pop * 40)
    assert long.generations == 40
    assert np.array_equal(long.best_so_far[:15], short.best_so_far)


def test_extend_run_noop_when_horizon_sufficient(rastrigin):
    rec = solvers.run(rastrigin, solvers.SolverConfig("de", 1, 600))
    assert solvers.extend_run(rastrigin, rec, 300) is rec


def test_early_termination_stops_at_generation_granularity(sphere):
    cfg = solvers.SolverConfig("cma-es", 1, 4000, target_error=1e-7)
    rec = solvers.run(sphere, cfg)
    assert rec.final_error < 1e-7
    assert rec.evaluations_used < 4000
    # every earlier generation was still above the target
    assert np.all(rec.best_so_far[:-1] >= 1e-7)


def test_cma_solves_sphere_within_curtailed_budget(sphere):
    # spot check; the 100-seed version lives in the acceptance suite
    for seed in (1, 2, 3):
        rec = solvers.run(sphere, solvers.SolverConfig("cma-es", seed, 2700))
        assert rec.final_error < 1e-7
