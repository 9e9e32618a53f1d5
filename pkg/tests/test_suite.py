from __future__ import annotations

import numpy as np
import pytest

from aspipe import suite


def test_same_key_yields_bitwise_identical_instances():
    a = suite.generate_instance(1, 1, 10)
    b = suite.generate_instance(1, 1, 10)
    assert np.array_equal(a.x_opt, b.x_opt)
    assert a.f_opt == b.f_opt
    assert np.array_equal(a.rotation, b.rotation)


@pytest.mark.parametrize("fid", suite.registered_functions())
@pytest.mark.parametrize("seed", [1, 2, 5])
def test_optimum_consistency(fid, seed):
    inst = suite.generate_instance(fid, seed, 10)
    assert abs(inst.evaluate(inst.x_opt) - inst.f_opt) < 1e-10


@pytest.mark.parametrize("fid", suite.registered_functions())
def test_error_nonnegative_inside_box(fid):
    inst = suite.generate_instance(fid, 2, 10)
    rng = np.random.default_rng(42)
    xs = rng.uniform(suite.LOWER, suite.UPPER, size=(100, 10))
    assert np.all(inst.error_many(xs) >= 0.0)


@pytest.mark.parametrize("fid", suite.registered_functions())
def test_rotation_orthogonal(fid):
    inst = suite.generate_instance(fid, 3, 10)
    r = inst.rotation
    assert np.max(np.abs(r.T @ r - np.eye(10))) < suite.ORTHOGONALITY_TOL


def test_rastrigin_perturbation_has_positive_error():
    inst = suite.generate_instance(3, 3, 10)
    x = inst.x_opt.copy()
    x[0] += 0.5
    assert inst.error(x) > 0.0


def test_registry_contains_reference_easy_functions():
    reg = suite.registered_functions()
    for fid in (1, 5, 6):
        assert fid in reg
    assert len(reg) >= 12


def _plain_sphere(d: int = 10) -> suite.ProblemInstance:
    return suite.ProblemInstance(
        function=1,
        instance_seed=1,
        dimension=d,
        x_opt=np.zeros(d),
        f_opt=0.0,
        rotation=np.eye(d),
    )


def test_sphere_unit_vector():
    inst = _plain_sphere()
    e1 = np.zeros(10)
    e1[0] = 1.0
    assert inst.evaluate(e1) == 1.0
    assert inst.evaluate(np.zeros(10)) == 0.0


def test_linear_slope_monotone_along_slope_direction():
    inst = suite.generate_instance(5, 1, 10)
    # walk from the opposite corner to the optimum; error must not increase
    ts = np.linspace(-1.0, 1.0, 101)
    errors = [inst.error(t * inst.x_opt) for t in ts]
    diffs = np.diff(errors)
    assert np.all(diffs <= 1e-12)
    assert errors[-1] == pytest.approx(0.0, abs=1e-10)


def test_unknown_function_rejected():
    with pytest.raises(suite.UnknownFunctionError):
        suite.generate_instance(99, 1, 10)


def test_bad_dimension_and_seed_rejected():
    with pytest.raises(suite.SuiteError):
        suite.generate_instance(1, 1, 1)
    with pytest.raises(suite.SuiteError):
        suite.generate_instance(1, 0, 10)


def test_dimension_mismatch_rejected():
    inst = suite.generate_instance(1, 1, 10)
    with pytest.raises(suite.DimensionMismatchError):
        inst.evaluate(np.zeros(9))


def test_descriptor_round_trip():
    inst = suite.generate_instance(17, 4, 10)
    again = suite.instance_from_descriptor(inst.descriptor())
    assert again.function == inst.function
    assert again.instance_seed == inst.instance_seed
    assert again.f_opt == inst.f_opt
    assert np.array_equal(again.x_opt, inst.x_opt)
    assert np.array_equal(again.rotation, inst.rotation)
