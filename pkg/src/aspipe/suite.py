"""Benchmark problem suite: smooth base functions plus seeded instance transforms.

Each registered function id maps to a base function with a known global
optimum. An instance is generated deterministically from
(function id, instance seed, dimension): the optimum location, optimum
value and (for non-separable functions) an orthogonal rotation are drawn
from a seeded generator. Fitness is reported raw; ``error = f(x) - f_opt``
is the quantity all downstream modules work with.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

LOWER = -5.0
UPPER = 5.0

ORTHOGONALITY_TOL = 1e-10


class SuiteError(ValueError):
    """Base error for suite misuse."""


class UnknownFunctionError(SuiteError):
    """Function id is not in the registry."""


class DimensionMismatchError(SuiteError):
    """Point dimension does not match the instance dimension."""


@dataclass(frozen=True)
class SearchDomain:
    """Box constraint applied per coordinate."""

    lower: float = LOWER
    upper: float = UPPER

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def sample(self, rng: np.random.Generator, n: int, d: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(n, d))


DOMAIN = SearchDomain()


@dataclass(frozen=True)
class FunctionSpec:
    """Registry entry: base function plus instance-generation policy."""

    fid: int
    name: str
    rotated: bool
    evaluator: Callable[["ProblemInstance", np.ndarray], np.ndarray]
    # optimum placement: "uniform" in [-4,4]^d, "corner" at +-5, "signed"
    # at +-2.10484... (fixed magnitude, random signs)
    optimum_style: str = "uniform"


@dataclass(frozen=True)
class ProblemInstance:
    """A concrete transformed function: immutable and safe to share."""

    function: int
    instance_seed: int
    dimension: int
    x_opt: np.ndarray
    f_opt: float
    rotation: np.ndarray
    aux: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return _REGISTRY[self.function].name

    def evaluate(self, x: np.ndarray) -> float:
        return evaluate(self, x)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return evaluate_many(self, xs)

    def error(self, x: np.ndarray) -> float:
        return evaluate(self, x) - self.f_opt

    def error_many(self, xs: np.ndarray) -> np.ndarray:
        return evaluate_many(self, xs) - self.f_opt

    def descriptor(self) -> str:
        """Line record; x_opt and rotation are regenerated from the seed."""
        return f"{self.function}\t{self.instance_seed}\t{self.dimension}\t{self.f_opt!r}"


def instance_from_descriptor(line: str) -> ProblemInstance:
    fid_s, seed_s, d_s, fopt_s = line.rstrip("\n").split("\t")
    inst = generate_instance(int(fid_s), int(seed_s), int(d_s))
    if float(fopt_s) != inst.f_opt:
        raise SuiteError(f"descriptor f_opt {fopt_s} does not match regenerated instance")
    return inst


# ---------------------------------------------------------------------------
# coordinate transforms shared by several functions

def _t_osz(x: np.ndarray) -> np.ndarray:
    """Oscillation warp: sign-preserving, fixes 0."""
    xhat = np.where(x == 0.0, 0.0, np.log(np.abs(np.where(x == 0.0, 1.0, x))))
    c1 = np.where(x > 0.0, 10.0, 5.5)
    c2 = np.where(x > 0.0, 7.9, 3.1)
    return np.sign(x) * np.exp(xhat + 0.049 * (np.sin(c1 * xhat) + np.sin(c2 * xhat)))


def _t_asy(x: np.ndarray, beta: float) -> np.ndarray:
    """Asymmetry warp applied to positive coordinates only."""
    d = x.shape[-1]
    idx = np.arange(d) / max(d - 1, 1)
    expo = 1.0 + beta * idx * np.sqrt(np.maximum(x, 0.0))
    return np.where(x > 0.0, np.power(np.maximum(x, 0.0), expo), x)


def _lambda_alpha(alpha: float, d: int) -> np.ndarray:
    """Diagonal conditioning scales alpha**(0.5 * i / (d-1))."""
    return np.power(alpha, 0.5 * np.arange(d) / max(d - 1, 1))


def _f_pen(x: np.ndarray) -> np.ndarray:
    out = np.maximum(0.0, np.abs(x) - UPPER)
    return np.sum(out * out, axis=-1)


# ---------------------------------------------------------------------------
# base functions; xs has shape (n, d), returns raw fitness of shape (n,)

def _eval_sphere(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    z = xs - inst.x_opt
    return np.sum(z * z, axis=-1) + inst.f_opt


def _eval_ellipsoid(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    d = inst.dimension
    z = _t_osz(xs - inst.x_opt)
    scales = np.power(10.0, 6.0 * np.arange(d) / max(d - 1, 1))
    return np.sum(scales * z * z, axis=-1) + inst.f_opt


def _eval_rastrigin(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    d = inst.dimension
    z = _t_asy(_t_osz(xs - inst.x_opt), 0.2) * _lambda_alpha(10.0, d)
    return (
        10.0 * (d - np.sum(np.cos(2.0 * np.pi * z), axis=-1))
        + np.sum(z * z, axis=-1)
        + inst.f_opt
    )


def _eval_linear_slope(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    # optimum sits on the domain corner; coordinates past it plateau
    s = inst.aux["slope"]
    z = np.where(xs * inst.x_opt < 25.0, xs, inst.x_opt)
    return np.sum(5.0 * np.abs(s) - s * z, axis=-1) + inst.f_opt


def _eval_attractive_sector(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    # asymmetry factor kept mild so a generalist solver can close the
    # final precision gap within the curtailed budget
    z = (xs - inst.x_opt) @ inst.rotation.T
    s = np.where(z * inst.x_opt > 0.0, 3.0, 1.0)
    return np.power(_t_osz(np.sum((s * z) ** 2, axis=-1)), 0.9) + inst.f_opt


def _eval_rosenbrock(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    c = max(1.0, np.sqrt(inst.dimension) / 8.0)
    z = c * (xs - inst.x_opt) + 1.0
    head, tail = z[..., :-1], z[..., 1:]
    return (
        np.sum(100.0 * (head**2 - tail) ** 2 + (head - 1.0) ** 2, axis=-1)
        + inst.f_opt
    )


def _eval_bent_cigar(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    z = _t_asy((xs - inst.x_opt) @ inst.rotation.T, 0.5) @ inst.rotation.T
    return z[..., 0] ** 2 + 1e6 * np.sum(z[..., 1:] ** 2, axis=-1) + inst.f_opt


def _eval_sharp_ridge(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    d = inst.dimension
    z = (xs - inst.x_opt) @ inst.rotation.T * _lambda_alpha(10.0, d)
    return z[..., 0] ** 2 + 100.0 * np.sqrt(np.sum(z[..., 1:] ** 2, axis=-1)) + inst.f_opt


def _eval_different_powers(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    d = inst.dimension
    z = (xs - inst.x_opt) @ inst.rotation.T
    expo = 2.0 + 4.0 * np.arange(d) / max(d - 1, 1)
    return np.sqrt(np.sum(np.power(np.abs(z), expo), axis=-1)) + inst.f_opt


def _eval_schaffers_f7(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    d = inst.dimension
    z = _t_asy((xs - inst.x_opt) @ inst.rotation.T, 0.5) * _lambda_alpha(10.0, d)
    s = z[..., :-1] ** 2 + z[..., 1:] ** 2
    core = np.mean(s**0.25 * (np.sin(50.0 * s**0.1) ** 2 + 1.0), axis=-1) ** 2
    return core + 10.0 * _f_pen(xs) + inst.f_opt


def _eval_schwefel(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    signs = inst.aux["signs"]
    two_abs_opt = 2.0 * np.abs(inst.x_opt)
    y = 2.0 * signs * xs
    y = y.copy()
    y[..., 1:] = y[..., 1:] + 0.25 * (y[..., :-1] - two_abs_opt[:-1])
    scales = _lambda_alpha(100.0, inst.dimension)
    y = 100.0 * (scales * (y - two_abs_opt) + two_abs_opt)
    outside = np.maximum(0.0, np.abs(y) - 500.0)
    pen = 0.01 * np.sum(outside * outside, axis=-1)
    core = 0.01 * (418.9828872724339 - np.mean(y * np.sin(np.sqrt(np.abs(y))), axis=-1))
    return core + pen + inst.f_opt


def _eval_gallagher(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    locs = inst.aux["peak_locations"]      # (k, d) in rotated space
    scales = inst.aux["peak_scales"]       # (k, d) inverse covariance diagonals
    values = inst.aux["peak_values"]       # (k,)
    d = inst.dimension
    z = xs @ inst.rotation.T
    diff = z[..., None, :] - locs          # (n, k, d)
    quad = np.sum(scales * diff * diff, axis=-1)
    peaks = values * np.exp(-0.5 / d * quad)
    core = _t_osz(10.0 - np.max(peaks, axis=-1)) ** 2
    return core + _f_pen(xs) + inst.f_opt


GALLAGHER_PEAKS = 101

_REGISTRY: dict[int, FunctionSpec] = {}


def _register(spec: FunctionSpec) -> None:
    _REGISTRY[spec.fid] = spec


_register(FunctionSpec(1, "sphere", False, _eval_sphere))
_register(FunctionSpec(2, "ellipsoid", False, _eval_ellipsoid))
_register(FunctionSpec(3, "rastrigin", False, _eval_rastrigin))
_register(FunctionSpec(5, "linear_slope", False, _eval_linear_slope, optimum_style="corner"))
_register(FunctionSpec(6, "attractive_sector", True, _eval_attractive_sector))
_register(FunctionSpec(8, "rosenbrock", False, _eval_rosenbrock))
_register(FunctionSpec(12, "bent_cigar", True, _eval_bent_cigar))
_register(FunctionSpec(13, "sharp_ridge", True, _eval_sharp_ridge))
_register(FunctionSpec(14, "different_powers", True, _eval_different_powers))
_register(FunctionSpec(17, "schaffers_f7", True, _eval_schaffers_f7))
_register(FunctionSpec(20, "schwefel", False, _eval_schwefel, optimum_style="signed"))
_register(FunctionSpec(21, "gallagher", True, _eval_gallagher))

EASY_REFERENCE_FUNCTIONS = (1, 5, 6)


def registered_functions() -> list[int]:
    """All registered function ids, ascending."""
    return sorted(_REGISTRY)


def function_name(fid: int) -> str:
    _require_registered(fid)
    return _REGISTRY[fid].name


def _require_registered(fid: int) -> None:
    if fid not in _REGISTRY:
        raise UnknownFunctionError(f"unknown function id {fid}")


def _random_rotation(rng: np.random.Generator, d: int) -> np.ndarray:
    """Orthogonal matrix from QR of a Gaussian draw, sign-fixed."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def generate_instance(function: int, instance_seed: int, d: int) -> ProblemInstance:
    """Deterministically expand (function, seed, d) into a problem instance."""
    _require_registered(function)
    if d < 2:
        raise SuiteError(f"dimension must be >= 2, got {d}")
    if instance_seed < 1:
        raise SuiteError(f"instance_seed must be >= 1, got {instance_seed}")
    spec = _REGISTRY[function]
    rng = np.random.default_rng(np.random.SeedSequence([function, instance_seed, d]))

    if spec.optimum_style == "corner":
        x_opt = UPPER * np.sign(rng.uniform(-1.0, 1.0, size=d))
        x_opt[x_opt == 0.0] = UPPER
    elif spec.optimum_style == "signed":
        x_opt = 0.5 * 4.2096874633 * np.sign(rng.uniform(-1.0, 1.0, size=d))
        x_opt[x_opt == 0.0] = 0.5 * 4.2096874633
    else:
        x_opt = rng.uniform(-4.0, 4.0, size=d)
    f_opt = float(rng.uniform(-100.0, 100.0))
    rotation = _random_rotation(rng, d) if spec.rotated else np.eye(d)

    aux: dict = {}
    if function == 5:
        signs = np.sign(x_opt)
        aux["slope"] = signs * np.power(10.0, np.arange(d) / max(d - 1, 1))
    elif function == 20:
        aux["signs"] = np.sign(x_opt)
    elif function == 21:
        k = GALLAGHER_PEAKS
        conds = np.power(1000.0, np.linspace(0.0, 1.0, k - 1))
        conds = np.concatenate(([np.sqrt(1000.0)], rng.permutation(conds)))
        scales = np.empty((k, d))
        for i, c in enumerate(conds):
            s = np.power(c, np.linspace(-0.5, 0.5, d))
            scales[i] = rng.permutation(s)
        centers = rng.uniform(-4.9, 4.9, size=(k, d))
        centers[0] = x_opt
        aux["peak_locations"] = centers @ rotation.T
        aux["peak_scales"] = scales
        aux["peak_values"] = np.concatenate(([10.0], np.linspace(1.1, 9.1, k - 1)))

    for arr in (x_opt, rotation, *[v for v in aux.values() if isinstance(v, np.ndarray)]):
        arr.setflags(write=False)
    return ProblemInstance(
        function=function,
        instance_seed=instance_seed,
        dimension=d,
        x_opt=x_opt,
        f_opt=f_opt,
        rotation=rotation,
        aux=aux,
    )


def evaluate_many(inst: ProblemInstance, xs: np.ndarray) -> np.ndarray:
    """Raw fitness for a batch of points of shape (n, d)."""
    xs = np.asarray(xs, dtype=float)
    if xs.shape[-1] != inst.dimension:
        raise DimensionMismatchError(
            f"expected dimension {inst.dimension}, got {xs.shape[-1]}"
        )
    return _REGISTRY[inst.function].evaluator(inst, xs)


def evaluate(inst: ProblemInstance, x: np.ndarray) -> float:
    """Raw fitness of a single point."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatchError(f"expected a single point, got shape {x.shape}")
    return float(evaluate_many(inst, x[None, :])[0])
