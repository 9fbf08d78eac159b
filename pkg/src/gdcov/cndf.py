"""Real-valued continuous negative definite functions (cndfs).

A cndf ``theta`` on R^d satisfies ``theta(0) = 0``, ``theta(-x) = theta(x) >= 0``
and the matrix ``(-theta(x_i - x_j))`` is conditionally positive definite for
every finite point set.  The families below are evaluated in closed form;
no Levy measure is ever integrated.

Spec strings follow a flat grammar::

    euclidean | stable:alpha=A | minkowski:p=P | gauss_cp | fractional:lambda=L
    | variance_gamma | meixner | mixed_stable:alpha=A,beta=B
    | relativistic:alpha=A,beta=B | quadratic
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DimensionError, InputError, NumericalError, ParameterError


def _open_0_2(v: float) -> bool:
    return 0.0 < v < 2.0


# family -> (parameter names, dimension constraint)
FAMILIES: dict[str, tuple[tuple[str, ...], int | None]] = {
    "euclidean": ((), None),
    "stable": (("alpha",), None),
    "minkowski": (("p",), None),
    "gauss_cp": ((), None),
    "fractional": (("lambda",), None),
    "variance_gamma": ((), 1),
    "meixner": ((), 1),
    "mixed_stable": (("alpha", "beta"), None),
    "relativistic": (("alpha", "beta"), None),
    "quadratic": ((), None),
}


@dataclass(frozen=True)
class CndfSpec:
    family: str
    params: dict[str, float] = field(default_factory=dict)
    dim_constraint: int | None = None

    def __str__(self) -> str:
        if not self.params:
            return self.family
        body = ",".join(f"{k}={self.params[k]!r}" for k in FAMILIES[self.family][0])
        return f"{self.family}:{body}"


def validate_spec(spec: CndfSpec) -> CndfSpec:
    """Check family name, parameter names and admissible ranges."""
    if spec.family not in FAMILIES:
        raise InputError(f"unknown cndf family {spec.family!r}")
    names, dim = FAMILIES[spec.family]
    extra = set(spec.params) - set(names)
    if extra:
        raise InputError(f"unknown parameter(s) {sorted(extra)} for {spec.family}")
    missing = [k for k in names if k not in spec.params]
    if missing:
        raise InputError(f"missing parameter(s) {missing} for {spec.family}")
    p = {k: float(v) for k, v in spec.params.items()}
    for k, v in p.items():
        if not math.isfinite(v):
            raise ParameterError(f"{spec.family}: {k} must be finite")

    fam = spec.family
    if fam == "stable" and not _open_0_2(p["alpha"]):
        raise ParameterError(f"stable: alpha={p['alpha']} outside (0, 2)")
    if fam == "minkowski" and not 1.0 <= p["p"] <= 2.0:
        # p > 2 in d >= 2 is never negative definite
        raise ParameterError(f"minkowski: p={p['p']} outside [1, 2]")
    if fam == "fractional" and not p["lambda"] > 0.0:
        raise ParameterError(f"fractional: lambda={p['lambda']} must be > 0")
    if fam == "mixed_stable":
        for k in ("alpha", "beta"):
            if not _open_0_2(p[k]):
                raise ParameterError(f"mixed_stable: {k}={p[k]} outside (0, 2)")
    if fam == "relativistic":
        if not _open_0_2(p["alpha"]):
            raise ParameterError(f"relativistic: alpha={p['alpha']} outside (0, 2)")
        if not p["beta"] >= p["alpha"] / 2.0:
            raise ParameterError("relativistic: requires beta >= alpha/2")

    if spec.dim_constraint is not None:
        if spec.dim_constraint < 1:
            raise ParameterError("dim_constraint must be a positive integer")
        if dim is not None and spec.dim_constraint != dim:
            raise DimensionError(f"{fam} is only defined for d = {dim}")
    return CndfSpec(fam, p, dim if dim is not None else spec.dim_constraint)


def parse_cndf_spec(s: str) -> CndfSpec:
    """Parse ``family`` or ``family:key=value[,key=value]``."""
    s = s.strip()
    family, sep, rest = s.partition(":")
    family = family.strip()
    params: dict[str, float] = {}
    if sep:
        if not rest.strip():
            raise InputError(f"malformed cndf spec {s!r}")
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or not key:
                raise InputError(f"malformed parameter {item!r} in {s!r}")
            if key in params:
                raise InputError(f"duplicate parameter {key!r} in {s!r}")
            try:
                params[key] = float(value)
            except ValueError:
                raise InputError(f"parameter {key!r} is not a number: {value!r}") from None
    return validate_spec(CndfSpec(family, params))


def _norm(z: np.ndarray) -> np.ndarray:
    if z.shape[-1] == 1:
        return np.abs(z[..., 0])
    return np.sqrt(np.sum(z * z, axis=-1))


def _meixner(z: np.ndarray) -> np.ndarray:
    t = np.abs(z[..., 0])
    # ln cosh t without overflow
    return t + np.log1p(np.exp(-2.0 * t)) - math.log(2.0)


def _kernel(spec: CndfSpec) -> Callable[[np.ndarray], np.ndarray]:
    fam, p = spec.family, spec.params
    if fam == "euclidean":
        return _norm
    if fam == "stable":
        a = p["alpha"]
        return lambda z: _norm(z) ** a
    if fam == "minkowski":
        q = p["p"]
        if q == 1.0:
            return lambda z: np.sum(np.abs(z), axis=-1)
        if q == 2.0:
            return _norm
        return lambda z: np.sum(np.abs(z) ** q, axis=-1) ** (1.0 / q)
    if fam == "gauss_cp":
        return lambda z: -np.expm1(-0.5 * np.sum(z * z, axis=-1))
    if fam == "fractional":
        lam2 = p["lambda"] ** 2
        def frac(z):
            r2 = np.sum(z * z, axis=-1)
            return r2 / (lam2 + r2)
        return frac
    if fam == "variance_gamma":
        return lambda z: np.log1p(0.5 * z[..., 0] ** 2)
    if fam == "meixner":
        return _meixner
    if fam == "mixed_stable":
        a, b = p["alpha"], p["beta"]
        def mixed(z):
            r = _norm(z)
            return r**a + r**b
        return mixed
    if fam == "relativistic":
        a, b = p["alpha"], p["beta"]
        return lambda z: np.expm1(np.log1p(_norm(z) ** a) / b)
    if fam == "quadratic":
        # |x|^2 = <x, Qx>/2 with Q = 2I; no Levy part
        return lambda z: np.sum(z * z, axis=-1)
    raise InputError(f"unknown cndf family {fam!r}")  # pragma: no cover


@dataclass(frozen=True)
class Cndf:
    """Evaluator for a validated :class:`CndfSpec`.

    Calling the object maps an array of shape ``(..., d)`` to ``(...)``.
    """

    spec: CndfSpec
    bounded: bool
    homogeneity_degree: float | None
    characterizes_independence: bool
    rotation_invariant: bool
    _fn: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    @property
    def dim(self) -> int | None:
        return self.spec.dim_constraint

    def check_dim(self, d: int) -> None:
        if self.dim is not None and d != self.dim:
            raise DimensionError(f"{self.spec.family} requires d = {self.dim}, got d = {d}")

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.ndim == 0:
            z = z.reshape(1)
        self.check_dim(z.shape[-1])
        return self._fn(z)

    def __str__(self) -> str:
        return str(self.spec)


def make_cndf(spec: CndfSpec | str) -> Cndf:
    if isinstance(spec, str):
        spec = parse_cndf_spec(spec)
    else:
        spec = validate_spec(spec)
    fam, p = spec.family, spec.params
    degree = {
        "euclidean": 1.0,
        "minkowski": 1.0,
        "quadratic": 2.0,
        "stable": p.get("alpha"),
    }.get(fam)
    if fam == "minkowski":
        # Levy measure of l_1 sits on the coordinate axes
        full_support = p["p"] > 1.0
    else:
        full_support = fam != "quadratic"
    return Cndf(
        spec=spec,
        bounded=fam in ("gauss_cp", "fractional"),
        homogeneity_degree=degree,
        characterizes_independence=full_support,
        rotation_invariant=not (fam == "minkowski" and p["p"] != 2.0),
        _fn=_kernel(spec),
    )


def evaluate(c: Cndf, x) -> float:
    """Value of ``c`` at a single point ``x`` (scalar or length-d vector)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        raise DimensionError("evaluate expects a single point")
    if not np.all(np.isfinite(x)):
        raise InputError("non-finite coordinate")
    if not np.any(x):
        c.check_dim(x.shape[0])
        return 0.0
    return float(c(x))


Kernel = Union[Cndf, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class NDReport:
    min_centered_eigenvalue: float
    scale: float
    threshold: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "min_centered_eigenvalue": self.min_centered_eigenvalue,
            "scale": self.scale,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def nd_check(c: Kernel, points, tol: float = 1e-8) -> NDReport:
    """Numerical certificate of negative definiteness on a point set.

    Builds ``a_ij = c(x_i - x_j)`` and takes the spectrum of ``C(-a)C`` with
    ``C = I - 11^T/N``.  On the sum-zero subspace this is ``-a`` itself; the
    remaining eigenvalue is exactly 0.  Passes when the smallest eigenvalue
    is at least ``-tol * max(|eig|)`` (scale floored at 1e-12).

    ``c`` may be any callable on difference arrays of shape ``(..., d)``,
    which lets non-cndf kernels be used as negative controls.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if n < 2:
        raise InputError("nd_check needs at least 2 points")
    if not tol > 0:
        raise ParameterError("tol must be positive")
    if not np.all(np.isfinite(x)):
        raise InputError("non-finite coordinate")
    with np.errstate(over="ignore", invalid="ignore"):
        a = np.asarray(c(x[:, None, :] - x[None, :, :]), dtype=float)
    if not np.all(np.isfinite(a)):
        raise NumericalError("kernel overflowed on the point differences")
    m = -a
    m = m - m.mean(axis=0, keepdims=True)
    m = m - m.mean(axis=1, keepdims=True)
    m = 0.5 * (m + m.T)
    eig = np.linalg.eigvalsh(m)
    scale = max(float(np.max(np.abs(eig))), 1e-12)
    threshold = -tol * scale
    lo = float(eig[0])
    return NDReport(lo, scale, threshold, lo >= threshold)
