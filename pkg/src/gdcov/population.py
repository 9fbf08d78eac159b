"""Population-level reference values.

Scenario samplers draw i.i.d. pairs ``(X, Y)`` from counter-based streams.
``mc_population_dcov`` estimates V^2(X, Y) with the unbiased four-pair summand

    phi(X1-X4) psi(Y1-Y4) - 2 phi(X1-X2) psi(Y1-Y3) + phi(X1-X2) psi(Y3-Y4)

which needs only the two marginal cndfs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .cndf import Cndf
from .errors import InputError

# batches drawn per counter-stream chunk; fixed so results never depend on tuning
_CHUNK = 50_000

SCENARIOS = ("independent", "bivariate_normal", "identity", "square")


@dataclass(frozen=True)
class ScenarioSampler:
    """Deterministic generator of i.i.d. ``(X, Y)`` pairs.

    ``independent``: X ~ N(0, I_m), Y ~ N(0, I_n) independent.
    ``bivariate_normal``: standard normals with correlation ``rho``.
    ``identity``: Y = X, X ~ N(0, I_m).
    ``square``: Y = X**2 (componentwise), X ~ N(0, I_m).
    """

    kind: str = "independent"
    m: int = 1
    n: int = 1
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in SCENARIOS:
            raise InputError(f"unknown scenario {self.kind!r}")
        if self.m < 1 or self.n < 1:
            raise InputError("dimensions must be positive")
        if self.kind == "bivariate_normal":
            if not -1.0 <= self.rho <= 1.0:
                raise InputError("rho must lie in [-1, 1]")
            if self.m != 1 or self.n != 1:
                raise InputError("bivariate_normal is one-dimensional")
        if self.kind in ("identity", "square") and self.n != self.m:
            raise InputError(f"{self.kind} needs n == m")

    def draw(self, size: int, seed: int, index: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """``size`` pairs from stream ``(seed, index)``; arrays of shape (size, m), (size, n)."""
        g = rng.stream(seed, index)
        if self.kind == "independent":
            z = rng.box_muller(g, (size, self.m + self.n))
            return z[:, : self.m], z[:, self.m :]
        x = rng.box_muller(g, (size, self.m))
        if self.kind == "identity":
            return x, x.copy()
        if self.kind == "square":
            return x, x**2
        e = rng.box_muller(g, (size, 1))
        return x, self.rho * x + math.sqrt(1.0 - self.rho**2) * e


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    std_error: float
    batches: int


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    n = values.shape[0]
    mean = math.fsum(values) / n
    var = math.fsum((values - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def _chunks(batches: int):
    for c, lo in enumerate(range(0, batches, _CHUNK)):
        yield c, min(_CHUNK, batches - lo)


def mc_population_dcov(g: ScenarioSampler, cx: Cndf, cy: Cndf, batches: int,
                       seed: int = 0) -> MCEstimate:
    if batches < 100:
        raise InputError("mc_population_dcov needs batches >= 100")
    cx.check_dim(g.m)
    cy.check_dim(g.n)
    out = []
    for c, size in _chunks(batches):
        x, y = g.draw(4 * size, seed, c)
        x = x.reshape(4, size, g.m)
        y = y.reshape(4, size, g.n)
        p14 = cx(x[0] - x[3])
        p12 = cx(x[0] - x[1])
        out.append(
            p14 * cy(y[0] - y[3])
            - 2.0 * p12 * cy(y[0] - y[2])
            + p12 * cy(y[2] - y[3])
        )
    mean, se = _mean_se(np.concatenate(out))
    return MCEstimate(mean, se, batches)


def mc_expected_difference(g: ScenarioSampler, c: Cndf, side: str, batches: int,
                           seed: int = 0) -> MCEstimate:
    """Monte-Carlo ``E c(X - X')`` (``side='x'``) or ``E c(Y - Y')`` (``side='y'``)."""
    if side not in ("x", "y"):
        raise InputError("side must be 'x' or 'y'")
    if batches < 100:
        raise InputError("batches must be >= 100")
    out = []
    for k, size in _chunks(batches):
        x, y = g.draw(2 * size, seed, k)
        z = x if side == "x" else y
        z = z.reshape(2, size, -1)
        out.append(c(z[0] - z[1]))
    mean, se = _mean_se(np.concatenate(out))
    return MCEstimate(mean, se, batches)


def bivariate_normal_R(rho: float) -> float:
    """Distance correlation of standard bivariate normals (cndfs ``|x|``, ``|y|``)."""
    rho = float(rho)
    if not abs(rho) <= 1.0:
        raise InputError("rho must lie in [-1, 1]")
    num = (
        math.sqrt(1.0 - rho * rho)
        - math.sqrt(4.0 - rho * rho)
        + rho * (math.asin(rho) - math.asin(rho / 2.0))
        + 1.0
    )
    den = 1.0 - math.sqrt(3.0) + math.pi / 3.0
    # rounding can push the numerator a hair below 0 near rho = 0
    return min(1.0, math.sqrt(max(num, 0.0) / den))


def null_mean_nvn2(n: int, e_phi: float, e_psi: float) -> float:
    """Exact ``E[N vn2]`` for independent X, Y: ``(N-1)/N * E phi(X-X') * E psi(Y-Y')``."""
    if n < 2:
        raise InputError("n must be >= 2")
    if not (math.isfinite(e_phi) and math.isfinite(e_psi)):
        raise InputError("expectations must be finite")
    return (n - 1) / n * e_phi * e_psi
