"""Gaussian fields with cndf covariance at sample points.

The field ``G`` has ``E G(x) G(x') = phi(x) + phi(x') - phi(x - x')``.  With
independent fields ``G`` (on the x sample) and ``H`` (on the y sample) and the
sample mean standing in for ``E(G(Z) | G)``, the per-realization value

    (1/N^2) sum_ij g_i g_j h_i h_j,   g = G(x) - mean, h = H(y) - mean

has expectation exactly ``vn2``: double centering kills the additive
``phi(x_i) + phi(x_j)`` part of the kernel and leaves ``-A``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .cndf import Cndf
from .errors import InputError, NumericalError
from .estimator import _pair, as_sample, pairwise_matrix

_PSD_TOL = 1e-8
_JITTER_START = 1e-10
_JITTER_STEP = 100.0
_JITTER_ATTEMPTS = 3


@dataclass(frozen=True)
class FieldKernel:
    K: np.ndarray
    points: np.ndarray

    @property
    def n(self) -> int:
        return self.K.shape[0]


def field_kernel(c: Cndf, s) -> FieldKernel:
    x = as_sample(s)
    c.check_dim(x.shape[1])
    a = pairwise_matrix(c, x)  # raises on overflow before phi is used
    with np.errstate(over="ignore"):
        phi = c(x)
    if not np.all(np.isfinite(phi)):
        raise NumericalError(f"{c.spec} overflowed on the sample points")
    K = phi[:, None] + phi[None, :] - a
    K = 0.5 * (K + K.T)
    np.fill_diagonal(K, 2.0 * phi)
    eig = np.linalg.eigvalsh(K)
    scale = float(np.max(np.abs(eig))) if eig.size else 0.0
    if eig[0] < -_PSD_TOL * max(scale, 1e-300):
        raise NumericalError(f"field kernel is not PSD (min eigenvalue {eig[0]:.3e})")
    return FieldKernel(K, x)


def factor(k: FieldKernel) -> np.ndarray:
    """Lower factor ``L`` with ``L L^T ~= K``; escalating diagonal jitter on failure."""
    K = k.K
    n = k.n
    tr = float(np.trace(K))
    if tr == 0.0:
        return np.zeros_like(K)
    try:
        return np.linalg.cholesky(K)
    except np.linalg.LinAlgError:
        pass
    eps = _JITTER_START * tr / n
    for _ in range(_JITTER_ATTEMPTS):
        try:
            return np.linalg.cholesky(K + eps * np.eye(n))
        except np.linalg.LinAlgError:
            eps *= _JITTER_STEP
    raise NumericalError("field kernel factorization failed after jitter escalation")


def sample_field(k: FieldKernel, seed: int, index: int = 0, size: int | None = None) -> np.ndarray:
    """Mean-zero Gaussian draw(s) with covariance ``K``.

    Returns a length-N vector, or ``(size, N)`` when ``size`` is given.
    """
    L = factor(k)
    z = rng.box_muller(rng.stream(seed, index), (1 if size is None else size, k.n))
    g = z @ L.T
    return g[0] if size is None else g


@dataclass(frozen=True)
class GaussCovEstimate:
    g2_estimate: float
    std_error: float
    realizations: int


def realization_values(gx: np.ndarray, hy: np.ndarray) -> np.ndarray:
    """Per-realization ``(1/N^2) (sum_i g~_i h~_i)^2`` for rows of ``gx``, ``hy``."""
    n = gx.shape[1]
    gc = gx - gx.mean(axis=1, keepdims=True)
    hc = hy - hy.mean(axis=1, keepdims=True)
    return np.einsum("mi,mi->m", gc, hc) ** 2 / n**2


def gaussian_cov_mc(sx, sy, cx: Cndf, cy: Cndf, realizations: int, seed: int = 0,
                    independent_fields: bool = True) -> GaussCovEstimate:
    """Monte-Carlo Gaussian covariance at the sample points.

    ``independent_fields=False`` drives both fields from one normal stream;
    that breaks the independence the identity relies on and exists only to
    demonstrate the failure.
    """
    if realizations < 100:
        raise InputError("gaussian_cov_mc needs realizations >= 100")
    x, y = _pair(sx, sy)
    kx, ky = field_kernel(cx, x), field_kernel(cy, y)
    gx = sample_field(kx, seed, 0, size=realizations)
    hy = sample_field(ky, seed, 1 if independent_fields else 0, size=realizations)
    v = realization_values(gx, hy)
    mean = math.fsum(v) / realizations
    var = math.fsum((v - mean) ** 2) / (realizations - 1)
    return GaussCovEstimate(mean, math.sqrt(var / realizations), realizations)


def field_expectation(sx, sy, cx: Cndf, cy: Cndf) -> float:
    """Exact field average of the per-realization value.

    ``E (sum_i g~_i h~_i)^2 = sum_ij (C Kx C)_ij (C Ky C)_ij`` for independent
    fields, computed from the kernels themselves rather than from ``a``, ``b``.
    """
    x, y = _pair(sx, sy)
    n = x.shape[0]
    Kx, Ky = field_kernel(cx, x).K, field_kernel(cy, y).K
    C = np.eye(n) - np.full((n, n), 1.0 / n)
    return math.fsum(np.sum((C @ Kx @ C) * (C @ Ky @ C), axis=1)) / n**2
