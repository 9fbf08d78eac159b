"""Independence tests built on the sample statistic.

``quadform_test`` compares ``T = N vn2 / (an bn)`` with the chi-squared(1)
tail.  Under independence ``T`` converges to a weighted sum of squared
standard normals with weights summing to one, so the chi-squared(1) tail
over-states the p-value: the test is conservative.

``permutation_test`` reuses the centered matrices and relabels ``B``; each
replicate draws its permutation from the stream keyed on ``(seed, b)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import rng
from .cndf import Cndf
from .errors import DegenerateSampleError, InputError
from .estimator import _pair, _trace_fast, _trace_form, centered_matrices, summarize

_MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class TestResult:
    statistic: float
    pvalue: float
    method: str
    replicates: int
    seed: int | None
    vn2: float
    conservative: bool

    __test__ = False  # keep pytest from collecting this class

    def as_dict(self) -> dict:
        return asdict(self)


def chi2_sf(t: float) -> float:
    """``P(chi2_1 > t) = erfc(sqrt(t / 2))``."""
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise InputError(f"chi2_sf needs a finite t >= 0, got {t}")
    return math.erfc(math.sqrt(0.5 * t))


def quadform_test(sx, sy, cx: Cndf, cy: Cndf) -> TestResult:
    s = summarize(sx, sy, cx, cy)
    if not s.an * s.bn > 0.0:
        raise DegenerateSampleError("a sample is constant (an * bn = 0); the test is undefined")
    return TestResult(
        statistic=s.t,
        pvalue=chi2_sf(s.t),
        method="chi2_quadform",
        replicates=0,
        seed=None,
        vn2=s.vn2,
        conservative=True,
    )


def replicate_permutation(seed: int, b: int, n: int) -> np.ndarray:
    return rng.stream(seed, b).permutation(n)


def permutation_test(sx, sy, cx: Cndf, cy: Cndf, replicates: int = 999,
                     seed: int = 0) -> TestResult:
    """Permutation test with p-value ``(1 + #{V_b >= V_obs}) / (B + 1)``."""
    if int(replicates) != replicates or replicates < 1:
        raise InputError("replicates must be an integer >= 1")
    if int(seed) != seed or not 0 <= seed <= _MAX_SEED:
        raise InputError("seed must be an unsigned 64-bit integer")
    seed = int(seed)
    x, y = _pair(sx, sy)
    A, B = centered_matrices(x, y, cx, cy)
    n = A.shape[0]
    # observed and permuted values share one summation path so ties compare exactly
    observed = _trace_fast(A, B)
    exceed = 0
    for b in range(1, replicates + 1):
        p = replicate_permutation(seed, b, n)
        if _trace_fast(A, B[np.ix_(p, p)]) >= observed:
            exceed += 1
    vn2 = _trace_form(A, B)
    return TestResult(
        statistic=vn2,
        pvalue=(1 + exceed) / (replicates + 1),
        method="permutation",
        replicates=int(replicates),
        seed=seed,
        vn2=vn2,
        conservative=False,
    )

