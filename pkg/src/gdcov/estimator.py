"""Sample generalized distance covariance.

For samples ``x`` (N x m) and ``y`` (N x n) and cndfs ``phi``, ``psi`` let
``a_kl = phi(x_k - x_l)``, ``b_kl = psi(y_k - y_l)`` and let ``A``, ``B`` be
their double centerings.  The V-statistic

    vn2 = (1/N^2) sum_kl A_kl B_kl

is computed three ways (``trace``, ``triple_sum``, ``quad_sum``) so the matrix
form can be checked against the raw sum forms.

The moment conditions needed for inference (finite ``E phi(X) + E psi(Y)``)
concern the population, not the sample; the statistic itself is always
computed.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .cndf import Cndf
from .errors import DimensionError, InputError, NumericalError

# rows x N elements handled per block in the O(N^2)-memory-free passes
_BLOCK_ELEMENTS = 1 << 22
# above this N the full N x N matrices are never materialized
_DENSE_MAX_N = 2048


def as_sample(data, name: str = "sample") -> np.ndarray:
    """Validate and return an ``N x d`` float array (1-d input becomes ``N x 1``)."""
    s = np.asarray(data, dtype=float)
    if s.ndim == 1:
        s = s[:, None]
    if s.ndim != 2:
        raise InputError(f"{name} must be a 1-d or 2-d array")
    if s.shape[0] < 2:
        raise InputError(f"{name} needs N >= 2 observations")
    if not np.all(np.isfinite(s)):
        raise InputError(f"{name} contains non-finite values")
    return s


def _pair(sx, sy) -> tuple[np.ndarray, np.ndarray]:
    x = as_sample(sx, "x sample")
    y = as_sample(sy, "y sample")
    if x.shape[0] != y.shape[0]:
        raise DimensionError(f"sample sizes differ: {x.shape[0]} != {y.shape[0]}")
    return x, y


def _block_rows(n: int) -> int:
    return max(1, min(n, _BLOCK_ELEMENTS // max(n, 1)))


def _pairwise_rows(c: Cndf, s: np.ndarray, lo: int, hi: int) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        blk = c(s[lo:hi, None, :] - s[None, :, :])
    if not np.all(np.isfinite(blk)):
        raise NumericalError(f"{c.spec} overflowed on the sample differences")
    idx = np.arange(lo, hi)
    blk[idx - lo, idx] = 0.0
    return blk


def pairwise_matrix(c: Cndf, s) -> np.ndarray:
    """``a_kl = c(s_k - s_l)``; symmetric with zero diagonal."""
    s = as_sample(s)
    c.check_dim(s.shape[1])
    n = s.shape[0]
    step = _block_rows(n)
    return np.concatenate(
        [_pairwise_rows(c, s, lo, min(n, lo + step)) for lo in range(0, n, step)]
    )


def _exact_sum(m: np.ndarray) -> float:
    # correctly rounded, hence independent of element order
    return math.fsum(np.ravel(m).tolist())


def _exact_row_means(a: np.ndarray) -> np.ndarray:
    n = a.shape[1]
    return np.array([math.fsum(r) / n for r in a.tolist()])


def double_center(a) -> np.ndarray:
    """``a_kl - rowmean_k - colmean_l + grandmean``, i.e. ``C a C``.

    Means are correctly rounded sums, so relabeling rows and columns of ``a``
    relabels the result bit for bit.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError("double_center needs a square matrix")
    row = _exact_row_means(a)
    col = _exact_row_means(a.T)
    grand = math.fsum(row.tolist()) / a.shape[0]
    return a - row[:, None] - col[None, :] + grand


def _trace_form(A: np.ndarray, B: np.ndarray) -> float:
    n = A.shape[0]
    return _exact_sum(A * B) / n**2


def _trace_fast(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.einsum("ij,ij->", A, B)) / A.shape[0] ** 2


def _triple_form(a: np.ndarray, b: np.ndarray) -> float:
    n = a.shape[0]
    ra = np.array([math.fsum(r) for r in a.tolist()])
    rb = np.array([math.fsum(r) for r in b.tolist()])
    t1 = _exact_sum(a * b)
    t2 = math.fsum((ra * rb).tolist())
    t3 = math.fsum(ra.tolist()) * math.fsum(rb.tolist())
    return math.fsum([t1 / n**2, -2.0 * t2 / n**3, t3 / n**4])


def _quad_form(a: np.ndarray, b: np.ndarray) -> float:
    n = a.shape[0]
    parts = []
    for i in range(n):
        # [j, k, l] summand with i fixed
        s = (
            (a[i] * b[i])[None, :, None]
            - 2.0 * a[i][:, None, None] * b[i][None, None, :]
            + a[i][:, None, None] * b[None, :, :]
        )
        parts.append(np.sum(s))
    return math.fsum(parts) / n**4


METHODS = ("trace", "triple_sum", "quad_sum")


def gdcov_sq(sx, sy, cx: Cndf, cy: Cndf, method: str = "trace",
             max_quad_n: int | None = 200) -> float:
    """Squared sample generalized distance covariance.

    ``quad_sum`` is an O(N^4) oracle; it refuses ``N > max_quad_n`` unless
    ``max_quad_n`` is None.
    """
    x, y = _pair(sx, sy)
    n = x.shape[0]
    if method not in METHODS:
        raise InputError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "quad_sum" and max_quad_n is not None and n > max_quad_n:
        raise InputError(f"quad_sum is limited to N <= {max_quad_n} (got {n})")
    if method == "trace" and n > _DENSE_MAX_N:
        return _moment_stats(x, y, cx, cy)["vn2"]
    a = pairwise_matrix(cx, x)
    b = pairwise_matrix(cy, y)
    if method == "trace":
        return _trace_form(double_center(a), double_center(b))
    if method == "triple_sum":
        return _triple_form(a, b)
    return _quad_form(a, b)


@dataclass(frozen=True)
class DcovSummary:
    n: int
    vn2: float
    vnx: float
    vny: float
    an: float
    bn: float
    rn: float
    t: float

    def as_dict(self) -> dict:
        return asdict(self)


def _correlation(vn2: float, vnx: float, vny: float) -> float:
    denom = math.sqrt(vnx * vny)
    if not denom > 0.0:
        return 0.0
    return min(1.0, math.sqrt(max(vn2, 0.0) / denom))


def _statistic(n: int, vn2: float, an: float, bn: float) -> float:
    ab = an * bn
    return n * vn2 / ab if ab > 0.0 else 0.0


def _row_means(c: Cndf, s: np.ndarray) -> np.ndarray:
    n = s.shape[0]
    step = _block_rows(n)
    out = np.empty(n)
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        out[lo:hi] = _pairwise_rows(c, s, lo, hi).mean(axis=1)
    return out


def _centered_from_moments(n: int, sab: float, rab: float, sa: float, sb: float) -> float:
    # (1/N^2) sum A B expressed through raw sums, cf. the triple-sum form
    return math.fsum([sab / n**2, -2.0 * rab / n**3, sa * sb / n**4])


def _moment_stats(x, y, cx: Cndf, cy: Cndf) -> dict:
    """Single pass over row blocks of the raw matrices ``a`` and ``b``.

    Each block holds complete rows, so row sums are final once the block is
    done; the centered sums follow from the raw moments.
    """
    cx.check_dim(x.shape[1])
    cy.check_dim(y.shape[1])
    n = x.shape[0]
    step = _block_rows(n)
    ra, rb, sab, saa, sbb = [], [], [], [], []
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        a = _pairwise_rows(cx, x, lo, hi)
        b = _pairwise_rows(cy, y, lo, hi)
        ra.append(a.sum(axis=1))
        rb.append(b.sum(axis=1))
        sab.append(np.einsum("ij,ij->i", a, b))
        saa.append(np.einsum("ij,ij->i", a, a))
        sbb.append(np.einsum("ij,ij->i", b, b))
    ra, rb = np.concatenate(ra), np.concatenate(rb)
    sa, sb = math.fsum(ra), math.fsum(rb)
    return {
        "vn2": _centered_from_moments(n, math.fsum(np.concatenate(sab)), math.fsum(ra * rb), sa, sb),
        "vnx": _centered_from_moments(n, math.fsum(np.concatenate(saa)), math.fsum(ra * ra), sa, sa),
        "vny": _centered_from_moments(n, math.fsum(np.concatenate(sbb)), math.fsum(rb * rb), sb, sb),
        "an": sa / n**2,
        "bn": sb / n**2,
    }


def _blocked_stats(x, y, cx: Cndf, cy: Cndf, influence: bool = False) -> dict:
    """Two passes over row blocks: means first, then centered products.

    Memory is O(block * N).  Slower than :func:`_moment_stats` but never
    cancels large raw sums; with ``influence`` the per-row sums of
    ``A * B`` are also returned.
    """
    cx.check_dim(x.shape[1])
    cy.check_dim(y.shape[1])
    n = x.shape[0]
    ra, rb = _row_means(cx, x), _row_means(cy, y)
    ga, gb = math.fsum(ra) / n, math.fsum(rb) / n
    step = _block_rows(n)
    ab, aa, bb = [], [], []
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        A = _pairwise_rows(cx, x, lo, hi) - ra[lo:hi, None] - ra[None, :] + ga
        B = _pairwise_rows(cy, y, lo, hi) - rb[lo:hi, None] - rb[None, :] + gb
        ab.append(np.sum(A * B, axis=1))
        aa.append(np.sum(A * A, axis=1))
        bb.append(np.sum(B * B, axis=1))
    ab = np.concatenate(ab)
    out = {
        "vn2": math.fsum(ab) / n**2,
        "vnx": math.fsum(np.concatenate(aa)) / n**2,
        "vny": math.fsum(np.concatenate(bb)) / n**2,
        "an": ga,
        "bn": gb,
    }
    if influence:
        out["row_ab"] = ab
    return out


def summarize(sx, sy, cx: Cndf, cy: Cndf) -> DcovSummary:
    """All sample statistics for one pair of samples.

    ``vnx``/``vny`` are the squared sample distance variances
    ``(1/N^2) sum A_kl^2``; ``rn`` is the sample distance correlation
    (0 when a variance vanishes) and ``t = N vn2 / (an bn)`` (0 when
    ``an bn = 0``).
    """
    x, y = _pair(sx, sy)
    n = x.shape[0]
    if n > _DENSE_MAX_N:
        st = _moment_stats(x, y, cx, cy)
        vn2, vnx, vny, an, bn = st["vn2"], st["vnx"], st["vny"], st["an"], st["bn"]
    else:
        a, b = pairwise_matrix(cx, x), pairwise_matrix(cy, y)
        A, B = double_center(a), double_center(b)
        vn2 = _trace_form(A, B)
        vnx = _trace_form(A, A)
        vny = _trace_form(B, B)
        an = _exact_sum(a) / n**2
        bn = _exact_sum(b) / n**2
    return DcovSummary(
        n=n, vn2=vn2, vnx=vnx, vny=vny, an=an, bn=bn,
        rn=_correlation(vn2, vnx, vny), t=_statistic(n, vn2, an, bn),
    )


def centered_matrices(sx, sy, cx: Cndf, cy: Cndf) -> tuple[np.ndarray, np.ndarray]:
    x, y = _pair(sx, sy)
    return double_center(pairwise_matrix(cx, x)), double_center(pairwise_matrix(cy, y))


def _check_perm(perm, n: int) -> np.ndarray:
    p = np.asarray(perm)
    if p.shape != (n,) or not np.issubdtype(p.dtype, np.integer):
        raise InputError("permutation must be an integer array of length N")
    if not np.array_equal(np.sort(p), np.arange(n)):
        raise InputError("not a permutation of 0..N-1")
    return p


def permuted_vn2(A, B, perm) -> float:
    """``(1/N^2) sum_ij A_ij B_{perm[i], perm[j]}``."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError("A and B must be square matrices of the same size")
    p = _check_perm(perm, A.shape[0])
    return _trace_form(A, B[np.ix_(p, p)])


def vn2_standard_error(sx, sy, cx: Cndf, cy: Cndf) -> float:
    """Delta-method standard error of ``vn2`` for dependent data.

    Uses the empirical influence ``2 ((1/N) sum_j A_ij B_ij - vn2)`` of the
    V-statistic.  Under independence the first-order term vanishes and this
    underestimates the spread.
    """
    x, y = _pair(sx, sy)
    n = x.shape[0]
    st = _blocked_stats(x, y, cx, cy, influence=True)
    psi = 2.0 * (st["row_ab"] / n - st["vn2"])
    return math.sqrt(math.fsum(psi * psi)) / n
