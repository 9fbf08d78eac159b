import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gdcov.cndf import (
    FAMILIES, CndfSpec, evaluate, make_cndf, nd_check, parse_cndf_spec,
)
from gdcov.errors import DimensionError, InputError, ParameterError

from conftest import FAMILY_SPECS, dims_for

coords = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def test_stable_metadata():
    c = make_cndf(CndfSpec("stable", {"alpha": 1.0}))
    assert c.homogeneity_degree == 1.0
    assert c.characterizes_independence


@pytest.mark.parametrize("spec", ["stable:alpha=2.5", "stable:alpha=0", "minkowski:p=3",
                                  "minkowski:p=0.5", "fractional:lambda=0",
                                  "mixed_stable:alpha=1,beta=2", "relativistic:alpha=1,beta=0.4"])
def test_out_of_range(spec):
    with pytest.raises(ParameterError):
        make_cndf(spec)


def test_full_support_flags():
    assert not make_cndf("minkowski:p=1").characterizes_independence
    assert make_cndf("minkowski:p=1.2").characterizes_independence
    assert not make_cndf("quadratic").characterizes_independence
    for fam in ("euclidean", "gauss_cp", "variance_gamma", "meixner"):
        assert make_cndf(fam).characterizes_independence


def test_bounded_flags():
    bounded = {s for s in FAMILY_SPECS if make_cndf(s).bounded}
    assert bounded == {"gauss_cp", "fractional:lambda=0.8"}


@pytest.mark.parametrize("spec, x, expected", [
    ("euclidean", [3, 4], 5.0),
    ("minkowski:p=1", [1, -2, 3], 6.0),
    ("variance_gamma", [math.sqrt(2)], math.log(2)),
    ("gauss_cp", [0.0], 0.0),
    ("stable:alpha=0.5", [4.0], 2.0),
    ("quadratic", [1.0, 2.0], 5.0),
    ("meixner", [1.0], math.log(math.cosh(1.0))),
    ("fractional:lambda=2", [2.0], 0.5),
    ("relativistic:alpha=1,beta=0.5", [1.0], 3.0),
    ("mixed_stable:alpha=1,beta=0.5", [4.0], 6.0),
])
def test_eval_values(spec, x, expected):
    assert evaluate(make_cndf(spec), x) == pytest.approx(expected, rel=1e-14, abs=0)


def test_meixner_large_argument_is_finite():
    c = make_cndf("meixner")
    assert evaluate(c, [1000.0]) == pytest.approx(1000.0 - math.log(2.0), rel=1e-15)


def test_eval_errors():
    with pytest.raises(InputError):
        evaluate(make_cndf("euclidean"), [1.0, float("nan")])
    with pytest.raises(DimensionError):
        evaluate(make_cndf("meixner"), [1.0, 2.0])
    with pytest.raises(DimensionError):
        make_cndf(CndfSpec("variance_gamma", {}, dim_constraint=3))


@pytest.mark.parametrize("text, family, params", [
    ("stable:alpha=1.5", "stable", {"alpha": 1.5}),
    ("euclidean", "euclidean", {}),
    (" relativistic:alpha=1, beta=2 ", "relativistic", {"alpha": 1.0, "beta": 2.0}),
])
def test_parse(text, family, params):
    spec = parse_cndf_spec(text)
    assert spec.family == family and spec.params == params


@pytest.mark.parametrize("text", ["nope", "stable", "stable:", "stable:alpha", "stable:alpha=x",
                                  "stable:alpha=1,gamma=2", "stable:alpha=1,alpha=1"])
def test_parse_errors(text):
    with pytest.raises(InputError):
        parse_cndf_spec(text)


@pytest.mark.parametrize("spec", FAMILY_SPECS)
def test_spec_string_round_trip(spec):
    s = make_cndf(spec).spec
    assert parse_cndf_spec(str(s)) == s


def test_grammar_covers_all_families():
    assert {s.split(":")[0] for s in FAMILY_SPECS} == set(FAMILIES)


@pytest.mark.parametrize("spec", FAMILY_SPECS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_symmetry_and_zero(spec, data):
    c = make_cndf(spec)
    d = data.draw(st.sampled_from(dims_for(spec)))
    x = data.draw(arrays(float, d, elements=coords))
    assert evaluate(c, np.zeros(d)) == 0.0
    assert evaluate(c, x) == evaluate(c, -x)
    assert evaluate(c, x) >= 0.0


@pytest.mark.parametrize("spec", FAMILY_SPECS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_sqrt_subadditive(spec, data):
    c = make_cndf(spec)
    d = data.draw(st.sampled_from(dims_for(spec)))
    x = data.draw(arrays(float, d, elements=coords))
    y = data.draw(arrays(float, d, elements=coords))
    lhs = math.sqrt(evaluate(c, x + y))
    rhs = math.sqrt(evaluate(c, x)) + math.sqrt(evaluate(c, y))
    assert lhs <= rhs * (1 + 1e-12) + 1e-300


def _sup_on_unit_ball(c, d, rng):
    if d == 1:
        grid = np.linspace(-1, 1, 20001)[:, None]
    else:
        u = rng.standard_normal((20000, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        r = rng.uniform(size=(20000, 1)) ** (1.0 / d)
        diag = np.ones((1, d)) / math.sqrt(d)
        grid = np.vstack([u, u * r, diag])
    return float(np.max(c(grid)))


@pytest.mark.parametrize("spec", FAMILY_SPECS)
def test_quadratic_growth_bound(spec, rng):
    c = make_cndf(spec)
    for d in dims_for(spec):
        sup = _sup_on_unit_ball(c, d, rng)
        x = rng.standard_normal((2000, d)) * np.logspace(-3, 4, 2000)[:, None]
        r2 = np.sum(x * x, axis=1)
        assert np.all(c(x) <= 2 * sup * (1 + r2))


@settings(max_examples=100, deadline=None)
@given(alpha=st.floats(0.05, 1.95), s=st.floats(1e-3, 1e3),
       x=arrays(float, 3, elements=st.floats(-10, 10)))
def test_stable_homogeneity(alpha, s, x):
    c = make_cndf(CndfSpec("stable", {"alpha": alpha}))
    base = evaluate(c, x)
    assert evaluate(c, s * x) == pytest.approx(s**alpha * base, rel=1e-12, abs=1e-300)


def test_nd_check_euclidean_pass(rng):
    r = nd_check(make_cndf("euclidean"), rng.standard_normal((20, 3)), tol=1e-8)
    assert r.passed


def test_nd_check_needs_two_points():
    with pytest.raises(InputError):
        nd_check(make_cndf("euclidean"), np.zeros((1, 2)))


def test_nd_check_negative_control():
    # C |x_i - x_j| C on {0, 1, 2} has exact spectrum {-2, -2/3, 0} (sympy)
    r = nd_check(lambda z: -np.abs(z[..., 0]), np.array([0.0, 1.0, 2.0]), tol=1e-8)
    assert not r.passed
    assert r.min_centered_eigenvalue == pytest.approx(-2.0, rel=1e-12)


@pytest.mark.parametrize("spec", FAMILY_SPECS)
def test_nd_check_every_family(spec, rng):
    c = make_cndf(spec)
    for d in dims_for(spec):
        for _ in range(100):
            pts = rng.standard_normal((20, d)) * rng.choice([0.1, 1.0, 10.0])
            assert nd_check(c, pts).passed
