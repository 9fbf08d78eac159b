import numpy as np
import pytest

from gdcov.cndf import make_cndf

# one admissible parameterization per family
FAMILY_SPECS = [
    "euclidean",
    "stable:alpha=0.7",
    "stable:alpha=1.6",
    "minkowski:p=1",
    "minkowski:p=1.5",
    "gauss_cp",
    "fractional:lambda=0.8",
    "variance_gamma",
    "meixner",
    "mixed_stable:alpha=0.5,beta=1.5",
    "relativistic:alpha=1.2,beta=0.9",
    "quadratic",
]


def dims_for(spec, dims=(1, 2, 5)):
    c = make_cndf(spec)
    return [1] if c.dim == 1 else list(dims)


@pytest.fixture
def rng():
    return np.random.default_rng(20181009)


_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and rep.when == "call":
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance.append((item.name, rep.outcome, title))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, title in _acceptance:
        flag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{flag}  {name}: {title}")
