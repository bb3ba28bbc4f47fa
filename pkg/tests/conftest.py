"""Shared generators and comparison helpers for the test suite."""

import random
from fractions import Fraction

import pytest

from hasseschmidt import GF, QQ, HSDerivation, Series, TSeries


FIELDS = [QQ, GF(2), GF(3), GF(5)]


def random_scalar(rng, field, nonzero=False):
    if field.p is not None:
        lo = 1 if nonzero else 0
        return rng.randrange(lo, field.p)
    while True:
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
        if c or not nonzero:
            return c


def random_exponents(rng, nvars, max_degree):
    exps = []
    budget = max_degree
    for _ in range(nvars):
        e = rng.randint(0, budget)
        exps.append(e)
        budget -= e
    rng.shuffle(exps)
    return tuple(exps)


def random_series(rng, nvars, field, max_degree=3, max_terms=3, precision=None):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[random_exponents(rng, nvars, max_degree)] = random_scalar(rng, field)
    return Series(nvars, field, terms, precision)


def random_hsd(rng, nvars, length, field, max_degree=2, max_terms=2):
    """A random Hasse-Schmidt derivation: variable images X_j plus random
    exact polynomial t-coefficients."""
    images = []
    for j in range(nvars):
        coeffs = [Series.variable(nvars, field, j)]
        for _ in range(length):
            coeffs.append(random_series(rng, nvars, field, max_degree, max_terms))
        images.append(TSeries(coeffs))
    return HSDerivation(images)


def assert_agree_to_trusted(a, b, msg=""):
    from hasseschmidt.series import min_prec

    p = min_prec(a.precision, b.precision)
    assert a.truncate(p) == b.truncate(p), msg or f"{a} != {b} at precision {p}"


@pytest.fixture
def rng():
    return random.Random(20260810)


# -- acceptance summary ----------------------------------------------------

_ACCEPTANCE_RESULTS = {}


def record_acceptance(name, passed, detail=""):
    _ACCEPTANCE_RESULTS[name] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        passed, detail = _ACCEPTANCE_RESULTS[name]
        status = "PASS" if passed else "FAIL"
        line = f"{name}: {status}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
