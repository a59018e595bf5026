import json
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from nctbundles.intmat import Elementary, IntMatrix, Permutation, UnimodularFactorization

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

FROZEN = Path(__file__).parent / "data" / "frozen_oracles.json"


@pytest.fixture(scope="session")
def frozen() -> dict:
    return json.loads(FROZEN.read_text())


def int_matrices(rows, cols, lo=-5, hi=5):
    """Strategy for IntMatrix of a fixed or drawn shape."""
    rows = st.just(rows) if isinstance(rows, int) else rows
    cols = st.just(cols) if isinstance(cols, int) else cols
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(st.integers(lo, hi), min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0]).map(lambda d: IntMatrix.from_rows(d, rc[1])))


@st.composite
def unimodular(draw, n, max_len=8, allow_det_minus=True):
    """Random element of GL_n(Z) (or SL_n(Z)) as a product of generators."""
    factors = []
    if n >= 2:
        for _ in range(draw(st.integers(0, max_len))):
            k, l = draw(st.lists(st.integers(1, n), min_size=2, max_size=2, unique=True))
            factors.append(Elementary(k, l, draw(st.integers(-3, 3))))
        if allow_det_minus and draw(st.booleans()):
            sigma = list(range(1, n + 1))
            sigma[0], sigma[1] = sigma[1], sigma[0]
            factors.append(Permutation(tuple(sigma)))
    elif allow_det_minus and draw(st.booleans()):
        return IntMatrix.from_rows([[-1]])
    return UnimodularFactorization(n, tuple(factors)).product()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
