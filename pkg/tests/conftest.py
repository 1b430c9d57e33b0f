import numpy as np
import pytest

from lqoaaa.barycentric import LqoInterpolant


def random_interpolant(rng, n, box=3.0):
    support = box * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
    weights = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    h1 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return LqoInterpolant(support, weights, h1, (G + G.T) / 2)


def conj_grid(lo=-1.0, hi=2.0, n=30):
    w = 1j * np.logspace(lo, hi, n)
    return np.concatenate([w, w.conj()])


@pytest.fixture
def rng():
    return np.random.default_rng(20201015)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
