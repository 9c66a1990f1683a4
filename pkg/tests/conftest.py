import numpy as np
import pytest
from scipy.linalg import expm

from spincover.indefinite_group import Signature, metric

CONCRETE = [(2, 1), (2, 2), (3, 2), (4, 1)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_lie(sig, rng, scale=1.0):
    """Random element of so(p, q): A with A^T J + J A = 0."""
    sig = Signature.coerce(sig)
    J = metric(sig)
    S = rng.normal(scale=scale, size=(sig.n, sig.n))
    S = S - S.T
    return S @ J


def random_so_plus(sig, rng, scale=1.0):
    return expm(random_lie(sig, rng, scale))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
