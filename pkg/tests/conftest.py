import numpy as np
import pytest
from scipy.signal import lfilter

from mcmc_se import Chain


def ar1(n, phi, seed=0, d=1):
    """Stationary Gaussian AR(1) chain with unit innovations, independent coordinates."""
    rng = np.random.default_rng(seed)
    e = rng.standard_normal((n, d))
    x0 = rng.standard_normal(d) / np.sqrt(1 - phi * phi)
    x = lfilter([1.0], [1.0, -phi], e, axis=0, zi=(phi * x0)[None, :])[0]
    return Chain(x)


def var_chain(n, d, seed=0, phi=0.6):
    """Correlated reversible VAR(1)-like chain for generic tests."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d))
    mix = np.linalg.qr(a)[0]
    x = ar1(n, phi, seed + 1000, d).samples @ mix.T
    return Chain(x + rng.standard_normal(d))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE = {}


def record(number, passed, detail):
    """Store one acceptance-criterion outcome for the end-of-run summary."""
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
