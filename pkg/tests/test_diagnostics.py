import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from mcmc_se import Chain, chi2_quantile, ellipsoid_contains, ess, rel_frobenius
from mcmc_se.errors import SingularEstimateError

from conftest import var_chain


def zeta0(c):
    x = c.samples - c.samples.mean(0)
    return x.T @ x / c.n


def test_ess_examples():
    c = var_chain(1000, 3, seed=1)
    assert ess(c, zeta0(c)).ess == pytest.approx(1000, rel=1e-10)
    # scaling the matrix by 2 scales its determinant by 2^d, halving ESS
    assert ess(c, 2 * zeta0(c)).ess == pytest.approx(500, rel=1e-10)
    assert ess(c, 2**3 * zeta0(c)).ess == pytest.approx(1000 / 2**3, rel=1e-10)
    x = np.random.default_rng(0).standard_normal(1000)
    x = (x - x.mean()) / x.std()
    e = ess(Chain(x), [[4.0]])
    assert e.ess == pytest.approx(250, rel=1e-10) and e.ess_per_n == pytest.approx(0.25, rel=1e-10)


def test_ess_singular():
    with pytest.raises(SingularEstimateError):
        ess(var_chain(100, 2), np.zeros((2, 2)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ess_linear_invariance(seed):
    rng = np.random.default_rng(seed)
    c = var_chain(300, 3, seed=seed % 1000)
    a = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    sigma = zeta0(c) * 3 + np.eye(3)
    base = ess(c, sigma).ess
    moved = ess(Chain(c.samples @ a.T), a @ sigma @ a.T).ess
    assert moved == pytest.approx(base, rel=1e-6)


def test_rel_frobenius_examples():
    t = np.array([[2.0, 0.3], [0.3, 1.0]])
    assert rel_frobenius(t, t) == 0
    assert rel_frobenius(2 * t, t) == pytest.approx(1)
    assert rel_frobenius(np.diag([1.0, 2.0]), np.eye(2)) == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(ZeroDivisionError):
        rel_frobenius(t, np.zeros((2, 2)))


@pytest.mark.parametrize("dof,expect", [(1, 3.8415), (2, 5.9915), (12, 21.0261)])
def test_chi2_table(dof, expect):
    assert abs(chi2_quantile(dof, 0.95) - expect) < 1e-3


@pytest.mark.parametrize("dof", [1, 2, 3, 5, 12, 30, 100])
@pytest.mark.parametrize("p", [1e-6, 0.01, 0.5, 0.95, 0.999999])
def test_chi2_matches_scipy(dof, p):
    assert chi2_quantile(dof, p) == pytest.approx(stats.chi2.ppf(p, dof), abs=1e-8, rel=1e-10)


def test_chi2_monotone_and_range():
    ps = np.linspace(0.01, 0.99, 25)
    q = [chi2_quantile(5, p) for p in ps]
    assert all(a < b for a, b in zip(q, q[1:]))
    q = [chi2_quantile(k, 0.9) for k in range(1, 30)]
    assert all(a < b for a, b in zip(q, q[1:]))
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            chi2_quantile(3, bad)


def test_ellipsoid_examples():
    assert ellipsoid_contains([0.3, 1.0], np.eye(2), 50, [0.3, 1.0])
    assert not ellipsoid_contains([0.5], [[1.0]], 100, [0.0])
    with pytest.raises(SingularEstimateError):
        ellipsoid_contains([0.0, 0.0], np.zeros((2, 2)), 10, [1.0, 1.0])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1.0, 50.0))
def test_ellipsoid_scaling_and_permutation(seed, c):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 6))
    a = rng.standard_normal((d, d))
    sigma = a @ a.T + 0.5 * np.eye(d)
    mean = rng.standard_normal(d) * 0.2
    mu0 = np.zeros(d)
    inside = ellipsoid_contains(mean, sigma, 40, mu0)
    if inside:
        assert ellipsoid_contains(mean, c * sigma, 40, mu0)
    perm = rng.permutation(d)
    assert ellipsoid_contains(mean[perm], sigma[np.ix_(perm, perm)], 40, mu0) == inside
