import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcmc_se import BenchmarkConfig, bias_experiment, build_var, hadamard, run_benchmark, simulate_var, stationary_v
from mcmc_se.errors import HadamardConstructionError, NonstationaryError
from mcmc_se.var_bench import CSV_COLUMNS, _rng, simulate_parallel, var_model


@pytest.mark.parametrize("order", [1, 2, 4, 8, 12, 16, 20, 24, 32, 44, 48, 64])
def test_hadamard_orthogonal_exact(order):
    h = hadamard(order)
    assert h.dtype.kind == "i"
    assert set(np.unique(h)) <= {-1, 1}
    assert np.array_equal(h @ h.T, order * np.eye(order, dtype=np.int64))


@pytest.mark.parametrize("order", [0, 3, 6, 10])
def test_hadamard_unsupported(order):
    with pytest.raises(HadamardConstructionError):
        hadamard(order)


def test_build_var_structure():
    m = build_var(12, 1.01)
    np.testing.assert_allclose(m.phi @ m.omega, (m.phi @ m.omega).T, atol=1e-10)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(m.phi)), np.sort(1.01 ** -np.arange(1, 13.0)), rtol=1e-12)
    resid = m.v - m.phi @ m.v @ m.phi.T - m.omega
    assert np.linalg.norm(resid) <= 1e-8 * np.linalg.norm(m.v)
    assert np.all(np.linalg.eigvalsh(m.sigma_true) > 0)
    assert np.all(build_var(4, float("inf")).phi == 0)
    with pytest.raises(NonstationaryError):
        build_var(4, 1.0)


@pytest.mark.parametrize("phi", [0.0, 0.5, -0.3, 0.9])
def test_scalar_truth_matches_ar1(phi):
    m = var_model([[phi]], [[1.0]])
    assert m.v[0, 0] == pytest.approx(1 / (1 - phi**2), rel=1e-12)
    assert m.sigma_true[0, 0] == pytest.approx(1 / (1 - phi) ** 2, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_lyapunov_residual_random_stable(d, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d))
    phi = a / (np.max(np.abs(np.linalg.eigvals(a))) * rng.uniform(1.05, 3))
    b = rng.standard_normal((d, d))
    omega = b @ b.T + np.eye(d)
    v = stationary_v(phi, omega)
    assert np.linalg.norm(v - phi @ v @ phi.T - omega) <= 1e-8 * np.linalg.norm(v)


def test_nonstationary_rejected():
    with pytest.raises(NonstationaryError):
        stationary_v([[1.0]], [[1.0]])


def test_fast_simulation_matches_recursion():
    m = build_var(4, 1.2)
    got = simulate_var(m, 300, seed=(5, 6)).samples
    rng = _rng((5, 6))
    x = np.linalg.cholesky(m.v) @ rng.standard_normal(4)
    eps = rng.standard_normal((300, 4))
    ref = np.empty((300, 4))
    for t in range(300):
        x = m.phi @ x + eps[t]
        ref[t] = x
    np.testing.assert_allclose(got, ref, rtol=1e-9, atol=1e-9)


def test_simulation_deterministic_and_distinct():
    m = build_var(4, 1.1)
    a = simulate_var(m, 100, seed=(1, 2)).samples
    assert np.array_equal(a, simulate_var(m, 100, seed=(1, 2)).samples)
    assert not np.array_equal(a, simulate_var(m, 100, seed=(1, 3)).samples)
    mc = simulate_parallel(m, 50, 3, seed=(1, 2))
    assert mc.M == 3 and not np.array_equal(mc.chains[0].samples, mc.chains[1].samples)


def test_stationary_start_variance():
    m = build_var(2, 2.0)
    first = np.array([simulate_var(m, 2, seed=(9, r)).samples[0] for r in range(4000)])
    # X_1 = Phi X_0 + eps has the stationary law as well
    np.testing.assert_allclose(np.cov(first.T), m.v, atol=0.1)


def test_benchmark_report_and_determinism():
    cfg = dict(d=4, rho=1.1, n_grid=(400, 800), reps=3, methods=("bm", "cc-ise", "mise", "sve"), seed=3)
    a = run_benchmark(BenchmarkConfig(**cfg))
    b = run_benchmark(BenchmarkConfig(**cfg))
    assert a.to_csv(timing=False) == b.to_csv(timing=False)
    assert a.to_json(timing=False) == b.to_json(timing=False)
    lines = a.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 4 * 2 * 3
    for r in a.rows:
        assert np.isfinite(r["rel_frobenius"]) and r["ess_per_n"] >= 0 and r["trunc"] >= 0
    summary = json.loads(a.to_json())
    assert summary["methods"]["cc-ise"]["800"]["reps"] == 3
    assert set(summary["methods"]["bm"]["400"]["rel_frobenius"]) == {"mean", "sd", "q05", "q25", "median", "q75", "q95"}


def test_benchmark_method_reps_and_parallel():
    rep = run_benchmark(d=4, rho=1.1, n_grid=(300,), reps=4, methods=("gcc-ise", "stan-cc", "mise"), M=2, method_reps={"mise": 2}, seed=1)
    assert len(rep.select("mise")) == 2 and len(rep.select("stan-cc")) == 4


def test_benchmark_worker_count_does_not_change_rows(monkeypatch):
    cfg = dict(d=4, rho=1.1, n_grid=(300,), reps=2, methods=("bm",), seed=8)
    one = run_benchmark(**cfg, workers=1).to_csv(timing=False)
    monkeypatch.setenv("MCMC_SE_THREADS", "2")
    assert run_benchmark(**cfg).to_csv(timing=False) == one


def test_benchmark_validation():
    with pytest.raises(ValueError):
        run_benchmark(methods=("stan-cc",), M=1, reps=1, n_grid=(100,), d=2)
    with pytest.raises(ValueError):
        run_benchmark(methods=("nope",), reps=1, n_grid=(100,), d=2)


def test_bias_iid_regime_near_zero():
    rows = bias_experiment(d=4, rho_grid=(float("inf"),), n=5000, reps=20, seed=2)
    r = rows[0]
    assert abs(r["cov_rel_bias"]) < 0.05 and abs(r["corr_rel_bias"]) < 0.05
    assert set(r) == {"rho", "cov_rel_bias", "corr_rel_bias", "cov_rel_det", "corr_rel_det"}


def test_bias_deterministic():
    kw = dict(d=4, rho_grid=(1.1,), n=1000, reps=3, seed=4)
    assert bias_experiment(**kw) == bias_experiment(**kw)
