"""Covariance-correlation estimators: ISE marginals combined with batch-means correlations.

``Sigma_cc = L R L`` where ``L`` holds ISE-family marginal standard deviations
and ``R`` is the (globally-centered) batch-means correlation matrix.  The
module also wraps the comparator estimators into :class:`CovEstimate` so
that every method can be run through :func:`estimate`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .batch_spectral import (
    BatchConfig,
    batch_config,
    batch_means_cov,
    corr_from_cov,
    default_bandwidth,
    default_batch_size,
    gbm_cov,
    spectral_variance,
)
from .chain_data import Chain, MultiChain, as_multichain
from .errors import InsufficientChainsError
from .ise import DiagonalSD, g_ise_diagonal, ise_diagonal, stan_ise_diagonal
from .mise import mise

__all__ = [
    "CovEstimate",
    "METHODS",
    "PARALLEL_METHODS",
    "assemble",
    "cc_ise",
    "gcc_ise",
    "stan_cc",
    "estimate",
]

METHODS = ("cc-ise", "gcc-ise", "stan-cc", "mise", "bm", "sve", "gbm")
PARALLEL_METHODS = ("gcc-ise", "stan-cc", "gbm")


@dataclass(frozen=True, eq=False)
class CovEstimate:
    """A symmetric ``d x d`` estimate of the asymptotic covariance plus diagnostics."""

    sigma: np.ndarray
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return self.sigma.shape[0]


def assemble(sds, corr, variances=None) -> np.ndarray:
    """``diag(sds) @ corr @ diag(sds)``, symmetrized.

    The diagonal is ``variances`` when given (so ISE variances survive the
    square-root round trip exactly), else ``sds**2``.
    """
    sds = np.asarray(sds, dtype=float)
    out = sds[:, None] * np.asarray(corr, dtype=float) * sds[None, :]
    out = (out + out.T) / 2
    if variances is not None:
        np.fill_diagonal(out, variances)
    return out


def _resolve(cfg, n):
    if cfg is None:
        return default_batch_size(n)
    if isinstance(cfg, BatchConfig):
        cfg.check(n)
        return cfg
    return batch_config(n, int(cfg))


def _cc(L: DiagonalSD, cov, cfg, method, timings, start):
    t = time.perf_counter()
    pair = corr_from_cov(cov)
    timings["corr"] = time.perf_counter() - t
    t = time.perf_counter()
    sigma = assemble(L.sds, pair.corr, [r.sigma2 for r in L.results])
    timings["assemble"] = time.perf_counter() - t
    diagnostics = {
        "k_n": L.k_n,
        "b_n": cfg.b_n,
        "a_n": cfg.a_n,
        "dropped": cfg.dropped,
        "stage_seconds": timings,
        "wall_clock": time.perf_counter() - start,
    }
    return CovEstimate(sigma, method, diagnostics)


def cc_ise(chain: Chain, cfg: BatchConfig | int | None = None) -> CovEstimate:
    """CC-ISE: ``L_ISE R_BM L_ISE``.

    Both factors are computed on the same retained window of ``a_n * b_n``
    samples.  ``cfg`` may be a :class:`BatchConfig`, a batch size, or ``None``
    for ``floor(n^{1/3})``.
    """
    start = time.perf_counter()
    chain = chain if isinstance(chain, Chain) else Chain(chain)
    cfg = _resolve(cfg, chain.n)
    window = chain.head(cfg.retained)
    timings = {}
    t = time.perf_counter()
    cov = batch_means_cov(window, cfg)
    timings["bm"] = time.perf_counter() - t
    t = time.perf_counter()
    L = ise_diagonal(window)
    timings["L"] = time.perf_counter() - t
    return _cc(L, cov, cfg, "cc-ise", timings, start)


def gcc_ise(mc: MultiChain, cfg: BatchConfig | int | None = None) -> CovEstimate:
    """GCC-ISE: ``L_G-ISE R_G-BM L_G-ISE`` for parallel chains (``M = 1`` allowed)."""
    start = time.perf_counter()
    mc = as_multichain(mc)
    cfg = _resolve(cfg, mc.n)
    window = mc.head(cfg.retained)
    timings = {}
    t = time.perf_counter()
    cov = gbm_cov(window, cfg)
    timings["bm"] = time.perf_counter() - t
    t = time.perf_counter()
    L = g_ise_diagonal(window)
    timings["L"] = time.perf_counter() - t
    return _cc(L, cov, cfg, "gcc-ise", timings, start)


def stan_cc(mc: MultiChain, cfg: BatchConfig | int | None = None) -> CovEstimate:
    """STAN-CC: ``L_STAN-ISE R_G-BM L_STAN-ISE``; needs ``M >= 2``."""
    start = time.perf_counter()
    mc = as_multichain(mc)
    if mc.M < 2:
        raise InsufficientChainsError(f"STAN-CC needs M >= 2 chains, got {mc.M}")
    cfg = _resolve(cfg, mc.n)
    window = mc.head(cfg.retained)
    timings = {}
    t = time.perf_counter()
    cov = gbm_cov(window, cfg)
    timings["bm"] = time.perf_counter() - t
    t = time.perf_counter()
    L = stan_ise_diagonal(window)
    timings["L"] = time.perf_counter() - t
    return _cc(L, cov, cfg, "stan-cc", timings, start)


def estimate(method: str, chains, batch_size: BatchConfig | int | None = None, mise_mode: str = "sequential") -> CovEstimate:
    """Run any supported estimator by tag.

    ``chains`` is a :class:`Chain`, a :class:`MultiChain` or a list of chains.
    Single-chain methods use the first chain when given several.
    """
    mc = as_multichain(chains)
    first = mc.chains[0]
    if method == "cc-ise":
        return cc_ise(first, batch_size)
    if method == "gcc-ise":
        return gcc_ise(mc, batch_size)
    if method == "stan-cc":
        return stan_cc(mc, batch_size)

    start = time.perf_counter()
    if method == "mise":
        res = mise(first, mode=mise_mode)
        diag = {
            "t_n": res.t_n,
            "s_n": res.s_n,
            "lags_consumed": res.lags_consumed,
            "budget_exhausted": res.budget_exhausted,
            "mode": mise_mode,
        }
        sigma = res.sigma
    elif method == "bm":
        cfg = _resolve(batch_size, first.n)
        sigma = batch_means_cov(first, cfg)
        diag = {"b_n": cfg.b_n, "a_n": cfg.a_n, "dropped": cfg.dropped}
    elif method == "gbm":
        cfg = _resolve(batch_size, mc.n)
        sigma = gbm_cov(mc, cfg)
        diag = {"b_n": cfg.b_n, "a_n": cfg.a_n, "dropped": cfg.dropped, "M": mc.M}
    elif method == "sve":
        bw = default_bandwidth(first.n) if batch_size is None else int(getattr(batch_size, "b_n", batch_size))
        sigma = spectral_variance(first, bw)
        diag = {"bandwidth": bw}
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    diag["wall_clock"] = time.perf_counter() - start
    return CovEstimate(sigma, method, diag)
