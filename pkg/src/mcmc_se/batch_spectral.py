"""Batch-means and Bartlett spectral-variance estimators of the asymptotic covariance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autocov import autocov_fft
from .chain_data import Chain, MultiChain, as_multichain, chain_mean, global_mean
from .errors import (
    ChainTooShortError,
    DegenerateVarianceError,
    InsufficientBatchesError,
    LagRangeError,
)

__all__ = [
    "BatchConfig",
    "CovCorrPair",
    "icbrt",
    "default_batch_size",
    "batch_config",
    "batch_means",
    "batch_means_cov",
    "gbm_cov",
    "corr_from_cov",
    "spectral_variance",
    "default_bandwidth",
]


@dataclass(frozen=True)
class BatchConfig:
    """``a_n`` non-overlapping batches of ``b_n`` samples; ``dropped`` trailing samples unused."""

    b_n: int
    a_n: int
    dropped: int = 0

    @property
    def retained(self) -> int:
        return self.a_n * self.b_n

    def check(self, n: int) -> None:
        if self.a_n < 2:
            raise InsufficientBatchesError(f"need at least 2 batches, got a_n = {self.a_n}")
        if self.b_n < 1 or self.retained > n:
            raise InsufficientBatchesError(
                f"batch layout a_n={self.a_n}, b_n={self.b_n} does not fit n={n}"
            )


@dataclass(frozen=True, eq=False)
class CovCorrPair:
    """A covariance matrix split as ``diag(sd) @ corr @ diag(sd)``."""

    cov: np.ndarray
    corr: np.ndarray
    sd: np.ndarray

    def reassemble(self) -> np.ndarray:
        out = self.sd[:, None] * self.corr * self.sd[None, :]
        np.fill_diagonal(out, np.diag(self.cov))
        return out


def icbrt(n: int) -> int:
    """``floor(n ** (1/3))`` computed exactly for integers."""
    b = int(round(n ** (1.0 / 3.0)))
    while b**3 > n:
        b -= 1
    while (b + 1) ** 3 <= n:
        b += 1
    return b


def batch_config(n: int, b_n: int) -> BatchConfig:
    """Largest layout of batches of size ``b_n`` fitting in ``n`` samples."""
    b_n = int(b_n)
    if b_n < 1:
        raise InsufficientBatchesError(f"batch size must be positive, got {b_n}")
    a_n = n // b_n
    cfg = BatchConfig(b_n=b_n, a_n=a_n, dropped=n - a_n * b_n)
    cfg.check(n)
    return cfg


def default_batch_size(n: int) -> BatchConfig:
    """``b_n = floor(n^{1/3})``, ``a_n = floor(n / b_n)``.

    >>> default_batch_size(1005)
    BatchConfig(b_n=10, a_n=100, dropped=5)
    """
    if n < 8:
        raise ChainTooShortError(f"default batch size needs n >= 8, got {n}")
    return batch_config(n, icbrt(n))


def batch_means(samples: np.ndarray, cfg: BatchConfig) -> np.ndarray:
    """``(a_n, d)`` array of batch mean vectors over the first ``a_n * b_n`` rows."""
    x = samples[: cfg.retained]
    return x.reshape(cfg.a_n, cfg.b_n, x.shape[1]).mean(axis=1)


def _pooled_batch_cov(means, center, b_n):
    dev = means - center
    return b_n / (means.shape[0] - 1) * (dev.T @ dev)


def batch_means_cov(chain: Chain, cfg: BatchConfig | None = None) -> np.ndarray:
    """Multivariate batch-means estimator.

    Trailing samples beyond ``a_n * b_n`` are dropped and the centering mean is
    taken over the retained samples only.
    """
    chain = chain if isinstance(chain, Chain) else Chain(chain)
    cfg = cfg or default_batch_size(chain.n)
    cfg.check(chain.n)
    retained = chain.head(cfg.retained)
    return _pooled_batch_cov(batch_means(retained.samples, cfg), chain_mean(retained), cfg.b_n)


def gbm_cov(mc: MultiChain, cfg: BatchConfig | None = None) -> np.ndarray:
    """Globally-centered batch means over ``M`` parallel chains.

    Batch means of every chain are centered at the grand mean and pooled with
    divisor ``M a_n - 1``; with ``M = 1`` this is :func:`batch_means_cov`.
    """
    mc = as_multichain(mc)
    cfg = cfg or default_batch_size(mc.n)
    if mc.M * cfg.a_n < 2:
        raise InsufficientBatchesError(f"need M * a_n >= 2, got {mc.M * cfg.a_n}")
    if cfg.b_n < 1 or cfg.retained > mc.n:
        raise InsufficientBatchesError(f"batch layout does not fit n={mc.n}")
    retained = mc.head(cfg.retained)
    means = np.vstack([batch_means(c.samples, cfg) for c in retained.chains])
    return _pooled_batch_cov(means, global_mean(retained), cfg.b_n)


def corr_from_cov(cov) -> CovCorrPair:
    """Split a covariance matrix into standard deviations and a unit-diagonal correlation.

    Raises
    ------
    DegenerateVarianceError
        If a diagonal entry is not strictly positive.
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    var = np.diag(cov)
    bad = np.flatnonzero(~(var > 0))
    if bad.size:
        j = int(bad[0])
        raise DegenerateVarianceError(j, f"coordinate {j} has non-positive variance {var[j]!r}")
    sd = np.sqrt(var)
    corr = cov / sd[:, None] / sd[None, :]
    corr = (corr + corr.T) / 2
    np.fill_diagonal(corr, 1.0)
    return CovCorrPair(cov=cov, corr=corr, sd=sd)


def default_bandwidth(n: int) -> int:
    return max(1, icbrt(n))


def spectral_variance(chain: Chain, bandwidth: int | None = None) -> np.ndarray:
    """Spectral variance estimator with the modified Bartlett window ``1 - |k|/(b+1)``."""
    chain = chain if isinstance(chain, Chain) else Chain(chain)
    bandwidth = default_bandwidth(chain.n) if bandwidth is None else int(bandwidth)
    if not 1 <= bandwidth <= chain.n - 1:
        raise LagRangeError(f"bandwidth must lie in [1, {chain.n - 1}], got {bandwidth}")
    zeta = autocov_fft(chain, bandwidth).lags
    k = np.arange(1, bandwidth + 1)
    w = 1.0 - k / (bandwidth + 1.0)
    tail = np.einsum("k,kij->ij", w, zeta[1:])
    out = zeta[0] + tail + tail.T
    return (out + out.T) / 2
