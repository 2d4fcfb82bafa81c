"""Sample autocovariances: direct, FFT, globally-centered and STAN-adjusted.

Every sequence uses the divisor ``n`` at every lag::

    zeta_i = n^{-1} sum_{t=1}^{n-i} (x_t - c)(x_{t+i} - c)^T

where ``c`` is the chain mean (single-chain), the grand mean over parallel
chains (global) or each chain's own mean (stan).  Only lags ``i >= 0`` are
stored; ``zeta_{-i} = zeta_i^T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .chain_data import Chain, MultiChain, as_multichain, chain_mean, global_mean
from .errors import ChainTooShortError, InsufficientChainsError, LagRangeError

__all__ = [
    "AutocovSequence",
    "WithinBetween",
    "autocov_direct",
    "autocov_fft",
    "autocov_global",
    "within_between",
    "autocov_stan",
    "FftLagWindow",
    "fft_length",
]

CENTERINGS = ("single-chain", "global", "stan")


@dataclass(frozen=True, eq=False)
class AutocovSequence:
    """Lag-indexed autocovariance matrices.

    ``lags`` has shape ``(max_lag + 1, d, d)``; ``lags[i]`` is the lag-``i``
    matrix.  ``n`` is the divisor used.
    """

    lags: np.ndarray
    n: int
    centering: str = "single-chain"

    def __post_init__(self):
        if self.centering not in CENTERINGS:
            raise ValueError(f"unknown centering {self.centering!r}")
        lags = np.asarray(self.lags, dtype=float)
        if lags.ndim == 1:
            lags = lags[:, None, None]
        lags.setflags(write=False)
        object.__setattr__(self, "lags", lags)

    @property
    def max_lag(self) -> int:
        return self.lags.shape[0] - 1

    @property
    def d(self) -> int:
        return self.lags.shape[1]

    def at(self, i: int) -> np.ndarray:
        """Lag-``i`` matrix, negative lags via transpose."""
        return self.lags[i] if i >= 0 else self.lags[-i].T

    def coordinate(self, j: int) -> np.ndarray:
        """Scalar autocovariance sequence of coordinate ``j``."""
        return self.lags[:, j, j]

    def univariate(self) -> np.ndarray:
        if self.d != 1:
            raise ValueError(f"sequence is {self.d}-dimensional")
        return self.lags[:, 0, 0]


@dataclass(frozen=True, eq=False)
class WithinBetween:
    """Within-chain variance average ``W``, between-chain variance ``B`` and per-chain ``s2``."""

    W: np.ndarray
    B: np.ndarray
    s2: np.ndarray


def _check_lag(n, max_lag):
    if max_lag is None:
        return n - 1
    max_lag = int(max_lag)
    if max_lag < 0 or max_lag >= n:
        raise LagRangeError(f"max_lag must lie in [0, {n - 1}], got {max_lag}")
    return max_lag


def _direct(centered, max_lag):
    n, d = centered.shape
    out = np.empty((max_lag + 1, d, d))
    for i in range(max_lag + 1):
        out[i] = centered[: n - i].T @ centered[i:]
    return out / n


def fft_length(n: int) -> int:
    """Smallest power of two ``>= 2n`` (no wrap-around for any lag)."""
    return 1 << (2 * n - 1).bit_length()


def power_autocov(spec: np.ndarray, m: int, count: int) -> np.ndarray:
    """Unnormalised-by-``n`` autocorrelation sums from rows of one-sided spectra.

    The power spectrum is real and even, so its inverse transform is a
    type-I DCT of half the length.
    """
    power = spec.real**2 + spec.imag**2
    return scipy.fft.dct(power, type=1, axis=-1)[..., :count] / m


def column_autocovs(centered: np.ndarray, max_lag: int) -> np.ndarray:
    """Scalar autocovariances of every column of pre-centered data, shape ``(d, max_lag + 1)``."""
    n = centered.shape[0]
    m = fft_length(n)
    spec = scipy.fft.rfft(np.ascontiguousarray(np.asarray(centered, dtype=float).T), n=m, axis=1)
    return power_autocov(spec, m, max_lag + 1) / n


class FftLagWindow:
    """Lazily materialised FFT autocovariances of pre-centered data.

    Column spectra are computed once (``O(d n log n)``, ``O(d n)`` memory).
    Lag matrices are kept only for a window ``[0, capacity)`` that doubles
    when a caller asks beyond it, so peak extra memory is ``O(d^2 capacity)``
    rather than ``O(d^2 n)``.
    """

    def __init__(self, centered: np.ndarray, initial: int = 64):
        centered = np.asarray(centered, dtype=float)
        if centered.ndim == 1:
            centered = centered[:, None]
        self.n, self.d = centered.shape
        self._m = fft_length(self.n)
        # spectra stored row-per-coordinate
        self._spec = scipy.fft.rfft(np.ascontiguousarray(centered.T), n=self._m, axis=1)
        self._lags = np.empty((0, self.d, self.d))
        self._initial = max(1, int(initial))

    @property
    def capacity(self) -> int:
        return self._lags.shape[0]

    def _compute(self, count):
        count = min(count, self.n)
        d, m = self.d, self._m
        if d == 1:
            return power_autocov(self._spec, m, count).T[:, :, None] / self.n
        out = np.empty((count, d, d))
        for j in range(d):
            # row j against columns j..d-1: positive lags give zeta[j, k],
            # the wrapped tail gives zeta[k, j]
            xc = scipy.fft.irfft(np.conj(self._spec[j])[None, :] * self._spec[j:], n=m, axis=1)
            out[:, j, j:] = xc[:, :count].T
            if j + 1 < d:
                tail = np.empty((d - j - 1, count))
                tail[:, 0] = xc[1:, 0]
                if count > 1:
                    tail[:, 1:] = xc[1:, m - 1 : m - count : -1]
                out[:, j + 1 :, j] = tail.T
        return out / self.n

    def ensure(self, upto: int) -> None:
        """Make lags ``0..upto`` available."""
        if upto < self.capacity:
            return
        cap = max(self._initial, self.capacity)
        while cap <= upto:
            cap *= 2
        self._lags = self._compute(cap)

    def get(self, i: int) -> np.ndarray:
        if i >= self.n:
            raise LagRangeError(f"lag {i} beyond n - 1 = {self.n - 1}")
        self.ensure(i)
        return self._lags[i]

    def all_lags(self, max_lag: int) -> np.ndarray:
        return self._compute(max_lag + 1)


def _fft(centered, max_lag):
    return FftLagWindow(centered).all_lags(max_lag)


def _samples(chain):
    return chain.samples if isinstance(chain, Chain) else Chain(chain).samples


def autocov_direct(chain: Chain, max_lag: int | None = None) -> AutocovSequence:
    """Autocovariances by the defining sum, ``O(d^2 n max_lag)``."""
    x = _samples(chain)
    n = x.shape[0]
    max_lag = _check_lag(n, max_lag)
    centered = x - chain_mean(Chain(x) if not isinstance(chain, Chain) else chain)
    return AutocovSequence(_direct(centered, max_lag), n, "single-chain")


def autocov_fft(chain: Chain, max_lag: int | None = None) -> AutocovSequence:
    """Autocovariances from zero-padded FFT cross-correlations, ``O(d^2 n log n)``."""
    chain = chain if isinstance(chain, Chain) else Chain(chain)
    max_lag = _check_lag(chain.n, max_lag)
    centered = chain.samples - chain_mean(chain)
    return AutocovSequence(_fft(centered, max_lag), chain.n, "single-chain")


def _average(parts):
    if len(parts) == 1:
        return parts[0]
    return np.add.reduce(np.stack(parts), axis=0) / len(parts)


def autocov_global(mc: MultiChain, max_lag: int | None = None, method: str = "fft") -> AutocovSequence:
    """Globally-centered autocovariances averaged over parallel chains.

    Each chain is centered at the grand mean rather than its own mean.
    ``method`` selects the per-chain kernel (``"fft"`` or ``"direct"``).
    """
    mc = as_multichain(mc)
    max_lag = _check_lag(mc.n, max_lag)
    kernel = {"fft": _fft, "direct": _direct}[method]
    gbar = global_mean(mc)
    parts = [kernel(c.samples - gbar, max_lag) for c in mc.chains]
    return AutocovSequence(_average(parts), mc.n, "global")


def within_between(mc: MultiChain) -> WithinBetween:
    """Per-coordinate within-chain (``W``) and between-chain (``B``) variances."""
    mc = as_multichain(mc)
    if mc.M < 2:
        raise InsufficientChainsError(f"within/between variances need M >= 2 chains, got {mc.M}")
    n = mc.n
    if n < 2:
        raise ChainTooShortError(f"chains need n >= 2, got {n}")
    means = np.array([chain_mean(c) for c in mc.chains])
    s2 = np.array([np.sum((c.samples - mu) ** 2, axis=0) for c, mu in zip(mc.chains, means)]) / (n - 1)
    gbar = global_mean(mc)
    W = s2.mean(axis=0)
    B = n / (mc.M - 1) * np.sum((means - gbar) ** 2, axis=0)
    return WithinBetween(W=W, B=B, s2=s2)


def autocov_stan(mc: MultiChain, max_lag: int | None = None, method: str = "fft") -> AutocovSequence:
    """STAN's multi-chain autocovariance ``(B - W)/n + mean_m gamma^(m)``.

    The per-chain terms use each chain's own mean.  The ``(B - W)/n``
    adjustment is applied to the diagonal (coordinate-wise) only.
    """
    mc = as_multichain(mc)
    wb = within_between(mc)
    max_lag = _check_lag(mc.n, max_lag)
    kernel = {"fft": _fft, "direct": _direct}[method]
    parts = [kernel(c.samples - chain_mean(c), max_lag) for c in mc.chains]
    lags = _average(parts).copy()
    shift = (wb.B - wb.W) / mc.n
    idx = np.arange(mc.d)
    lags[:, idx, idx] += shift
    return AutocovSequence(lags, mc.n, "stan")
