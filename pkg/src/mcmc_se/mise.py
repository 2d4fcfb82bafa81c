"""Multivariate initial sequence estimator of Dai and Jones (mISE).

Two implementations share one truncation loop:

* ``mode="sequential"`` computes each lag matrix from the raw samples when
  the loop asks for it, ``O(d^2 n t_n + d^3 t_n)``.
* ``mode="fft"`` reads lag matrices from column spectra through a lazily
  grown window, ``O(d^2 n log n + d^3 t_n)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .autocov import FftLagWindow
from .chain_data import Chain, chain_mean
from .errors import AsymmetricMatrixError, ChainTooShortError, NotPositiveDefiniteError

__all__ = [
    "MiseResult",
    "sym_pair",
    "symmetric_pivots",
    "is_positive_definite",
    "pivot_determinant",
    "mise",
]

PIVOT_RTOL = 1e-12
SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class MiseResult:
    """Outcome of the mISE truncation loop.

    ``dets`` records ``det(Sigma_m)`` for ``m = s_n, s_n + 1, ...`` as seen by
    the determinant rule, so the stopping decision can be replayed.
    """

    sigma: np.ndarray
    s_n: int
    t_n: int
    lags_consumed: int
    wall_clock: float
    budget_exhausted: bool = False
    dets: tuple = field(default=(), repr=False)


def sym_pair(zeta_even, zeta_odd) -> np.ndarray:
    """``Z_i = (zeta_2i + zeta_2i^T)/2 + (zeta_{2i+1} + zeta_{2i+1}^T)/2``."""
    a = np.atleast_2d(np.asarray(zeta_even, dtype=float))
    b = np.atleast_2d(np.asarray(zeta_odd, dtype=float))
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"lag matrices must be square and equal-shaped, got {a.shape} and {b.shape}")
    return (a + a.T) / 2 + (b + b.T) / 2


def _check_symmetric(m):
    scale = np.max(np.abs(m)) if m.size else 0.0
    if np.max(np.abs(m - m.T)) > SYMMETRY_RTOL * scale:
        raise AsymmetricMatrixError("matrix is not symmetric")


def symmetric_pivots(m) -> np.ndarray:
    """Pivots of symmetric Gaussian elimination without row exchanges (``LDL^T``).

    Stops early (returning fewer than ``d`` pivots) if an exact zero pivot
    appears.
    """
    a = np.array(m, dtype=float)
    d = a.shape[0]
    pivots = np.empty(d)
    for k in range(d):
        p = a[k, k]
        pivots[k] = p
        if p == 0.0:
            return pivots[: k + 1]
        if k + 1 < d:
            a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :]) / p
    return pivots


def is_positive_definite(m) -> bool:
    """True iff every ``LDL^T`` pivot exceeds ``1e-12 * max(1, max diagonal)``."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    _check_symmetric(m)
    tol = PIVOT_RTOL * max(1.0, float(np.max(np.diag(m))))
    a = m.copy()
    d = a.shape[0]
    for k in range(d):
        p = a[k, k]
        if not p > tol:
            return False
        if k + 1 < d:
            a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :]) / p
    return True


def pivot_determinant(m) -> float:
    """Determinant as the product of ``LDL^T`` pivots."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    pivots = symmetric_pivots(m)
    if pivots.size < m.shape[0]:
        # zero pivot without row exchange; fall back to pivoted LU
        return float(np.linalg.det(m))
    return float(np.prod(pivots))


def _sequential_source(centered):
    n = centered.shape[0]

    def lag(i):
        return centered[: n - i].T @ centered[i:] / n

    return lag


def _fft_source(centered):
    window = FftLagWindow(centered)
    return window.get


def mise(chain: Chain, mode: str = "sequential") -> MiseResult:
    """Dai-Jones mISE with determinant-based truncation.

    Phase 1 adds ``2 Z_i`` to ``-zeta_0`` until the partial sum is positive
    definite (index ``s_n``).  Phase 2 keeps adding while the determinant
    strictly increases; the first non-increase at step ``i`` returns the
    previous sum with ``t_n = i - 1``.  If the lag budget ``floor(n/2 - 1)``
    runs out first the last sum is returned with ``budget_exhausted=True``.

    Raises
    ------
    NotPositiveDefiniteError
        Phase 1 never reaches a positive-definite partial sum.
    """
    chain = chain if isinstance(chain, Chain) else Chain(chain)
    n, d = chain.n, chain.d
    if n < 4:
        raise ChainTooShortError(f"mISE needs n >= 4, got {n}")
    if mode not in ("sequential", "fft"):
        raise ValueError(f"unknown mode {mode!r}")

    start = time.perf_counter()
    centered = chain.samples - chain_mean(chain)
    lag = _sequential_source(centered) if mode == "sequential" else _fft_source(centered)
    zero = np.zeros((d, d))

    def Z(i):
        hi = 2 * i + 1
        return sym_pair(lag(2 * i), lag(hi) if hi < n else zero)

    sigma = -lag(0)
    s_n = None
    for i in range((n - 1) // 2 + 1):
        sigma = sigma + 2 * Z(i)
        if is_positive_definite(sigma):
            s_n = i
            break
    if s_n is None:
        raise NotPositiveDefiniteError(
            "partial autocovariance sums never became positive definite (degenerate chain?)"
        )

    dets = [pivot_determinant(sigma)]
    budget = n // 2 - 1
    for i in range(s_n + 1, budget + 1):
        prev = sigma
        sigma = sigma + 2 * Z(i)
        det = pivot_determinant(sigma)
        dets.append(det)
        if det <= dets[-2]:
            t_n = i - 1
            return MiseResult(
                sigma=prev,
                s_n=s_n,
                t_n=t_n,
                lags_consumed=2 * t_n + 1,
                wall_clock=time.perf_counter() - start,
                dets=tuple(dets),
            )

    t_n = max(s_n, budget)
    return MiseResult(
        sigma=sigma,
        s_n=s_n,
        t_n=t_n,
        lags_consumed=min(2 * t_n + 1, n - 1),
        wall_clock=time.perf_counter() - start,
        budget_exhausted=True,
        dets=tuple(dets),
    )
