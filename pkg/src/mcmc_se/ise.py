"""Univariate initial positive sequence estimators (ISE) and their diagonal matrices.

For a scalar autocovariance sequence ``gamma_0, gamma_1, ...`` the ISE is::

    sigma2 = -gamma_0 + 2 * sum_{i=0}^{k_n} Gamma_i,   Gamma_i = gamma_{2i} + gamma_{2i+1}

with ``k_n`` the last index of the initial run of strictly positive pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .autocov import AutocovSequence, column_autocovs, _average, within_between
from .chain_data import Chain, MultiChain, as_multichain, chain_mean, global_mean
from .errors import InsufficientChainsError, InvalidAutocovError

__all__ = [
    "IseResult",
    "DiagonalSD",
    "pair_sums",
    "ise_from_autocov",
    "ise_variance",
    "ise_diagonal",
    "g_ise_diagonal",
    "stan_ise_diagonal",
    "replay_truncation",
]


@dataclass(frozen=True)
class IseResult:
    """Asymptotic-variance estimate with its truncation index.

    ``k_n = -1`` flags the degenerate fallback, in which case
    ``sigma2 = gamma_0``.  It is used when ``Gamma_0 <= 0`` or when the
    positive-sequence sum would give a negative variance.
    """

    sigma2: float
    k_n: int
    pairs_used: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class DiagonalSD:
    """Diagonal matrix ``L`` of marginal standard deviations."""

    sds: np.ndarray
    source: str
    results: tuple = field(default=(), repr=False)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.sds)

    @property
    def k_n(self) -> list:
        return [r.k_n for r in self.results]


def pair_sums(gamma) -> np.ndarray:
    """``Gamma_i = gamma_{2i} + gamma_{2i+1}``; a missing final odd lag counts as 0."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.size % 2:
        gamma = np.append(gamma, 0.0)
    return gamma[0::2] + gamma[1::2]


def ise_from_autocov(gamma) -> IseResult:
    """Apply the initial positive sequence rule to a scalar autocovariance sequence.

    ``gamma`` is a 1-D array of lags ``0, 1, ...`` or a one-dimensional
    :class:`AutocovSequence`.

    >>> ise_from_autocov([4, 2, 1, 0.5, -0.2, -0.1]).sigma2
    11.0
    """
    if isinstance(gamma, AutocovSequence):
        gamma = gamma.univariate()
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 1 or gamma.size == 0:
        raise InvalidAutocovError("need a non-empty 1-D autocovariance sequence")
    g0 = float(gamma[0])
    if g0 < 0:
        raise InvalidAutocovError(f"lag-0 autocovariance must be >= 0, got {g0}")

    pairs = pair_sums(gamma)
    nonpos = np.flatnonzero(~(pairs > 0))
    k = int(nonpos[0]) - 1 if nonpos.size else pairs.size - 1
    if k < 0:
        return IseResult(g0, -1, pairs[:0])

    # sequential accumulation, same order as the multivariate path
    total = -g0
    for p in pairs[: k + 1]:
        total = total + 2.0 * p
    if total < 0:
        # strongly antithetic start: positive pairs too small to offset -gamma_0
        return IseResult(g0, -1, pairs[:0])
    return IseResult(float(total), k, pairs[: k + 1])


def replay_truncation(gamma, result: IseResult) -> bool:
    """Re-check that ``result`` obeys the positivity rule on ``gamma``."""
    if isinstance(gamma, AutocovSequence):
        gamma = gamma.univariate()
    pairs = pair_sums(gamma)
    k = result.k_n
    if result.sigma2 < 0:
        return False
    if k == -1:
        if result.sigma2 != gamma[0]:
            return False
        if not pairs[0] > 0:
            return True
        # fallback also covers a negative positive-sequence sum
        nonpos = np.flatnonzero(~(pairs > 0))
        stop = nonpos[0] if nonpos.size else pairs.size
        return -gamma[0] + 2.0 * float(np.sum(pairs[:stop])) < 0
    if not np.all(pairs[: k + 1] > 0):
        return False
    return k + 1 == pairs.size or not pairs[k + 1] > 0


def _column_gammas(centered):
    """Full-length scalar autocovariances of each (pre-centered) column."""
    return list(column_autocovs(centered, centered.shape[0] - 1))


def ise_variance(chain: Chain) -> IseResult:
    """ISE of a one-dimensional chain from its full FFT autocovariance sequence."""
    chain = chain if isinstance(chain, Chain) else Chain(chain)
    if chain.d != 1:
        raise ValueError(f"ise_variance needs d = 1, got d = {chain.d}")
    (gamma,) = _column_gammas(chain.samples - chain_mean(chain))
    return ise_from_autocov(gamma)


def _diagonal(gammas, source):
    results = tuple(ise_from_autocov(g) for g in gammas)
    sds = np.sqrt(np.array([r.sigma2 for r in results]))
    return DiagonalSD(sds, source, results)


def ise_diagonal(chain: Chain) -> DiagonalSD:
    """Per-coordinate ISE standard deviations, ``O(d n log n)``."""
    chain = chain if isinstance(chain, Chain) else Chain(chain)
    return _diagonal(_column_gammas(chain.samples - chain_mean(chain)), "ise")


def g_ise_diagonal(mc: MultiChain) -> DiagonalSD:
    """Globally-centered ISE standard deviations for parallel chains."""
    mc = as_multichain(mc)
    gbar = global_mean(mc)
    per_chain = [_column_gammas(c.samples - gbar) for c in mc.chains]
    gammas = [_average([pc[j] for pc in per_chain]) for j in range(mc.d)]
    return _diagonal(gammas, "g-ise")


def stan_ise_diagonal(mc: MultiChain) -> DiagonalSD:
    """ISE standard deviations from STAN's within/between adjusted autocovariances."""
    mc = as_multichain(mc)
    if mc.M < 2:
        raise InsufficientChainsError(f"STAN-ISE needs M >= 2 chains, got {mc.M}")
    wb = within_between(mc)
    per_chain = [_column_gammas(c.samples - chain_mean(c)) for c in mc.chains]
    shift = (wb.B - wb.W) / mc.n
    gammas = [_average([pc[j] for pc in per_chain]) + shift[j] for j in range(mc.d)]
    return _diagonal(gammas, "stan-ise")
