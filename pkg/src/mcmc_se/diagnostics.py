"""Quality metrics for covariance estimates: ESS, relative Frobenius error, confidence ellipsoids."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import gammainc, gammaln

from .chain_data import Chain, chain_mean
from .errors import SingularEstimateError

__all__ = [
    "EssValue",
    "ess",
    "rel_frobenius",
    "chi2_quantile",
    "ellipsoid_statistic",
    "ellipsoid_contains",
    "logdet_pd",
]


@dataclass(frozen=True)
class EssValue:
    ess: float
    ess_per_n: float


def _sigma(est):
    return np.atleast_2d(np.asarray(getattr(est, "sigma", est), dtype=float))


def _cholesky(m):
    try:
        return scipy.linalg.cholesky(m, lower=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularEstimateError("covariance estimate is not positive definite") from exc


def logdet_pd(m) -> float:
    """``log det`` of a positive-definite matrix from its Cholesky factor."""
    return 2.0 * float(np.sum(np.log(np.diag(_cholesky(np.atleast_2d(m))))))


def ess(chain: Chain, est) -> EssValue:
    """Multivariate effective sample size ``n (det zeta_0 / det Sigma)^{1/d}``.

    ``zeta_0`` is the lag-0 sample covariance with divisor ``n``.  Both
    determinants are taken in log space.
    """
    chain = chain if isinstance(chain, Chain) else Chain(chain)
    sigma = _sigma(est)
    if sigma.shape != (chain.d, chain.d):
        raise ValueError(f"estimate is {sigma.shape}, chain has d = {chain.d}")
    log_sigma = logdet_pd(sigma)
    centered = chain.samples - chain_mean(chain)
    zeta0 = centered.T @ centered / chain.n
    sign, log_zeta = np.linalg.slogdet(zeta0)
    if sign <= 0:
        return EssValue(0.0, 0.0)
    ratio = math.exp((log_zeta - log_sigma) / chain.d)
    return EssValue(chain.n * ratio, ratio)


def rel_frobenius(estimate, truth) -> float:
    """``||truth - estimate||_F / ||truth||_F``."""
    truth = np.asarray(truth, dtype=float)
    denom = np.linalg.norm(truth)
    if denom == 0:
        raise ZeroDivisionError("relative Frobenius norm with a zero reference matrix")
    return float(np.linalg.norm(truth - _sigma(estimate)) / denom)


def chi2_quantile(dof: int, p: float, tol: float = 1e-10) -> float:
    """``p``-quantile of the chi-square distribution with ``dof`` degrees of freedom.

    Safeguarded Newton iteration on the regularized lower incomplete gamma
    function ``P(dof/2, x/2) = p``.

    >>> round(chi2_quantile(2, 0.95), 6)
    5.991465
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p}")
    if dof <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {dof}")
    k = dof / 2.0

    def cdf(x):
        return gammainc(k, x / 2.0)

    def pdf(x):
        return math.exp((k - 1.0) * math.log(x / 2.0) - x / 2.0 - gammaln(k)) / 2.0

    lo, hi = 0.0, dof + 10.0 * math.sqrt(2.0 * dof) + 10.0
    while cdf(hi) < p:
        lo, hi = hi, 2.0 * hi
    x = 0.5 * (lo + hi)
    for _ in range(200):
        f = cdf(x) - p
        if f > 0:
            hi = x
        else:
            lo = x
        dens = pdf(x) if x > 0 else 0.0
        step = f / dens if dens > 0 else math.inf
        cand = x - step
        if not lo < cand < hi:
            cand = 0.5 * (lo + hi)
        if abs(cand - x) < tol or hi - lo < tol:
            return cand
        x = cand
    return x


def ellipsoid_statistic(mean, est, n: int, mu0) -> float:
    """``n (mean - mu0)^T Sigma^{-1} (mean - mu0)`` via a triangular solve."""
    sigma = _sigma(est)
    delta = np.atleast_1d(np.asarray(mean, dtype=float) - np.asarray(mu0, dtype=float))
    y = scipy.linalg.solve_triangular(_cholesky(sigma), delta, lower=True)
    return float(n * (y @ y))


def ellipsoid_contains(mean, est, n: int, mu0, level: float = 0.95) -> bool:
    """Whether ``mu0`` lies inside the asymptotic ``level`` confidence ellipsoid."""
    sigma = _sigma(est)
    return ellipsoid_statistic(mean, sigma, n, mu0) < chi2_quantile(sigma.shape[0], level)
