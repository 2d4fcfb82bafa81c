"""Initial-sequence and covariance-correlation estimators of MCMC asymptotic covariance."""

from .autocov import (
    AutocovSequence,
    WithinBetween,
    autocov_direct,
    autocov_fft,
    autocov_global,
    autocov_stan,
    within_between,
)
from .batch_spectral import (
    BatchConfig,
    CovCorrPair,
    batch_means_cov,
    corr_from_cov,
    default_batch_size,
    gbm_cov,
    spectral_variance,
)
from .cc import CovEstimate, cc_ise, estimate, gcc_ise, stan_cc
from .chain_data import Chain, MultiChain, chain_mean, global_mean, load_chain
from .diagnostics import EssValue, chi2_quantile, ellipsoid_contains, ess, rel_frobenius
from .errors import *  # noqa: F401,F403
from .ise import (
    DiagonalSD,
    IseResult,
    g_ise_diagonal,
    ise_diagonal,
    ise_from_autocov,
    ise_variance,
    stan_ise_diagonal,
)
from .mise import MiseResult, is_positive_definite, mise, sym_pair
from .var_bench import (
    BenchmarkConfig,
    BenchmarkReport,
    BiasConfig,
    VarModel,
    bias_experiment,
    build_var,
    hadamard,
    run_benchmark,
    simulate_var,
    stationary_v,
)

__version__ = "0.1.0"
