# %% [markdown]
# # Parallel chains
#
# With several chains the autocovariances can be centered at the grand
# mean (GCC-ISE) or adjusted with within/between-chain variances (STAN-CC).

# %%
import numpy as np

from mcmc_se import build_var, gcc_ise, rel_frobenius, stan_cc
from mcmc_se.var_bench import simulate_parallel

model = build_var(12, 1.01)

# %%
for M in (2, 4, 8):
    g, s = [], []
    for r in range(20):
        chains = simulate_parallel(model, n=1000, M=M, seed=(7, M, r))
        g.append(rel_frobenius(gcc_ise(chains).sigma, model.sigma_true))
        s.append(rel_frobenius(stan_cc(chains).sigma, model.sigma_true))
    print(f"M={M:2d}  median rel. Frobenius  gcc-ise {np.median(g):.3f}  stan-cc {np.median(s):.3f}")
