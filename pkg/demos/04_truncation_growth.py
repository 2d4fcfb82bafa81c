# %% [markdown]
# # Truncation time and cost of the multivariate ISE
#
# The multivariate initial sequence estimator keeps adding lag pairs while
# the determinant grows, so its truncation time and its cost both grow
# with the chain length.

# %%
import time

import numpy as np

from mcmc_se import build_var, cc_ise, mise, simulate_var

model = build_var(12, 1.01)
for n in (5_000, 10_000, 50_000):
    t_n, t_mise, t_cc = [], 0.0, 0.0
    for r in range(10):
        chain = simulate_var(model, n, seed=(3, n, r))
        start = time.perf_counter()
        t_n.append(mise(chain).t_n)
        t_mise += time.perf_counter() - start
        start = time.perf_counter()
        cc_ise(chain)
        t_cc += time.perf_counter() - start
    print(f"n={n:6d}  median t_n {np.median(t_n):5.1f}  mise {t_mise / 10:.3f}s  cc-ise {t_cc / 10:.3f}s")
