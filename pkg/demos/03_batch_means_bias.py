# %% [markdown]
# # Where batch means loses accuracy
#
# Batch means underestimates the marginal variances of slowly mixing chains
# much more than it distorts their correlations.  Plugging the true
# variances into the batch-means correlation shows the split.

# %%
from mcmc_se import bias_experiment

rows = bias_experiment(d=12, rho_grid=(1.01, 1.05, 1.1, float("inf")), n=10_000, reps=30)
print(f"{'rho':>6} {'cov bias':>9} {'corr bias':>10} {'cov det':>8} {'corr det':>9}")
for r in rows:
    print(
        f"{r['rho']:>6} {r['cov_rel_bias']:>9.3f} {r['corr_rel_bias']:>10.3f} "
        f"{r['cov_rel_det']:>8.3f} {r['corr_rel_det']:>9.3f}"
    )
