# %% [markdown]
# Regenerate every figure dataset
#
# Equivalent to `becscat all --out results`.  Solves are shared between
# figures; set BECSCAT_WORKERS to spread them over threads.

# %%
from becscat import SweepConfig, emit_all, run_all

config = SweepConfig(output_dir="results")
datasets = run_all(config)
for path in emit_all(datasets, config):
    print(path)

# %%
fig1b = datasets["figure1b"]
for g, mu, mu_tf in zip(fig1b["gamma"], fig1b["mu_num"], fig1b["mu_tf"]):
    print(f"Gamma = {g:<7g} mu = {mu:.6f}  mu_TF = {mu_tf:.6f}")
