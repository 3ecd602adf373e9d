# %% [markdown]
# Seeded Monte Carlo experiments.
#
# Trial i of a run with master seed S uses its own seed derived from
# (S, i), so reruns and reorderings give byte-identical reports.

# %%
from poset_dim_lab import run_experiment, run_extremal_fd, stability_snapshot

rep = run_experiment("indep2", n=64, q=0.4, trials=200, seed=0)
print(rep.verdicts[0])

# %% [markdown]
# Balanced clique pairs of size 2 against their expectation.

# %%
print(run_experiment("bcn-markov", n=32, q=0.5, trials=200, mode="heuristic").verdicts[0])

# %% [markdown]
# Small posets: dimension against the smallest maximal matching.

# %%
for v in run_experiment("dim-small", n=5, q=0.5, trials=100).verdicts:
    print(v)

# %% [markdown]
# Standard examples at the threshold probability and the alteration step.

# %%
for v in run_extremal_fd(3, 20, 100, seed=1).verdicts:
    print(v["check"], "->", v["verdict"])

# %% [markdown]
# bcn and se at q = n^(-1/3).

# %%
snap = stability_snapshot(40, trials=3)
print(snap.aggregates)

# %% [markdown]
# Determinism check.

# %%
a = run_experiment("hall", n=30, q=0.3, trials=20, seed=5).to_json()
b = run_experiment("hall", n=30, q=0.3, trials=20, seed=5).to_json()
print("identical:", a == b)
