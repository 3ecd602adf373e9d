# %% [markdown]
# Matchings in the incomparability graph and the balanced numbers.

# %%
from poset_dim_lab import (SampleConfig, balanced_clique_number, balanced_independence_number, defect,
                           dim_upper_via_matching, exact_dimension, max_incomparability_matching,
                           min_maximal_matching, sample_poset, standard_example_greedy, standard_example_number)

P = sample_poset(SampleConfig(n=8, p=0.6, seed=7))

# %% [markdown]
# A maximum matching comes with a vertex cover of the same size, which
# certifies that no larger matching exists.

# %%
M = max_incomparability_matching(P)
print("maximum matching:", M.size, M.edges)
print("cover (A side, A' side):", M.cover)
print("defect of (A, A'):", defect(P, range(P.n), range(P.n)))

# %% [markdown]
# Reversing the pairs of any maximal matching one extension at a time
# realizes the poset, so the smallest maximal matching bounds the dimension.

# %%
mmm = min_maximal_matching(P, mode="exact")
print("min maximal matching:", mmm.size, "optimal:", mmm.optimal)
print("dim:", exact_dimension(P)[0], "<=", dim_upper_via_matching(P))

# %% [markdown]
# Balanced clique and independence numbers, and the largest induced
# standard example. se never exceeds 2 bcn + 1.

# %%
bcn, wc = balanced_clique_number(P)
bin_, wi = balanced_independence_number(P)
se, ws = standard_example_number(P)
print("bcn =", bcn, wc.to_dict())
print("bin =", bin_, wi.to_dict())
print("se  =", se, "(greedy lower bound:", standard_example_greedy(P)[0], ")")
