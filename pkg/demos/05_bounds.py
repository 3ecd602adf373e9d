# %% [markdown]
# Closed-form dimension bounds.
#
# Each entry records its value, whether q lies in its hypothesis range,
# which regime applied, and whether it depends on unquantified constants.

# %%
from poset_dim_lab import eval_bounds
from poset_dim_lab.bounds import ub_coefficient

rep = eval_bounds(10 ** 8, q=0.01)
for e in rep.entries:
    flag = "" if e.quantitative else "  (placeholder constants)"
    print(f"{e.name:16s} {e.value!s:>24}  hyp={e.hypothesis_satisfied!s:5}  regime={e.regime}{flag}")

# %% [markdown]
# The bounds are not monotone in q: at n = 10^8 the lower bound at a
# larger q exceeds the upper bound at a smaller q.

# %%
n = 10 ** 8
print(eval_bounds(n, q=n ** -0.25)["new_lb_3"].value, ">", eval_bounds(n, q=n ** -0.8)["new_ub_1"].value)

# %% [markdown]
# At q = 1/2 the upper bound coefficient (n - UB) ln n / n creeps towards
# ln(1/phi(1/2))/2 = 0.6210... as n grows.

# %%
for k in (10, 50, 200, 1000):
    print(f"n = 1e{k}:", ub_coefficient(10 ** k, 0.5, precision=50))

# %% [markdown]
# The same report as CSV, ready for plotting.

# %%
print(eval_bounds(10 ** 6, p=0.5).to_csv())
