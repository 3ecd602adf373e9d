# %% [markdown]
# Generalized latin rectangles.
#
# An (m, r, s)-GLR is an s x rm array over 1..m where every row uses each
# symbol r times, columns have distinct entries, and no ordered pair of
# symbols appears one-above-the-other in two different columns.

# %%
import numpy as np

from poset_dim_lab import (EXAMPLE_GLR_9_2_3, GLRArray, construct_glr, glr_counting_feasible, max_glr_depth,
                           validate_glr)

example = np.array(EXAMPLE_GLR_9_2_3)
print(example)
print("valid:", validate_glr(example, 9).ok)

# %% [markdown]
# Break a cell and the validator names the failing condition and where.

# %%
bad = example.copy()
bad[2, 0] = 1
for v in validate_glr(bad, 9).violations:
    print(v.condition, v.name, "row", v.row, "column", v.column, "-", v.detail)

# %% [markdown]
# A counting argument rules out depth 4 for m = 9, r = 2.

# %%
print("(9,2,4) counting-feasible:", glr_counting_feasible(9, 2, 4))

# %% [markdown]
# Row-by-row construction through Hall matchings succeeds whenever m is
# comfortably larger than 2 r s^3.

# %%
R = construct_glr(60, 2, 3, seed=0)
print(R.entries[:, :12], "...")
print("valid:", validate_glr(R.entries, 60).ok)
print(R.to_csv().splitlines()[0])

# %% [markdown]
# For small m and r an exhaustive search charts the largest depth.

# %%
for m, r in [(4, 1), (5, 1), (7, 1), (7, 2)]:
    res = max_glr_depth(m, r)
    print(f"f({m},{r}) = {res.value}  counting cap {res.counting_cap}  exhausted {res.exhausted}")
