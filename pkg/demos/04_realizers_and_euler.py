# %% [markdown]
# One-sided realizers from a GLR, short realizers, weights and the Euler
# product function.

# %%
import mpmath

from poset_dim_lab import (EXAMPLE_GLR_9_2_3, GLRArray, SampleConfig, balanced_independence_number, euler_phi,
                           evaluate_one_sided, evaluate_short, exact_dimension, expected_failures, family_from_glr,
                           sample_poset, t_value, truncate_realizer, weight)

R = GLRArray.from_entries(EXAMPLE_GLR_9_2_3, 9)
n = R.r * R.m + R.m  # 18 top elements plus the 9 GLR symbols
F = family_from_glr(R, n)
print("first sequence:", F.to_json().split("],")[0] + "]")

# %% [markdown]
# Count unrealized pairs on random posets and compare with the closed form.

# %%
q = 0.3
fails = [len(evaluate_one_sided(sample_poset(SampleConfig(n, 1 - q, s)), F)[1]) for s in range(400)]
print("mean failing:", sum(fails) / len(fails), "closed form:", expected_failures(n, R.m, q, R.r, R.s))

# %% [markdown]
# Every GLR symbol sits at heights 1..s exactly r times each, so its
# weight is r (1 + 1/2 + ... + 2^(1-s)).

# %%
print("w(x_1) =", weight(F, 18))

# %% [markdown]
# Truncating a realizer to its top and bottom t-1 elements, with t one
# more than bin(P), gives a short realizer.

# %%
P = sample_poset(SampleConfig(6, 0.5, 3))
d, Rz = exact_dimension(P)
t = balanced_independence_number(P)[0] + 1
S = truncate_realizer(P, Rz.extensions, t)
print("short realizer of length", S.length, "realizes P:", evaluate_short(P, S)[0])
print("t formula at n=1024, q=1/2:", t_value(1024, 0.5))

# %% [markdown]
# phi(q) = prod (1 - q^i). High precision mode agrees with mpmath's q-Pochhammer.

# %%
e = euler_phi(0.5, precision=40)
with mpmath.workdps(40):
    print(e.value)
    print(mpmath.qp(0.5))
    print("ln(1/phi(1/2))/2 =", mpmath.log(1 / e.value) / 2)
