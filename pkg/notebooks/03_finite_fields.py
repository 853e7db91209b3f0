# %% [markdown]
# K^MW over finite fields, by brute force
#
# Over F_q everything is finite, so the groups can be written down and
# compared with Smith normal form.

# %%
import numpy as np

from mwcalc.presentations import (
    FinPresAbGroup,
    brute_witt_ring,
    eta_sequence_exactness_finite,
    kmw_finite_field,
    milnor_k2,
    smith_normal_form,
)

A = np.array([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], dtype=object)
snf = smith_normal_form(A)
print(snf.diagonal)
print((snf.S.dot(A).dot(snf.T) == snf.D).all())

# %%
g = FinPresAbGroup(["a", "b"], np.array([[4, 6]], dtype=object))
print(g.describe())

# %% [markdown]
# Witt rings of small fields have four elements; powers of the fundamental
# ideal die from I^2 on.

# %%
for q in (3, 5, 7):
    W = brute_witt_ring(q)
    print(q, W.order, [len(W.ideal_power(n)) for n in range(4)])

# %%
# K^M_2 of a finite field vanishes, and so does K^MW_2
for q in (3, 5, 7, 9):
    print(q, milnor_k2(q).describe())

for q in (3, 5, 7):
    print(q, "K1:", kmw_finite_field(q, 1).group.describe(), " K2:", kmw_finite_field(q, 2).group.describe())

# %%
# kernel of eta on K_2 versus the image of h
for q in (3, 5, 7):
    print(eta_sequence_exactness_finite(q, 2))
print(eta_sequence_exactness_finite(5, 3))
