# %% [markdown]
# The group F(1): pairs (alpha, U) with alpha in K^MW_2
#
# theta(U) = (0, U), and theta(U)theta(V) = <-1>[U][V] theta(UV).
# The degree-2 part is central, so commutators land in K^MW_2.

# %%
from mwcalc import fa1_commutator, hk2_member, hurewicz, normalize, parse_value, theta, var
from mwcalc.derivations import derive

U, V, W = var("U"), var("V"), var("W")

print(parse_value("theta(U)*theta(V)"))
c = fa1_commutator(theta(U), theta(V))
print("commutator:", c)
print("h(h-1)[U][V] =", normalize(parse_value("h*(h-1)*[U][V]")))

# %%
# the commutator is h times a symbol
print(hk2_member(c.k2_part))
# a bare symbol is not
print(hk2_member(normalize(parse_value("[U][V]"))))

# %% [markdown]
# The chain of equalities behind the commutator computation, checked line
# by line.

# %%
for name in ("lemma-hk2", "lemma-explicit-h"):
    rep = derive(name)
    print(name)
    for s in rep.steps:
        print("  ", s)

# %% [markdown]
# The two inverse relations.  The second one holds.  The first, as usually
# stated, does not. The mirror image of the second one does.

# %%
rep = derive("thm-fa1-ii")
for s in rep.steps:
    print(s)
    print("     lhs:", s.lhs_nf)
    print("     rhs:", s.rhs_nf)

from mwcalc.fa1 import fa1_equal

print(fa1_equal(parse_value("theta(U)*theta(V)^-1"), parse_value("[-U][V^-1]*theta(U*V^-1)")))

# %% [markdown]
# Hurewicz: H(alpha * theta(W)) = eta*tau(alpha) + [W].

# %%
x = parse_value("[U][V]*theta(W)")
print(hurewicz(x))
print(normalize(parse_value("eta*[U^-1][V] + [W]")))

# it is additive and kills commutators
import random

from mwcalc.hurewicz import check_homomorphism
from mwcalc.sampling import random_fa1

rng = random.Random(1)
pairs = [(random_fa1(rng), random_fa1(rng)) for _ in range(50)]
print(check_homomorphism(pairs))
print(all(not hurewicz(fa1_commutator(a, b)) for a, b in pairs))
