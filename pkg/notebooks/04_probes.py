# %% [markdown]
# Probing identities numerically
#
# Send eta -> 1 and [u] -> <u> - 1 in the Witt ring of a concrete field.
# Equal expressions must give equal classes.  The converse fails: anything
# divisible by h vanishes in W.

# %%
import random

from mwcalc import normalize, parse_value
from mwcalc.fields import probe, random_assignment, residue_probe

e = normalize(parse_value("[U][V]"))
print(probe(e, {"U": -1, "V": -1}, "R"))
print(probe(normalize(parse_value("h")), {}, "R"))

# %%
# [U][V] and [V][U] differ by h[U][V]; the Witt probe cannot see it
a, b = normalize(parse_value("[U][V]")), normalize(parse_value("[V][U]"))
rng = random.Random(0)
for backend in ("F3", "F5", "F7", "R"):
    same = all(
        probe(a, asg, backend) == probe(b, asg, backend)
        for asg in (random_assignment("UV", backend, rng) for _ in range(50))
    )
    print(backend, same)

# %% [markdown]
# The tame symbol on F_q((t)) does see it: U = t, V = 2 over F_5.

# %%
asg = {"U": (1, 1), "V": (0, 2)}
print(residue_probe(a, asg, 5), residue_probe(b, asg, 5))

# %% [markdown]
# Why [u] -> <u> - 1 and not [u] -> <1, -u>?  The second choice flips the
# sign of each bracket, which breaks [UV] = [U] + [V] + eta[U][V] over R.

# %%
raw = parse_value("[U] + [V] + eta*[U][V]")
for conv in ("standard", "pfister"):
    print(conv, probe(parse_value("[U*V]"), {"U": -1, "V": -1}, "R", conv), probe(raw, {"U": -1, "V": -1}, "R", conv))
