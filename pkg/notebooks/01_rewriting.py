# %% [markdown]
# Normal forms in K^MW
#
# Every expression is a Z-combination of words eta^a [u1]...[uk].  The engine
# rewrites until no rule applies.  Here we watch it work.

# %%
from mwcalc import ETA, H, normalize, mw_equal, parse_value
from mwcalc.engine import RULE_CITATIONS

for rule, text in RULE_CITATIONS.items():
    print(rule, text)

# %%
# a product bracket peels into its factors
e = parse_value("[U*V]")
print(normalize(e))

# inverses produce a [-1] correction
print(normalize(parse_value("[U^-1]")))

# %%
# the swap rule: [V][U] is not -[U][V], the sign is eps = -<-1>
print(normalize(parse_value("[V][U]")))
print(mw_equal(parse_value("[V][U]"), parse_value("eps*[U][V]")))

# %%
# eta kills h
print(normalize(ETA * H))
print(normalize(H * parse_value("[-1]")))

# %% [markdown]
# Tracing a normalization.  Every line is one rule application on one
# monomial; replaying the trace from the input gives the same result.

# %%
start = parse_value("[U*V][U]")
nf, trace = normalize(start, trace=True)
for step in trace:
    print(step)
print("replay ok:", trace.replay(start) == nf)

# %%
# the normal form is small even when the input units are not
big = parse_value("[U^2*V^-2*W^2][U^-2*V^2*W^-2]")
print(normalize(big))
print(normalize(parse_value("[U*V*W][U*V*W]")))

# %% [markdown]
# Graded commutativity holds in general: for homogeneous x, y of degrees
# m, n we get xy = eps^(mn) yx.  A quick spot check on a few words.

# %%
import itertools

words = ["[U]", "[V][W]", "eta*[U][V][W]", "[-1]"]
for a, b in itertools.product(words, repeat=2):
    x, y = parse_value(a), parse_value(b)
    m = next(iter(x.degrees()))
    n = next(iter(y.degrees()))
    sign = parse_value("eps") if (m * n) % 2 else 1
    print(f"{a:16s} {b:16s}", mw_equal(x * y, sign * y * x))
