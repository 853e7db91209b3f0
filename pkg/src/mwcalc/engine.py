"""Symbolic Milnor-Witt K-theory over a generic field.

Elements are integer combinations of monomials ``eta^a [u_1]...[u_k]`` of
degree ``k - a``. :func:`normalize` rewrites to a canonical form using the
rule base below, applied one redex at a time:

    R1  [u*v]        -> [u] + [v] + eta[u][v]      (u the least factor)
    R2  [1]          -> 0
    R7  [x^-1]       -> -[x] - eta[x][-1]
    R4  [b][a]       -> -[a][b] - eta[-1][a][b]    (a < b; i.e. [b][a] = eps[a][b])
    R5  [x][x]       -> [x][-1]
    R6  eta^2[-1]    -> -2 eta                     (eta h = 0)
    R8  eta[-1][-1]  -> -2[-1]                     ([-1] + [-1] + eta[-1][-1] = [1] = 0)

Structural rules (R1, R2, R7) fire first, leftmost bracket first; then
sorting (R4), squares (R5) and the two eta/[-1] contractions (R6, R8).

Normal-form monomials carry atoms only (``-1`` or a bare indeterminate),
``[-1]`` entries first, distinct sorted indeterminates after them, at most
one ``[-1]`` when ``a >= 1`` and none when ``a >= 2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .units import MINUS_ONE, ONE, FormalUnit, unit_inv, unit_key, unit_mul, var

__all__ = [
    "MwMonomial",
    "MwExpr",
    "RewriteStep",
    "RewriteTrace",
    "TermBoundExceeded",
    "NonHomogeneousError",
    "RULES",
    "RULE_CITATIONS",
    "DEFAULT_TERM_BOUND",
    "symbol",
    "bracket",
    "const",
    "ETA",
    "H",
    "EPS",
    "pointed",
    "find_redex",
    "redex_sites",
    "apply_rule",
    "normalize",
    "mw_equal",
    "mw_mul",
    "to_symbol_form",
    "recombine",
    "is_normal",
]

DEFAULT_TERM_BOUND = 100_000

RULES = ("R1", "R2", "R7", "R4", "R5", "R6", "R8")

RULE_CITATIONS = {
    "R1": "[uv] = [u] + [v] + eta[u][v]",
    "R2": "[1] = 0",
    "R7": "[x^-1] = -<x>[x] = -[x] - eta[x][-1]",
    "R4": "[a][b] = eps[b][a], eps = -<-1>",
    "R5": "[x][x] = [x][-1]",
    "R6": "eta h = 0, h = 2 + eta[-1]",
    "R8": "2[-1] + eta[-1][-1] = [(-1)(-1)] = [1] = 0",
}


class TermBoundExceeded(RuntimeError):
    """Expression growth passed the configured term bound."""


class NonHomogeneousError(ValueError):
    pass


class MwMonomial(NamedTuple):
    eta: int
    brackets: tuple[FormalUnit, ...]

    @property
    def degree(self) -> int:
        return len(self.brackets) - self.eta

    def sort_key(self) -> tuple:
        return (self.eta, len(self.brackets), tuple(unit_key(b) for b in self.brackets))

    def render(self) -> str:
        return _render_monomial(self.eta, self.brackets)


@lru_cache(maxsize=100_000)
def _render_monomial(eta: int, brackets: tuple[FormalUnit, ...]) -> str:
    parts = []
    if eta == 1:
        parts.append("eta")
    elif eta > 1:
        parts.append(f"eta^{eta}")
    word = "".join(f"[{b}]" for b in brackets)
    if word:
        parts.append(word)
    return "*".join(parts)


_UNIT_MONOMIAL = MwMonomial(0, ())


class MwExpr:
    """An integer combination of MW monomials.

    Arithmetic on ``MwExpr`` is purely formal (no rewriting); ``==`` compares
    representations. Use :func:`normalize` / :func:`mw_equal` for identities.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[MwMonomial, int] | Iterable[tuple[MwMonomial, int]] = ()):
        acc: dict[MwMonomial, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            if c:
                acc[m] = acc.get(m, 0) + int(c)
        self._terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    @property
    def terms(self) -> Mapping[MwMonomial, int]:
        return self._terms

    def items(self) -> list[tuple[MwMonomial, int]]:
        """Terms in canonical display order."""
        return sorted(self._terms.items(), key=lambda mc: mc[0].sort_key())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator[MwMonomial]:
        return iter(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = const(other)
        if not isinstance(other, MwExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(x) -> "MwExpr":
        if isinstance(x, MwExpr):
            return x
        if isinstance(x, int):
            return const(x)
        raise TypeError(f"cannot use {type(x).__name__} as an MW expression")

    def __add__(self, other) -> "MwExpr":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return MwExpr(out)

    __radd__ = __add__

    def __neg__(self) -> "MwExpr":
        return MwExpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "MwExpr":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MwExpr":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MwExpr":
        if isinstance(other, int):
            return MwExpr({m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        out: dict[MwMonomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = MwMonomial(m1.eta + m2.eta, m1.brackets + m2.brackets)
                out[m] = out.get(m, 0) + c1 * c2
        return MwExpr(out)

    def __rmul__(self, other) -> "MwExpr":
        return self._coerce(other) * self

    def __pow__(self, n: int) -> "MwExpr":
        if n < 0:
            raise ValueError("negative powers are not defined in K^MW")
        out = const(1)
        for _ in range(n):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {m.degree for m in self._terms}

    def degree(self) -> int | None:
        """The common degree of all terms, or None if empty or mixed."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def is_homogeneous(self, n: int) -> bool:
        return all(m.degree == n for m in self._terms)

    def max_eta(self) -> int:
        return max((m.eta for m in self._terms), default=0)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for m in self._terms:
            for b in m.brackets:
                out |= b.variables
        return out

    def render(self) -> str:
        items = self.items()
        if not items:
            return "0"
        chunks = []
        for i, (m, c) in enumerate(items):
            body = m.render()
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if i == 0:
                chunks.append(("-" if c < 0 else "") + text)
            else:
                chunks.append((" - " if c < 0 else " + ") + text)
        return "".join(chunks)

    def to_json(self) -> list[dict]:
        return [
            {"coeff": c, "eta": m.eta, "brackets": [str(b) for b in m.brackets]}
            for m, c in self.items()
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"MwExpr({self.render()!r})"


def const(n: int) -> MwExpr:
    return MwExpr({_UNIT_MONOMIAL: n})


def symbol(u: FormalUnit | str) -> MwExpr:
    """The raw symbol [u], not rewritten."""
    if isinstance(u, str):
        u = var(u)
    return MwExpr({MwMonomial(0, (u,)): 1})


ETA = MwExpr({MwMonomial(1, ()): 1})
H = const(2) + ETA * symbol(MINUS_ONE)
EPS = -(const(1) + ETA * symbol(MINUS_ONE))


def pointed(u: FormalUnit | str) -> MwExpr:
    """<u> = 1 + eta[u]."""
    return const(1) + ETA * symbol(u)


# ---------------------------------------------------------------------------
# rules

Terms = list[tuple[int, MwMonomial]]


def _peel(u: FormalUnit) -> tuple[FormalUnit, FormalUnit]:
    if u.sign:
        f = MINUS_ONE
    else:
        name, e = u.exponents[0]
        f = FormalUnit(False, ((name, 1 if e > 0 else -1),))
    return f, unit_mul(u, unit_inv(f))


def _is_inverse_atom(u: FormalUnit) -> bool:
    return not u.sign and len(u.exponents) == 1 and u.exponents[0][1] == -1


def redex_sites(m: MwMonomial, rule: str) -> list[int]:
    """Every bracket position at which ``rule`` applies to ``m``."""
    b = m.brackets
    n = len(b)
    if rule == "R1":
        return [i for i in range(n) if not b[i].is_one and not b[i].is_atom and not _is_inverse_atom(b[i])]
    if rule == "R2":
        return [i for i in range(n) if b[i].is_one]
    if rule == "R7":
        return [i for i in range(n) if _is_inverse_atom(b[i])]
    if rule == "R4":
        return [i for i in range(n - 1) if unit_key(b[i]) > unit_key(b[i + 1])]
    if rule == "R5":
        return [i for i in range(n - 1) if b[i] == b[i + 1] and b[i].is_indeterminate]
    if rule == "R6":
        if m.eta < 2:
            return []
        return [i for i in range(n) if b[i].is_minus_one]
    if rule == "R8":
        if m.eta < 1:
            return []
        ones = [i for i in range(n) if b[i].is_minus_one]
        return ones if len(ones) >= 2 else []
    raise KeyError(rule)


def find_redex(m: MwMonomial) -> tuple[str, int] | None:
    """The redex the normalization strategy rewrites next, or None."""
    b = m.brackets
    for i, u in enumerate(b):
        if u.is_one:
            return ("R2", i)
        if u.is_atom:
            continue
        return ("R7", i) if _is_inverse_atom(u) else ("R1", i)
    for rule in ("R4", "R5", "R6", "R8"):
        sites = redex_sites(m, rule)
        if sites:
            return (rule, sites[0])
    return None


def apply_rule(m: MwMonomial, rule: str, site: int) -> Terms:
    """Rewrite ``m`` once by ``rule`` at bracket position ``site``."""
    if site not in redex_sites(m, rule):
        raise ValueError(f"{rule} does not apply at {site} in {m.render()}")
    a, b = m.eta, m.brackets
    left, right = b[:site], b[site + 1:]
    if rule == "R1":
        f, rest = _peel(b[site])
        return [
            (1, MwMonomial(a, left + (f,) + right)),
            (1, MwMonomial(a, left + (rest,) + right)),
            (1, MwMonomial(a + 1, left + (f, rest) + right)),
        ]
    if rule == "R2":
        return []
    if rule == "R7":
        x = unit_inv(b[site])
        return [
            (-1, MwMonomial(a, left + (x,) + right)),
            (-1, MwMonomial(a + 1, left + (x, MINUS_ONE) + right)),
        ]
    if rule == "R4":
        swapped = b[:site] + (b[site + 1], b[site]) + b[site + 2:]
        return [(-1, MwMonomial(a, swapped)), (-1, MwMonomial(a + 1, (MINUS_ONE,) + swapped))]
    if rule == "R5":
        return [(1, MwMonomial(a, b[: site + 1] + (MINUS_ONE,) + b[site + 2:]))]
    if rule in ("R6", "R8"):
        return [(-2, MwMonomial(a - 1, left + right))]
    raise KeyError(rule)


def _step(m: MwMonomial) -> tuple[str, int, Terms] | None:
    r = find_redex(m)
    if r is None:
        return None
    rule, site = r
    return rule, site, apply_rule(m, rule, site)


def is_normal(e: MwExpr) -> bool:
    return all(find_redex(m) is None for m in e)


# ---------------------------------------------------------------------------
# normalization

_NF_CACHE: dict[MwMonomial, tuple[tuple[MwMonomial, int], ...]] = {}
_NF_CACHE_LIMIT = 500_000


def _monomial_nf(m: MwMonomial, term_bound: int) -> tuple[tuple[MwMonomial, int], ...]:
    hit = _NF_CACHE.get(m)
    if hit is not None:
        return hit
    if len(m.brackets) > 1 and not all(b.is_atom for b in m.brackets):
        return _factorwise_nf(m, term_bound)
    return _rewrite_nf(m, term_bound)


def _factorwise_nf(m: MwMonomial, term_bound: int) -> tuple[tuple[MwMonomial, int], ...]:
    # Normal forms are unique, so expanding one bracket at a time and
    # re-normalizing the partial product reaches the same result while
    # keeping intermediate expressions small.
    acc: dict[MwMonomial, int] = {MwMonomial(m.eta, ()): 1}
    for b in m.brackets:
        factor = _monomial_nf(MwMonomial(0, (b,)), term_bound)
        nxt: dict[MwMonomial, int] = {}
        for m1, c1 in acc.items():
            for m2, c2 in factor:
                prod = MwMonomial(m1.eta + m2.eta, m1.brackets + m2.brackets)
                for m3, c3 in _monomial_nf(prod, term_bound):
                    nxt[m3] = nxt.get(m3, 0) + c1 * c2 * c3
        acc = {k: v for k, v in nxt.items() if v}
        if len(acc) > term_bound:
            raise TermBoundExceeded(f"normal form of {m.render()} exceeds {term_bound} terms")
    result = tuple(acc.items())
    _NF_CACHE[m] = result
    return result


def _rewrite_nf(m: MwMonomial, term_bound: int) -> tuple[tuple[MwMonomial, int], ...]:
    local: dict[MwMonomial, tuple[tuple[MwMonomial, int], ...]] = {}

    def known(x):
        r = local.get(x)
        return r if r is not None else _NF_CACHE.get(x)

    stack = [m]
    pending: dict[MwMonomial, Terms] = {}
    steps = 0
    while stack:
        top = stack[-1]
        if known(top) is not None:
            stack.pop()
            continue
        children = pending.get(top)
        if children is None:
            st = _step(top)
            steps += 1
            if steps > term_bound:
                raise TermBoundExceeded(f"more than {term_bound} rewrite steps for {m.render()}")
            if st is None:
                local[top] = ((top, 1),)
                stack.pop()
                continue
            children = st[2]
            pending[top] = children
        missing = [c for _, c in children if known(c) is None]
        if missing:
            if len(stack) > term_bound:
                raise TermBoundExceeded(f"rewrite depth exceeded {term_bound}")
            stack.extend(missing)
            continue
        acc: dict[MwMonomial, int] = {}
        for coeff, child in children:
            for mono, c in known(child):
                acc[mono] = acc.get(mono, 0) + coeff * c
        result = tuple((k, v) for k, v in acc.items() if v)
        if len(result) > term_bound:
            raise TermBoundExceeded(f"normal form of {m.render()} exceeds {term_bound} terms")
        local[top] = result
        del pending[top]
        stack.pop()
    if len(_NF_CACHE) > _NF_CACHE_LIMIT:
        _NF_CACHE.clear()
    _NF_CACHE.update(local)
    return local[m] if m in local else _NF_CACHE[m]


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    site: tuple[str, int]
    before: MwExpr
    after: MwExpr
    citation: str
    monomial: MwMonomial | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "monomial": self.site[0],
            "position": self.site[1],
            "before": self.before.render(),
            "after": self.after.render(),
            "citation": self.citation,
        }

    def __str__(self) -> str:
        mono, pos = self.site
        return f"{self.rule} on {mono} @{pos}: {self.after}    ({self.citation})"


@dataclass
class RewriteTrace:
    steps: list[RewriteStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def replay(self, start: MwExpr) -> MwExpr:
        """Re-apply every recorded step to ``start``, checking each ``before``."""
        cur = start
        for st in self.steps:
            if cur != st.before:
                raise ValueError(f"trace does not replay at {st.rule}: {cur} != {st.before}")
            mono = st.monomial if st.monomial in cur.terms else _parse_site_monomial(cur, st.site[0])
            coeff = cur.terms[mono]
            out = dict(cur.terms)
            del out[mono]
            for c, child in apply_rule(mono, st.rule, st.site[1]):
                out[child] = out.get(child, 0) + coeff * c
            cur = MwExpr(out)
        return cur

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def _parse_site_monomial(e: MwExpr, text: str) -> MwMonomial:
    for m in e:
        if m.render() == text or (not m.render() and text == "1"):
            return m
    raise ValueError(f"no monomial {text!r} in {e}")


def _normalize_traced(e: MwExpr, term_bound: int) -> tuple[MwExpr, RewriteTrace]:
    trace = RewriteTrace()
    cur = e
    while True:
        target = None
        for m, _ in cur.items():
            r = find_redex(m)
            if r is not None:
                target = (m, r)
                break
        if target is None:
            return cur, trace
        m, (rule, site) = target
        coeff = cur.terms[m]
        out = dict(cur.terms)
        del out[m]
        for c, child in apply_rule(m, rule, site):
            out[child] = out.get(child, 0) + coeff * c
        nxt = MwExpr(out)
        if len(nxt) > term_bound or len(trace) > term_bound:
            raise TermBoundExceeded(f"traced normalization exceeded bound {term_bound}")
        trace.steps.append(RewriteStep(rule, (m.render() or "1", site), cur, nxt, RULE_CITATIONS[rule], m))
        cur = nxt


def normalize(e: MwExpr | int, trace: bool = False, term_bound: int = DEFAULT_TERM_BOUND):
    """Rewrite ``e`` to its normal form.

    With ``trace=True`` returns ``(normal_form, RewriteTrace)``; the traced
    path rewrites the whole expression one step at a time and reaches the
    same result as the memoized per-monomial path.
    """
    e = MwExpr._coerce(e)
    if trace:
        return _normalize_traced(e, term_bound)
    acc: dict[MwMonomial, int] = {}
    for m, c in e.terms.items():
        for mono, d in _monomial_nf(m, term_bound):
            acc[mono] = acc.get(mono, 0) + c * d
        if len(acc) > term_bound:
            raise TermBoundExceeded(f"expression exceeds {term_bound} terms")
    return MwExpr(acc)


def mw_equal(a: MwExpr | int, b: MwExpr | int, term_bound: int = DEFAULT_TERM_BOUND) -> bool:
    return not normalize(MwExpr._coerce(a) - MwExpr._coerce(b), term_bound=term_bound)


def mw_mul(a: MwExpr | int, b: MwExpr | int, term_bound: int = DEFAULT_TERM_BOUND) -> MwExpr:
    return normalize(MwExpr._coerce(a) * MwExpr._coerce(b), term_bound=term_bound)


def bracket(u: FormalUnit | str) -> MwExpr:
    """Normal form of the symbol [u]."""
    return normalize(symbol(u))


# ---------------------------------------------------------------------------
# pure-symbol form

Symbols = list[tuple[int, tuple[FormalUnit, ...]]]


def to_symbol_form(e: MwExpr, n: int) -> Symbols:
    """Rewrite a degree-``n`` expression as a combination of eta-free symbols.

    Uses eta[u][v] = [uv] - [u] - [v] on the two leftmost brackets until no
    eta is left. Symbols containing [1] are dropped.
    """
    if n < 1:
        raise ValueError("symbol form needs degree >= 1")
    if not e.is_homogeneous(n):
        raise NonHomogeneousError(f"expected degree {n}, got degrees {sorted(e.degrees())}")
    work: dict[MwMonomial, int] = dict(e.terms)
    out: dict[tuple[FormalUnit, ...], int] = {}
    while work:
        m, c = work.popitem()
        if any(u.is_one for u in m.brackets):
            continue
        if m.eta == 0:
            out[m.brackets] = out.get(m.brackets, 0) + c
            continue
        u, v, rest = m.brackets[0], m.brackets[1], m.brackets[2:]
        for sign, head in ((1, unit_mul(u, v)), (-1, u), (-1, v)):
            key = MwMonomial(m.eta - 1, (head,) + rest)
            work[key] = work.get(key, 0) + sign * c
            if not work[key]:
                del work[key]
    return sorted(((c, w) for w, c in out.items() if c), key=lambda cw: tuple(unit_key(u) for u in cw[1]))


def recombine(symbols: Sequence[tuple[int, Sequence[FormalUnit]]]) -> MwExpr:
    return MwExpr((MwMonomial(0, tuple(w)), c) for c, w in symbols)
