"""Concrete field backends, quadratic forms, and probe homomorphisms.

Finite fields ``F_q`` (odd ``q``) encode elements as integers ``0..q-1``
(base-``p`` digits are polynomial coefficients). The real backend ``R``
keeps only signs, which is all that quadratic-form invariants over the
reals see.

Probes map MW expressions into Witt rings. A monomial
``eta^a [u_1]...[u_k]`` goes to the product of ``<u_i> - 1``; eta goes to 1.
The ``residue_probe`` instead goes through Milnor K-theory (eta -> 0) of
``F_q((t))`` and applies the tame symbol, which sees multiples of ``h``
that every Witt-valued probe kills.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .engine import MwExpr
from .units import FormalUnit

__all__ = [
    "FiniteField",
    "RealSigns",
    "UnsupportedBackendError",
    "MissingAssignmentError",
    "get_backend",
    "finite_field",
    "QForm",
    "GwClass",
    "WittClass",
    "qform_classify",
    "qform_equiv_bruteforce",
    "is_anisotropic_bruteforce",
    "witt_reduce",
    "witt_zero",
    "pfister_class",
    "probe",
    "residue_probe",
    "evaluate_unit",
    "random_assignment",
    "random_residue_assignment",
    "CONVENTIONS",
]


class UnsupportedBackendError(ValueError):
    pass


class MissingAssignmentError(KeyError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0 and _is_prime(p):
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return p, k
    raise UnsupportedBackendError(f"{q} is not a prime power")


class FiniteField:
    """GF(p^k) with log/antilog tables; only meant for tiny q."""

    def __init__(self, q: int):
        p, k = _prime_power(q)
        if p == 2:
            raise UnsupportedBackendError("characteristic 2 is not supported")
        self.q, self.p, self.k = q, p, k
        self.id = f"F{q}"
        self.zero, self.one = 0, 1
        self._modulus = self._find_modulus()
        self._mul = [[self._poly_mul(a, b) for b in range(q)] for a in range(q)]
        self._exp, self._log = self._log_tables()

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def _from_digits(self, ds) -> int:
        return sum((d % self.p) * self.p**i for i, d in enumerate(ds))

    def _find_modulus(self) -> list[int] | None:
        if self.k == 1:
            return None
        if self.k > 3:
            raise UnsupportedBackendError("extension degree above 3 is not supported")
        p, k = self.p, self.k
        for tail in itertools.product(range(p), repeat=k):
            poly = list(tail) + [1]  # monic degree k, low coefficients first
            if poly[0] == 0:
                continue
            # no roots means irreducible for degree <= 3
            if all(sum(c * x**i for i, c in enumerate(poly)) % p for x in range(p)):
                return poly
        raise UnsupportedBackendError(f"no irreducible polynomial for q={self.q}")

    def _poly_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        mod = self._modulus
        for deg in range(len(prod) - 1, self.k - 1, -1):
            c = prod[deg] % self.p
            if c:
                for i, m in enumerate(mod):
                    prod[deg - self.k + i] -= c * m
        return self._from_digits(prod[: self.k])

    def _log_tables(self):
        for g in range(2, self.q):
            seen, x = [], 1
            for _ in range(self.q - 1):
                seen.append(x)
                x = self._mul[x][g]
            if len(set(seen)) == self.q - 1:
                exp = seen
                log = {v: i for i, v in enumerate(exp)}
                return exp, log
        raise UnsupportedBackendError("no primitive element found")

    # field operations -------------------------------------------------
    def canonical(self, a: int) -> int:
        a = int(a)
        if self.k == 1:
            return a % self.p
        if a < 0:
            return self.neg(self.canonical(-a))
        if a >= self.q:
            raise ValueError(f"{a} is not an element code of {self.id}")
        return a

    def is_zero(self, a: int) -> bool:
        return a == 0

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self._from_digits([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self._from_digits([-x for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def log(self, a: int) -> int:
        return self._log[a]

    @property
    def generator(self) -> int:
        return self._exp[1]

    def elements(self) -> list[int]:
        return list(range(self.q))

    def units(self) -> list[int]:
        return list(range(1, self.q))

    def is_square(self, a: int) -> bool:
        return a == 0 or self._log[a] % 2 == 0

    @property
    def nonsquare(self) -> int:
        return min(u for u in self.units() if not self.is_square(u))

    def render(self, a: int) -> str:
        return str(a)

    def __repr__(self) -> str:
        return f"FiniteField({self.q})"


class RealSigns:
    """The reals, up to squares: a unit is its sign."""

    id = "R"
    one = 1
    zero = 0

    def canonical(self, a) -> int:
        if isinstance(a, str):
            a = {"+": 1, "-": -1}[a]
        a = int(a)
        return (a > 0) - (a < 0)

    def is_zero(self, a: int) -> bool:
        return a == 0

    def mul(self, a: int, b: int) -> int:
        return a * b

    def inv(self, a: int) -> int:
        return a

    def neg(self, a: int) -> int:
        return -a

    def is_square(self, a: int) -> bool:
        return a > 0

    def units(self) -> list[int]:
        return [1, -1]

    def render(self, a: int) -> str:
        return "+" if a > 0 else "-"

    def __repr__(self) -> str:
        return "RealSigns()"


@lru_cache(maxsize=None)
def finite_field(q: int) -> FiniteField:
    return FiniteField(q)


_REAL = RealSigns()


def get_backend(backend_id: str):
    if backend_id == "R":
        return _REAL
    if isinstance(backend_id, str) and backend_id.startswith("F") and backend_id[1:].isdigit():
        return finite_field(int(backend_id[1:]))
    raise UnsupportedBackendError(f"unknown field {backend_id!r}")


# ---------------------------------------------------------------------------
# quadratic forms

@dataclass(frozen=True)
class QForm:
    backend: str
    entries: tuple[int, ...]

    def __post_init__(self):
        b = get_backend(self.backend)
        ents = tuple(b.canonical(a) for a in self.entries)
        if any(b.is_zero(a) for a in ents):
            raise ValueError("diagonal entries must be nonzero")
        object.__setattr__(self, "entries", ents)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __add__(self, other: "QForm") -> "QForm":
        if other.backend != self.backend:
            raise UnsupportedBackendError("forms over different fields")
        return QForm(self.backend, self.entries + other.entries)

    def __mul__(self, other: "QForm") -> "QForm":
        b = get_backend(self.backend)
        return QForm(self.backend, tuple(b.mul(x, y) for x in self.entries for y in other.entries))

    def __neg__(self) -> "QForm":
        b = get_backend(self.backend)
        return QForm(self.backend, tuple(b.neg(x) for x in self.entries))

    def value(self, v: Sequence[int]) -> int:
        F = get_backend(self.backend)
        acc = 0
        for a, x in zip(self.entries, v):
            acc = F.add(acc, F.mul(a, F.mul(x, x)))
        return acc

    def __str__(self) -> str:
        b = get_backend(self.backend)
        return "<" + ", ".join(b.render(a) for a in self.entries) + ">"


@dataclass(frozen=True)
class GwClass:
    rank: int
    disc: int
    signature: int | None = None


def _det(f: QForm) -> int:
    F = get_backend(f.backend)
    d = F.one
    for a in f.entries:
        d = F.mul(d, a)
    return d


def qform_classify(f: QForm) -> GwClass:
    """Isometry invariants: (rank, discriminant) over F_q, plus signature over R."""
    F = get_backend(f.backend)
    if isinstance(F, RealSigns):
        pos = sum(1 for a in f.entries if a > 0)
        neg = f.rank - pos
        return GwClass(f.rank, _det(f), pos - neg)
    d = _det(f)
    return GwClass(f.rank, 1 if F.is_square(d) else F.nonsquare)


def _bilinear(F, entries, x, y) -> int:
    acc = 0
    for a, xi, yi in zip(entries, x, y):
        acc = F.add(acc, F.mul(a, F.mul(xi, yi)))
    return acc


def _isometric(F, f_entries, g_entries) -> bool:
    n = len(f_entries)
    if n != len(g_entries):
        return False
    vectors = list(itertools.product(F.elements(), repeat=n))
    norms: dict[int, list] = {}
    for v in vectors:
        norms.setdefault(_bilinear(F, f_entries, v, v), []).append(v)

    def search(chosen):
        i = len(chosen)
        if i == n:
            return True
        for v in norms.get(g_entries[i], ()):
            if all(_bilinear(F, f_entries, v, w) == 0 for w in chosen):
                if search(chosen + [v]):
                    return True
        return False

    return search([])


def qform_equiv_bruteforce(f: QForm, g: QForm) -> bool:
    """Exhaustive search for an isometry (an orthogonal basis of f with g's norms).

    Orthogonal vectors with nonzero norms are automatically independent, so
    any hit is an invertible change of variables.
    """
    F = get_backend(f.backend)
    if not isinstance(F, FiniteField) or g.backend != f.backend:
        raise UnsupportedBackendError("brute force needs a single finite field")
    if F.q > 7 or max(f.rank, g.rank) > 3:
        raise ValueError("brute force is limited to rank <= 3 over q <= 7")
    return _isometric(F, f.entries, g.entries)


def is_anisotropic_bruteforce(f: QForm) -> bool:
    F = get_backend(f.backend)
    for v in itertools.product(F.elements(), repeat=f.rank):
        if any(v) and f.value(v) == 0:
            return False
    return True


@dataclass(frozen=True)
class WittClass:
    """A Witt class: anisotropic representative over F_q, signature over R."""

    backend: str
    rep: tuple[int, ...] | int

    @property
    def is_zero(self) -> bool:
        return self.rep == () or self.rep == 0

    def __add__(self, other: "WittClass") -> "WittClass":
        if other.backend != self.backend:
            raise UnsupportedBackendError("Witt classes over different fields")
        if self.backend == "R":
            return WittClass("R", self.rep + other.rep)
        return witt_reduce(QForm(self.backend, self.rep + other.rep))

    def __neg__(self) -> "WittClass":
        if self.backend == "R":
            return WittClass("R", -self.rep)
        return witt_reduce(-QForm(self.backend, self.rep))

    def __sub__(self, other: "WittClass") -> "WittClass":
        return self + (-other)

    def __mul__(self, n) -> "WittClass":
        if isinstance(n, WittClass):
            return witt_reduce(self.form() * n.form())
        if self.backend == "R":
            return WittClass("R", self.rep * n)
        out, base, k = witt_zero(self.backend), (self if n >= 0 else -self), abs(n)
        while k:
            if k & 1:
                out = out + base
            base = base + base
            k >>= 1
        return out

    __rmul__ = __mul__

    def form(self) -> QForm:
        if self.backend == "R":
            s = self.rep
            return QForm("R", (1,) * s if s >= 0 else (-1,) * (-s))
        return QForm(self.backend, self.rep)

    def __str__(self) -> str:
        if self.backend == "R":
            return f"sig {self.rep}"
        return str(self.form()) if self.rep else "0"


def witt_zero(backend: str) -> WittClass:
    return WittClass(backend, 0 if backend == "R" else ())


def witt_reduce(f: QForm) -> WittClass:
    """Strip hyperbolic planes; returns the canonical anisotropic class."""
    F = get_backend(f.backend)
    if isinstance(F, RealSigns):
        return WittClass("R", qform_classify(f).signature)
    r = f.rank
    sd = _det(f)
    if (r * (r - 1) // 2) % 2:
        sd = F.neg(sd)
    square = F.is_square(sd)
    n = F.nonsquare
    if r % 2 == 0:
        return WittClass(f.backend, () if square else (1, F.neg(n)))
    return WittClass(f.backend, (1,) if square else (n,))


# ---------------------------------------------------------------------------
# probes

def evaluate_unit(u: FormalUnit, assignment: Mapping[str, int], backend: str) -> int:
    F = get_backend(backend)
    out = F.one
    if u.sign:
        out = F.neg(out)
    for name, e in u.exponents:
        if name not in assignment:
            raise MissingAssignmentError(name)
        x = F.canonical(assignment[name])
        if e < 0:
            x = F.inv(x)
        for _ in range(abs(e)):
            out = F.mul(out, x)
    return out


# Image of [u] in W as a signed pair (sign on <u>, sign on <1>).
CONVENTIONS = {
    "standard": (1, -1),  # [u] -> <u> - 1 = <-1, u>
    "pfister": (-1, 1),  # [u] -> <1, -u> = 1 - <u>
}


def pfister_class(values: Sequence[int], backend: str, convention: str = "standard") -> WittClass:
    """Witt class of the product of the images of [v] for v in ``values``."""
    F = get_backend(backend)
    su, s1 = CONVENTIONS[convention]
    entries = []
    for subset in itertools.product((0, 1), repeat=len(values)):
        d = F.one
        sign = 1
        for take, v in zip(subset, values):
            if take:
                d = F.mul(d, v)
                sign *= su
            else:
                sign *= s1
        entries.append(d if sign > 0 else F.neg(d))
    return witt_reduce(QForm(backend, tuple(entries)))


def probe(
    e: MwExpr,
    assignment: Mapping[str, int],
    backend: str,
    convention: str = "standard",
) -> WittClass:
    """Witt-ring image of ``e`` with eta -> 1 and each indeterminate evaluated."""
    out = witt_zero(backend)
    for m, c in e.terms.items():
        values = [evaluate_unit(b, assignment, backend) for b in m.brackets]
        out = out + c * pfister_class(values, backend, convention)
    return out


def residue_probe(e: MwExpr, assignment: Mapping[str, tuple[int, int]], q: int):
    """Tame-symbol image of a homogeneous ``e`` over ``F_q((t))``.

    Each indeterminate is assigned ``(valuation, leading coefficient)``.
    Eta-carrying terms vanish (Milnor K-theory). Degree 1 returns
    ``(valuation, log of leading coefficient)``; degree 2 returns the
    discrete log of the tame symbol; other degrees return the rank-like
    integer part (degree 0) or 0.
    """
    F = finite_field(q)
    n = e.degree()
    if e and n is None:
        raise ValueError("residue probe needs a homogeneous expression")

    def unit(u: FormalUnit) -> tuple[int, int]:
        v, c = 0, F.one
        if u.sign:
            c = F.neg(c)
        for name, k in u.exponents:
            if name not in assignment:
                raise MissingAssignmentError(name)
            vv, cc = assignment[name]
            cc = F.canonical(cc)
            v += k * vv
            c = F.mul(c, F.pow(cc, k))
        return v, c

    order = q - 1
    if n == 0:
        return sum(c for m, c in e.terms.items() if m.eta == 0)
    if n == 1:
        val, lg = 0, 0
        for m, c in e.terms.items():
            if m.eta:
                continue
            v, u = unit(m.brackets[0])
            val += c * v
            lg += c * F.log(u)
        return (val, lg % order)
    if n == 2:
        lg = 0
        for m, c in e.terms.items():
            if m.eta:
                continue
            (va, ca), (vb, cb) = unit(m.brackets[0]), unit(m.brackets[1])
            sym = F.mul(F.pow(ca, vb), F.inv(F.pow(cb, va)))
            if (va * vb) % 2:
                sym = F.neg(sym)
            lg += c * F.log(sym)
        return lg % order
    return 0


def random_assignment(variables, backend: str, rng: random.Random) -> dict[str, int]:
    F = get_backend(backend)
    units = F.units()
    return {v: rng.choice(units) for v in sorted(variables)}


def random_residue_assignment(variables, q: int, rng: random.Random, max_val: int = 2) -> dict[str, tuple[int, int]]:
    F = finite_field(q)
    return {v: (rng.randint(-max_val, max_val), rng.choice(F.units())) for v in sorted(variables)}
