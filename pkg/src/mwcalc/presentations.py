"""Finitely presented abelian groups and finite-field K-theory by brute force.

Matrices are numpy ``object`` arrays of Python ints so entries never
overflow. Groups are ``Z^gens / rowspace(relations)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "IntMatrix",
    "int_matrix",
    "SmithForm",
    "smith_normal_form",
    "solve_integer_system",
    "BoundError",
    "FinPresAbGroup",
    "milnor_k2",
    "milnor_kn",
    "fundamental_ideal_power",
    "kmw_finite_field",
    "kmw2_finite_field",
    "eta_sequence_exactness_finite",
    "BruteWittRing",
    "brute_witt_ring",
    "KmwModel",
    "ExactnessReport",
]

IntMatrix = np.ndarray


class BoundError(ValueError):
    """Input outside the sizes the brute-force routines accept."""


def int_matrix(rows, shape: tuple[int, int] | None = None) -> IntMatrix:
    a = np.array(rows, dtype=object)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        if a.size == 0 and shape is None:
            return np.zeros((0, 0), dtype=object)
        raise ValueError("expected a 2-d integer matrix")
    return np.vectorize(int, otypes=[object])(a) if a.size else a


def _eye(n: int) -> IntMatrix:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


class SmithForm(NamedTuple):
    S: IntMatrix
    D: IntMatrix
    T: IntMatrix
    T_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(m) -> SmithForm:
    """Return unimodular ``S``, ``T`` with ``S @ m @ T == D`` diagonal.

    The diagonal is non-negative and each entry divides the next.
    ``T_inv`` is the exact inverse of ``T``.
    """
    A = np.array(m, dtype=object).copy()
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = A.shape
    S, T, Ti = _eye(rows), _eye(cols), _eye(cols)

    def swap_rows(i, j):
        if i != j:
            A[[i, j]] = A[[j, i]]
            S[[i, j]] = S[[j, i]]

    def swap_cols(i, j):
        if i != j:
            A[:, [i, j]] = A[:, [j, i]]
            T[:, [i, j]] = T[:, [j, i]]
            Ti[[i, j]] = Ti[[j, i]]

    for t in range(min(rows, cols)):
        while True:
            sub = A[t:, t:]
            nz = np.argwhere(sub != 0)
            if len(nz) == 0:
                break
            i, j = min(nz, key=lambda ij: abs(sub[ij[0], ij[1]]))
            swap_rows(t, t + i)
            swap_cols(t, t + j)
            p = A[t, t]
            clean = True
            for i in np.nonzero(A[t + 1:, t])[0] + t + 1:
                q = A[i, t] // p
                A[i] -= q * A[t]
                S[i] -= q * S[t]
                if A[i, t]:
                    clean = False
            for j in np.nonzero(A[t, t + 1:])[0] + t + 1:
                q = A[t, j] // p
                A[:, j] -= q * A[:, t]
                T[:, j] -= q * T[:, t]
                Ti[t] += q * Ti[j]
                if A[t, j]:
                    clean = False
            if not clean:
                continue
            rest = A[t + 1:, t + 1:]
            bad = np.argwhere(rest % p != 0) if rest.size else []
            if len(bad) == 0:
                break
            i = bad[0][0] + t + 1
            A[t] += A[i]
            S[t] += S[i]
        if A[t, t] < 0:
            A[t] = -A[t]
            S[t] = -S[t]
    return SmithForm(S, A, T, Ti)


def solve_integer_system(A, b) -> list[int] | None:
    """An integer solution ``x`` of ``A @ x == b``, or None if none exists."""
    A = np.array(A, dtype=object)
    rows, cols = A.shape
    b = np.array(list(b), dtype=object)
    if b.shape != (rows,):
        raise ValueError("right-hand side has the wrong length")
    if cols == 0:
        return [] if all(v == 0 for v in b) else None
    snf = smith_normal_form(A)
    c = snf.S.dot(b)
    y = np.zeros(cols, dtype=object)
    diag = snf.diagonal
    for i in range(rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return [int(v) for v in snf.T.dot(y)]


@dataclass
class FinPresAbGroup:
    """``Z^len(generators) / rowspace(relations)``."""

    generators: list[Hashable]
    relations: IntMatrix = field(default=None)

    def __post_init__(self):
        n = len(self.generators)
        if self.relations is None or np.size(self.relations) == 0:
            self.relations = np.zeros((0, n), dtype=object)
        else:
            self.relations = np.array(self.relations, dtype=object).reshape(-1, n)
        self._index = {g: i for i, g in enumerate(self.generators)}

    @cached_property
    def smith(self) -> SmithForm:
        n = len(self.generators)
        if self.relations.shape[0] == 0:
            return SmithForm(np.zeros((0, 0), dtype=object), self.relations, _eye(n), _eye(n))
        return smith_normal_form(self.relations)

    @cached_property
    def _moduli(self) -> list[int]:
        # modulus per coordinate of x @ T: d_i, or 0 (free) past the rank
        n = len(self.generators)
        diag = self.smith.diagonal
        return [diag[i] if i < len(diag) else 0 for i in range(n)]

    @property
    def invariants(self) -> list[int]:
        """Torsion invariant factors (all > 1), in divisibility order."""
        return [d for d in self._moduli if d > 1]

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self._moduli if d == 0)

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariants:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def vector(self, word) -> np.ndarray:
        """Coerce a generator label, a dict label->int, or a numpy int vector."""
        n = len(self.generators)
        if isinstance(word, np.ndarray):
            if word.shape != (n,):
                raise ValueError("vector has the wrong length")
            return np.array([int(x) for x in word], dtype=object)
        v = np.zeros(n, dtype=object)
        if isinstance(word, dict):
            for g, c in word.items():
                v[self._index[g]] += c
        else:
            v[self._index[word]] = 1
        return v

    def coords(self, word) -> tuple[int, ...]:
        """Canonical coordinates in ``Z/d_1 + ... + Z^r`` (d_i > 1 or free)."""
        y = self.vector(word).dot(self.smith.T) if len(self.generators) else np.zeros(0, dtype=object)
        out = []
        for yi, d in zip(y, self._moduli):
            if d == 1:
                continue
            out.append(int(yi % d) if d else int(yi))
        return tuple(out)

    def is_zero(self, word) -> bool:
        return all(c == 0 for c in self.coords(word))

    def lift(self, coords: Sequence[int]) -> np.ndarray:
        full = np.zeros(len(self.generators), dtype=object)
        it = iter(coords)
        for i, d in enumerate(self._moduli):
            if d != 1:
                full[i] = next(it)
        return full.dot(self.smith.T_inv)

    def elements(self) -> list[tuple[int, ...]]:
        if self.free_rank:
            raise BoundError("group is infinite")
        return list(itertools.product(*[range(d) for d in self.invariants]))

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariants] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], add: Callable) -> "FinPresAbGroup":
        """Present a finite abelian group from its element list and addition."""
        index = {e: i for i, e in enumerate(elements)}
        rels = []
        for x in elements:
            for y in elements:
                row = [0] * len(elements)
                row[index[x]] += 1
                row[index[y]] += 1
                row[index[add(x, y)]] -= 1
                rels.append(row)
        return cls(list(elements), np.array(rels, dtype=object).reshape(-1, len(elements)))


# ---------------------------------------------------------------------------
# finite fields

def _check_q(q: int, limit: int):
    from .fields import finite_field

    if q % 2 == 0 or q > limit:
        raise BoundError(f"q must be odd and at most {limit}, got {q}")
    return finite_field(q)


def milnor_k2(q: int) -> FinPresAbGroup:
    """K^M_2(F_q): symbols {u,v} for all unit pairs, bilinearity and Steinberg."""
    F = _check_q(q, 9)
    units = F.units()
    gens = [(u, v) for u in units for v in units]
    idx = {g: i for i, g in enumerate(gens)}
    rels = []
    for a in units:
        for b in units:
            for c in units:
                row = [0] * len(gens)
                row[idx[(F.mul(a, b), c)]] += 1
                row[idx[(a, c)]] -= 1
                row[idx[(b, c)]] -= 1
                rels.append(row)
                row = [0] * len(gens)
                row[idx[(c, F.mul(a, b))]] += 1
                row[idx[(c, a)]] -= 1
                row[idx[(c, b)]] -= 1
                rels.append(row)
    one = F.one
    for u in units:
        w = F.sub(one, u)
        if u != one and not F.is_zero(w):
            row = [0] * len(gens)
            row[idx[(u, w)]] += 1
            rels.append(row)
    return FinPresAbGroup(gens, np.array(rels, dtype=object))


def milnor_kn(q: int, n: int) -> FinPresAbGroup:
    """K^M_n(F_q), presented on the single cyclic generator of (F_q^x)^{(x)n}.

    Multilinearity lets every symbol be written through a fixed primitive
    root ``g``: {g^a1, ..., g^an} = a1...an {g,...,g}. The Steinberg
    relations {.., u, 1-u, ..} then become integer multiples.
    """
    F = _check_q(q, 9)
    if n < 0:
        raise BoundError("negative degree")
    if n == 0:
        return FinPresAbGroup(["1"])
    if n == 1:
        units = F.units()
        idx = {u: i for i, u in enumerate(units)}
        rels = []
        for a in units:
            for b in units:
                row = [0] * len(units)
                row[idx[F.mul(a, b)]] += 1
                row[idx[a]] -= 1
                row[idx[b]] -= 1
                rels.append(row)
        return FinPresAbGroup(list(units), np.array(rels, dtype=object))
    rels = [[q - 1]]
    for u in F.units():
        w = F.sub(F.one, u)
        if u != F.one and not F.is_zero(w):
            rels.append([F.log(u) * F.log(w)])
    return FinPresAbGroup([("g",) * n], np.array(rels, dtype=object))


# ---------------------------------------------------------------------------
# brute-force Witt ring of F_q

def _all_vectors(F, n):
    return list(itertools.product(F.elements(), repeat=n))


def _orthogonal_diagonalization(F, entries, vectors, avoid):
    """Diagonal entries of the form restricted to the complement of ``avoid``."""
    from .fields import _bilinear

    space = [x for x in vectors if all(_bilinear(F, entries, x, y) == 0 for y in avoid)]
    target = len(entries) - len(avoid)
    basis, out = list(avoid), []
    while len(out) < target:
        pick = None
        for x in space:
            norm = _bilinear(F, entries, x, x)
            if norm and all(_bilinear(F, entries, x, y) == 0 for y in basis):
                pick = (x, norm)
                break
        if pick is None:
            raise ArithmeticError("degenerate complement")
        basis.append(pick[0])
        out.append(pick[1])
    return tuple(out)


class BruteWittRing:
    """W(F_q) built by exhaustive search: anisotropic classes and their arithmetic.

    Sums and products are reduced by finding isotropic vectors, splitting off
    the hyperbolic plane they span, and matching the anisotropic remainder
    against the class representatives by brute-force isometry.
    """

    def __init__(self, q: int):
        from .fields import finite_field, is_anisotropic_bruteforce, QForm, _isometric

        self.F = F = finite_field(q)
        self.q = q
        self._isometric = _isometric
        reps: list[tuple[int, ...]] = []
        for r in range(4):
            for entries in itertools.combinations_with_replacement(F.units(), r):
                if r and not is_anisotropic_bruteforce(QForm(F.id, entries)):
                    continue
                if not any(len(x) == r and _isometric(F, x, entries) for x in reps):
                    reps.append(entries)
        self.reps = reps
        self._vectors = {n: _all_vectors(F, n) for n in range(5)}
        self._reduce_cache: dict[tuple[int, ...], tuple[int, ...]] = {}

    @property
    def order(self) -> int:
        return len(self.reps)

    @property
    def zero(self) -> tuple[int, ...]:
        return ()

    @property
    def one(self) -> tuple[int, ...]:
        return self.reduce((1,))

    def reduce(self, entries) -> tuple[int, ...]:
        from .fields import _bilinear

        key = tuple(sorted(entries))
        hit = self._reduce_cache.get(key)
        if hit is not None:
            return hit
        F, cur = self.F, key
        while cur:
            vecs = self._vectors.get(len(cur)) or _all_vectors(F, len(cur))
            iso = next((v for v in vecs if any(v) and _bilinear(F, cur, v, v) == 0), None)
            if iso is None:
                break
            partner = next(w for w in vecs if _bilinear(F, cur, iso, w) != 0)
            cur = _orthogonal_diagonalization(F, cur, vecs, [iso, partner])
        match = next(x for x in self.reps if len(x) == len(cur) and self._isometric(F, x, cur))
        self._reduce_cache[key] = match
        return match

    def add(self, x, y):
        return self.reduce(x + y)

    def neg(self, x):
        return self.reduce(tuple(self.F.neg(a) for a in x))

    def mul(self, x, y):
        return self.reduce(tuple(self.F.mul(a, b) for a in x for b in y))

    def times(self, n: int, x):
        out = self.zero
        base = x if n >= 0 else self.neg(x)
        for _ in range(abs(n)):
            out = self.add(out, base)
        return out

    def pointed(self, u: int):
        return self.reduce((u,))

    def pfister(self, values) -> tuple[int, ...]:
        """Product of <v> - 1 over ``values``; the image of [v_1]...[v_n]."""
        out = self.one
        for v in values:
            out = self.mul(out, self.add(self.pointed(v), self.neg(self.one)))
        return out

    def span(self, generators) -> list[tuple[int, ...]]:
        """Additive closure of ``generators`` (always contains 0)."""
        seen = {self.zero}
        frontier = [self.zero]
        gens = list(dict.fromkeys(generators))
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen, key=lambda t: (len(t), t))

    def ideal_power(self, n: int) -> list[tuple[int, ...]]:
        if n == 0:
            return list(self.reps)
        fundamental = [x for x in self.reps if len(x) % 2 == 0]
        gens = fundamental
        for _ in range(n - 1):
            gens = list({self.mul(a, b) for a in gens for b in fundamental})
        return self.span(gens)


_WITT_RINGS: dict[int, BruteWittRing] = {}


def brute_witt_ring(q: int) -> BruteWittRing:
    if q not in _WITT_RINGS:
        _WITT_RINGS[q] = BruteWittRing(q)
    return _WITT_RINGS[q]


def fundamental_ideal_power(q: int, n: int) -> FinPresAbGroup:
    """I^n(F_q) inside the brute-force Witt ring; I^0 = W."""
    _check_q(q, 7)
    if not 0 <= n <= 3:
        raise BoundError("n must be between 0 and 3")
    W = brute_witt_ring(q)
    return FinPresAbGroup.from_elements(W.ideal_power(n), W.add)


# ---------------------------------------------------------------------------
# K^MW_n(F_q) as the fiber product K^M_n x_{I^n/I^{n+1}} I^n

@dataclass
class KmwModel:
    """Explicit K^MW_n(F_q) for n >= 1 with its eta and h operations."""

    q: int
    n: int
    milnor: FinPresAbGroup
    ideal: list[tuple[int, ...]]
    elements: list[tuple[tuple[int, ...], tuple[int, ...]]]

    @property
    def witt(self) -> BruteWittRing:
        return brute_witt_ring(self.q)

    @property
    def zero(self):
        return (tuple(0 for _ in self.milnor.invariants), ())

    def _milnor_add(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.milnor.invariants))

    def add(self, x, y):
        return (self._milnor_add(x[0], y[0]), self.witt.add(x[1], y[1]))

    def h_times(self, x):
        # h = (2, <1,-1>) in K^M_0 x W
        W = self.witt
        hyperbolic = W.reduce((1, W.F.neg(1)))
        return (self._milnor_add(x[0], x[0]), W.mul(hyperbolic, x[1]))

    @cached_property
    def group(self) -> FinPresAbGroup:
        return FinPresAbGroup.from_elements(self.elements, self.add)

    @property
    def order(self) -> int:
        return len(self.elements)


def _milnor_witt_images(q: int, n: int, K: FinPresAbGroup) -> list:
    W = brute_witt_ring(q)
    F = W.F
    out = []
    for g in K.generators:
        if n == 1:
            out.append(W.pfister([g]))
        elif g and isinstance(g, tuple) and g[0] == "g":
            out.append(W.pfister([F.generator] * n))
        else:
            out.append(W.pfister(list(g)))
    return out


def kmw_finite_field(q: int, n: int) -> KmwModel:
    _check_q(q, 7)
    if not 1 <= n <= 3:
        raise BoundError("degree must be between 1 and 3")
    W = brute_witt_ring(q)
    K = milnor_k2(q) if n == 2 else milnor_kn(q, n)
    In, In1 = W.ideal_power(n), W.ideal_power(n + 1)

    def coset(x):
        return frozenset(W.add(x, y) for y in In1)

    images = _milnor_witt_images(q, n, K)
    elements = []
    for m in K.elements():
        vec = K.lift(m)
        w = W.zero
        for c, img in zip(vec, images):
            w = W.add(w, W.times(int(c), img))
        target = coset(w)
        for x in In:
            if coset(x) == target:
                elements.append((m, x))
    return KmwModel(q, n, K, In, elements)


def kmw2_finite_field(q: int) -> FinPresAbGroup:
    """K^MW_2(F_q) = K^M_2 x_{I^2/I^3} I^2."""
    return kmw_finite_field(q, 2).group


@dataclass
class ExactnessReport:
    q: int
    n: int
    orders: dict[str, int]
    exact: bool
    eta_h_vanishes: bool

    def __str__(self) -> str:
        parts = ", ".join(f"|{k}| = {v}" for k, v in self.orders.items())
        verdict = "exact" if self.exact else "NOT exact"
        return f"F_{self.q}, degree {self.n}: {parts}; ker(eta) = h K_{self.n}: {verdict}"


def eta_sequence_exactness_finite(q: int, n: int = 2) -> ExactnessReport:
    """Check ker(eta: K^MW_n -> K^MW_{n-1}) = h K^MW_n over F_q.

    Degrees other than 2 are experimental.
    """
    if not 2 <= n <= 3:
        raise BoundError("degree must be 2 or 3 (K^MW_0 is infinite)")
    top = kmw_finite_field(q, n)
    below = kmw_finite_field(q, n - 1)
    below_set = set(below.elements)
    below_zero = below.zero

    def eta(x):
        # eta kills the Milnor part and includes I^n into I^(n-1)
        y = (below_zero[0], x[1])
        if y not in below_set:
            raise ArithmeticError("eta left the fiber product")
        return y

    kernel = {x for x in top.elements if eta(x) == below_zero}
    h_image = {top.h_times(x) for x in top.elements}
    orders = {
        f"K^MW_{n}": top.order,
        f"hK^MW_{n}": len(h_image),
        "ker(eta)": len(kernel),
        f"K^MW_{n - 1}": below.order,
        f"K^M_{n}": top.milnor.order,
        f"I^{n}": len(top.ideal),
    }
    eta_h = all(eta(x) == below_zero for x in h_image)
    return ExactnessReport(q, n, orders, kernel == h_image, eta_h)
