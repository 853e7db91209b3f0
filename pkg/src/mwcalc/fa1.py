"""The group F(1) = pi_1^{A^1}(P^1) as pairs (alpha, u) meaning alpha * theta(u).

The group law is

    (a, U) * (b, V) = (a + b + <-1>[U][V], UV)

with the degree-2 part central. Everything else (inverses, commutators, the
relations between theta's) is derived from this law.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .engine import (
    DEFAULT_TERM_BOUND,
    MwExpr,
    MwMonomial,
    NonHomogeneousError,
    H,
    const,
    normalize,
    pointed,
    symbol,
)
from .presentations import solve_integer_system
from .units import MINUS_ONE, ONE, FormalUnit, unit_inv, unit_mul, var

__all__ = [
    "Fa1Element",
    "BasisBoundExceeded",
    "IDENTITY",
    "cocycle",
    "theta",
    "fa1_mul",
    "fa1_inv",
    "fa1_pow",
    "fa1_commutator",
    "fa1_equal",
    "gamma",
    "degree2_basis",
    "hk2_member",
]


class BasisBoundExceeded(RuntimeError):
    """The witness search basis would be larger than allowed."""


@dataclass(frozen=True)
class Fa1Element:
    k2_part: MwExpr
    unit_part: FormalUnit

    def __post_init__(self):
        k2 = normalize(self.k2_part)
        if k2 and not k2.is_homogeneous(2):
            raise NonHomogeneousError(f"k2 part must have degree 2, got {k2}")
        object.__setattr__(self, "k2_part", k2)

    @classmethod
    def central(cls, alpha: MwExpr) -> "Fa1Element":
        return cls(alpha, ONE)

    def __mul__(self, other: "Fa1Element") -> "Fa1Element":
        return fa1_mul(self, other)

    def __pow__(self, n: int) -> "Fa1Element":
        return fa1_pow(self, n)

    def render(self) -> str:
        return f"({self.k2_part.render()}) * theta({self.unit_part})"

    def to_json(self) -> dict:
        return {"k2_part": self.k2_part.to_json(), "unit_part": str(self.unit_part)}

    def __str__(self) -> str:
        return self.render()


IDENTITY = Fa1Element(MwExpr(), ONE)


def cocycle(u: FormalUnit, v: FormalUnit) -> MwExpr:
    """<-1>[u][v], the degree-2 correction in theta(u) theta(v)."""
    return pointed(MINUS_ONE) * symbol(u) * symbol(v)


def theta(u: FormalUnit | str) -> Fa1Element:
    if isinstance(u, str):
        u = var(u)
    return Fa1Element(MwExpr(), u)


def fa1_mul(x: Fa1Element, y: Fa1Element) -> Fa1Element:
    k2 = x.k2_part + y.k2_part + cocycle(x.unit_part, y.unit_part)
    return Fa1Element(k2, unit_mul(x.unit_part, y.unit_part))


def fa1_inv(x: Fa1Element) -> Fa1Element:
    u = x.unit_part
    return Fa1Element(-x.k2_part - cocycle(u, unit_inv(u)), unit_inv(u))


def fa1_pow(x: Fa1Element, n: int) -> Fa1Element:
    base = x if n >= 0 else fa1_inv(x)
    out = IDENTITY
    for _ in range(abs(n)):
        out = fa1_mul(out, base)
    return out


def fa1_commutator(x: Fa1Element, y: Fa1Element) -> Fa1Element:
    return fa1_mul(fa1_mul(x, y), fa1_mul(fa1_inv(x), fa1_inv(y)))


def fa1_equal(x: Fa1Element, y: Fa1Element) -> bool:
    # k2 parts are stored normalized
    return x.unit_part == y.unit_part and x.k2_part == y.k2_part


def gamma(x: Fa1Element) -> FormalUnit:
    return x.unit_part


def degree2_basis(variables, max_eta: int) -> list[MwMonomial]:
    """All degree-2 normal-form monomials on ``variables`` with eta power <= max_eta."""
    names = sorted(variables)
    out = []
    for a in range(max_eta + 1):
        k = a + 2
        max_minus = {0: k, 1: 1}.get(a, 0)
        for j in range(min(k, max_minus) + 1):
            for combo in itertools.combinations(names, k - j):
                out.append(MwMonomial(a, (MINUS_ONE,) * j + tuple(var(n) for n in combo)))
    return out


def hk2_member(
    alpha: MwExpr,
    variables=None,
    eta_slack: int = 2,
    max_basis: int = 2000,
    term_bound: int = DEFAULT_TERM_BOUND,
) -> tuple[bool, MwExpr | None]:
    """Decide whether ``alpha = h * beta`` for an integer combination ``beta``.

    ``beta`` ranges over degree-2 normal-form monomials on ``variables``
    with eta power up to ``max_eta(alpha) + eta_slack``. The coefficient
    system is solved exactly through Smith normal form. Returns
    ``(True, beta)`` or ``(False, None)``.
    """
    alpha = normalize(alpha, term_bound=term_bound)
    if not alpha:
        return True, MwExpr()
    if not alpha.is_homogeneous(2):
        raise NonHomogeneousError(f"expected degree 2, got {sorted(alpha.degrees())}")
    if variables is None:
        variables = alpha.variables()
    missing = alpha.variables() - set(variables)
    if missing:
        raise ValueError(f"alpha uses indeterminates outside the given set: {sorted(missing)}")
    basis = degree2_basis(variables, alpha.max_eta() + eta_slack)
    if len(basis) > max_basis:
        raise BasisBoundExceeded(f"witness basis has {len(basis)} monomials (limit {max_basis})")
    images = [normalize(H * MwExpr({m: 1}), term_bound=term_bound) for m in basis]
    rows = sorted({m for img in images for m in img} | set(alpha), key=lambda m: m.sort_key())
    row_index = {m: i for i, m in enumerate(rows)}
    A = [[0] * len(basis) for _ in rows]
    for j, img in enumerate(images):
        for m, c in img.terms.items():
            A[row_index[m]][j] = c
    b = [0] * len(rows)
    for m, c in alpha.terms.items():
        b[row_index[m]] = c
    x = solve_integer_system(A, b)
    if x is None:
        return False, None
    beta = MwExpr({m: c for m, c in zip(basis, x) if c})
    return True, beta
