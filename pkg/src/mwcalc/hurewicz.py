"""The Hurewicz map of P^1 into K^MW_1 and the automorphism tau of K^MW_2."""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import ETA, MwExpr, NonHomogeneousError, normalize, recombine, symbol, to_symbol_form
from .fa1 import Fa1Element, fa1_mul
from .units import unit_inv

__all__ = [
    "tau",
    "hurewicz_restricted",
    "hurewicz",
    "eta_mul",
    "HomomorphismReport",
    "check_homomorphism",
]


def _degree2(alpha: MwExpr) -> MwExpr:
    if alpha and not alpha.is_homogeneous(2):
        raise NonHomogeneousError(f"expected degree 2, got {sorted(alpha.degrees())}")
    return alpha


def tau(alpha: MwExpr) -> MwExpr:
    """[x][y] -> [x^-1][y] on pure symbols, extended linearly."""
    alpha = _degree2(alpha)
    if not alpha:
        return MwExpr()
    swapped = [(c, (unit_inv(w[0]),) + tuple(w[1:])) for c, w in to_symbol_form(alpha, 2)]
    return normalize(recombine(swapped))


def eta_mul(alpha: MwExpr) -> MwExpr:
    return normalize(ETA * _degree2(alpha))


def hurewicz_restricted(alpha: MwExpr) -> MwExpr:
    """H on the central K^MW_2: multiplication by eta after tau."""
    return normalize(ETA * tau(alpha))


def hurewicz(x: Fa1Element) -> MwExpr:
    """H(alpha * theta(W)) = eta * tau(alpha) + [W]."""
    return normalize(hurewicz_restricted(x.k2_part) + symbol(x.unit_part))


@dataclass
class HomomorphismReport:
    passed: int = 0
    failures: list[tuple[Fa1Element, Fa1Element, MwExpr, MwExpr]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        status = "pass" if self.ok else "FAIL"
        return f"{status}: {self.passed} pairs verified, {len(self.failures)} failures"


def check_homomorphism(pairs) -> HomomorphismReport:
    """Check H(x*y) == H(x) + H(y) on every pair."""
    report = HomomorphismReport()
    for x, y in pairs:
        lhs = hurewicz(fa1_mul(x, y))
        rhs = normalize(hurewicz(x) + hurewicz(y))
        if lhs == rhs:
            report.passed += 1
        else:
            report.failures.append((x, y, lhs, rhs))
    return report
