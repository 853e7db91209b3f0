"""Milnor-Witt K-theory calculus for the A1-fundamental group of P1."""

from .engine import (
    EPS,
    ETA,
    H,
    MwExpr,
    MwMonomial,
    RewriteTrace,
    TermBoundExceeded,
    bracket,
    const,
    mw_equal,
    mw_mul,
    normalize,
    pointed,
    symbol,
)
from .fa1 import Fa1Element, fa1_commutator, fa1_equal, fa1_inv, fa1_mul, fa1_pow, gamma, hk2_member, theta
from .hurewicz import check_homomorphism, hurewicz, hurewicz_restricted, tau
from .parser import ParseError, parse, parse_value
from .units import MINUS_ONE, ONE, FormalUnit, var

__all__ = [
    "EPS",
    "ETA",
    "H",
    "MwExpr",
    "MwMonomial",
    "RewriteTrace",
    "TermBoundExceeded",
    "bracket",
    "const",
    "mw_equal",
    "mw_mul",
    "normalize",
    "pointed",
    "symbol",
    "Fa1Element",
    "fa1_commutator",
    "fa1_equal",
    "fa1_inv",
    "fa1_mul",
    "fa1_pow",
    "gamma",
    "hk2_member",
    "theta",
    "check_homomorphism",
    "hurewicz",
    "hurewicz_restricted",
    "tau",
    "ParseError",
    "parse",
    "parse_value",
    "MINUS_ONE",
    "ONE",
    "FormalUnit",
    "var",
]
