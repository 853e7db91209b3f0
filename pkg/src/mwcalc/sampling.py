"""Seeded random generators for units, expressions and group elements."""

from __future__ import annotations

import random

from .engine import H, MwExpr, MwMonomial, normalize, symbol
from .fa1 import Fa1Element
from .units import FormalUnit

__all__ = [
    "VARS",
    "random_unit",
    "random_monomial",
    "random_expr",
    "random_degree2",
    "random_fa1",
    "degree2_corpus",
]

VARS = ("U", "V", "W")


def random_unit(rng: random.Random, variables=VARS, max_exp: int = 1, density: float = 0.5) -> FormalUnit:
    exps = []
    for v in variables:
        if rng.random() < density:
            e = rng.randint(-max_exp, max_exp)
            if e:
                exps.append((v, e))
    return FormalUnit(rng.random() < 0.3, tuple(exps))


def random_monomial(
    rng: random.Random, variables=VARS, max_eta: int = 2, max_len: int = 3, degree: int | None = None
) -> MwMonomial:
    if degree is None:
        eta = rng.randint(0, max_eta)
        k = rng.randint(0, max_len)
    else:
        eta = rng.randint(max(0, -degree), max_eta)
        k = degree + eta
    return MwMonomial(eta, tuple(random_unit(rng, variables) for _ in range(k)))


def random_expr(
    rng: random.Random,
    variables=VARS,
    max_terms: int = 3,
    max_eta: int = 2,
    max_len: int = 3,
    max_coeff: int = 3,
    degree: int | None = None,
) -> MwExpr:
    """A raw (unnormalized) sum of random monomials."""
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        m = random_monomial(rng, variables, max_eta, max_len, degree)
        c = rng.choice([c for c in range(-max_coeff, max_coeff + 1) if c])
        terms[m] = terms.get(m, 0) + c
    return MwExpr(terms)


def random_degree2(rng: random.Random, variables=VARS, max_terms: int = 3, max_eta: int = 1) -> MwExpr:
    return normalize(random_expr(rng, variables, max_terms=max_terms, max_eta=max_eta, degree=2))


def random_fa1(rng: random.Random, variables=VARS) -> Fa1Element:
    return Fa1Element(random_degree2(rng, variables, max_terms=2), random_unit(rng, variables))


def degree2_corpus(rng: random.Random, n: int, variables=VARS) -> list[MwExpr]:
    """Degree-2 elements, roughly half of them of the form h*beta."""
    out = []
    for i in range(n):
        beta = random_degree2(rng, variables, max_terms=2)
        if i % 2 == 0:
            out.append(normalize(H * beta))
        elif i % 4 == 1:
            out.append(beta)
        else:
            # a multiple of h plus a perturbation, usually outside h*K2
            x = random_unit(rng, variables)
            y = random_unit(rng, variables)
            out.append(normalize(H * beta + symbol(x) * symbol(y)))
    return out
