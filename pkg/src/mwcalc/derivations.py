"""Replayable equality chains, checked one line at a time.

A chain is a list of lines ``lhs = rhs``; a line whose lhs is ``None``
continues from the previous right-hand side.  Text wrapped in ``H( )``
is evaluated as a group element and pushed through the Hurewicz map.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .engine import MwExpr, mw_equal, normalize
from .fa1 import Fa1Element, fa1_equal
from .hurewicz import hurewicz
from .parser import Value, parse_value
from .units import ONE

__all__ = ["Step", "StepResult", "DerivationReport", "DERIVATIONS", "derive", "check_values", "as_group_element"]


@dataclass(frozen=True)
class Step:
    lhs: str | None
    rhs: str
    citation: str


@dataclass
class StepResult:
    lhs: str
    rhs: str
    citation: str
    verified: bool
    lhs_nf: str
    rhs_nf: str

    def __str__(self) -> str:
        mark = "ok  " if self.verified else "FAIL"
        return f"[{mark}] {self.lhs} = {self.rhs}    ({self.citation})"


@dataclass
class DerivationReport:
    name: str
    steps: list[StepResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.verified for s in self.steps)

    @property
    def verified_count(self) -> int:
        return sum(s.verified for s in self.steps)


DERIVATIONS: dict[str, list[Step]] = {
    "lemma-hk2": [
        Step("theta(U)*theta(V)", "<-1>[U][V]*theta(U*V)", "cocycle of the extension"),
        Step(
            "theta(U)*theta(V)*theta(U)^-1*theta(V)^-1",
            "<-1>[U][V]*theta(U*V) * (-<-1>[V][U]*theta(U*V)^-1)",
            "inverse of theta(V)theta(U)",
        ),
        Step(None, "<-1>([U][V] - [V][U])", "K2 is central"),
        Step(None, "[U][V](<-1> + <-1>^2)", "[V][U] = eps[U][V]"),
        Step(None, "h*(h-1)*[U][V]", "h = 1 + <-1>"),
    ],
    "lemma-explicit-h": [
        Step(
            "H([U][V]*theta(W))",
            "H(theta(U^-1)^-1*theta(U^-1*V)*theta(V)^-1*theta(W))",
            "[U][V] = theta(U^-1)^-1 theta(U^-1 V) theta(V)^-1",
        ),
        Step(None, "-[U^-1] + [U^-1*V] - [V] + [W]", "H(theta(W)) = [W], H additive"),
        Step(None, "eta*[U^-1][V] + [W]", "[xy] = [x] + [y] + eta[x][y]"),
    ],
    "thm-fa1-ii": [
        Step("theta(U)*theta(V)^-1", "[-U][-V]*theta(U^-1*V)^-1", "relation (ii), first display"),
        Step("theta(U)^-1*theta(V)", "[U^-1][-V]*theta(U^-1*V)", "relation (ii), second display"),
    ],
}

_H_CALL = re.compile(r"\s*H\((.*)\)\s*\Z", re.S)


def as_group_element(v: Value) -> Fa1Element:
    if isinstance(v, Fa1Element):
        return v
    nf = normalize(v)
    if nf and not nf.is_homogeneous(2):
        raise ValueError(f"{nf} is not a degree-2 element")
    return Fa1Element(nf, ONE)


def _value(text: str) -> Value:
    m = _H_CALL.match(text)
    if m:
        return hurewicz(as_group_element(parse_value(m.group(1))))
    return parse_value(text)


def _render(v: Value) -> str:
    return str(normalize(v)) if isinstance(v, MwExpr) else str(v)


def check_values(a: Value, b: Value) -> bool:
    """Equality in K^MW, or in F(1) when either side is a group element."""
    if isinstance(a, Fa1Element) or isinstance(b, Fa1Element):
        return fa1_equal(as_group_element(a), as_group_element(b))
    return mw_equal(a, b)


def derive(name: str) -> DerivationReport:
    if name not in DERIVATIONS:
        raise KeyError(f"unknown derivation {name!r}; known: {', '.join(DERIVATIONS)}")
    report = DerivationReport(name)
    prev_text = None
    for step in DERIVATIONS[name]:
        lhs_text = step.lhs if step.lhs is not None else prev_text
        a, b = _value(lhs_text), _value(step.rhs)
        ok = check_values(a, b)
        report.steps.append(StepResult(lhs_text, step.rhs, step.citation, ok, _render(a), _render(b)))
        prev_text = step.rhs
    return report
