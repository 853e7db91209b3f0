"""Text syntax for MW expressions and elements of F(1).

Grammar, loosest binding first::

    sum     := product (('+' | '-') product)*
    product := unary (['*'] unary)*          adjacency multiplies: [U][V]
    unary   := '-' unary | power
    power   := primary ['^' ['-'] INT]
    primary := INT | 'eta' | 'h' | 'eps' | '[' unit ']' | '<' unit '>'
             | 'theta' '(' unit ')' | '(' sum ')'
    unit    := ['-'] ufactor ('*' ufactor)*
    ufactor := (IDENT | '1' | '(' unit ')') ['^' ['-'] INT]

``h``, ``eps`` and ``<u>`` are desugared while parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .engine import ETA, MwExpr, const, normalize, symbol
from .fa1 import Fa1Element, fa1_mul, fa1_pow, theta
from .units import MINUS_ONE, ONE, FormalUnit, unit_mul, var

__all__ = [
    "ParseError",
    "EvalError",
    "Num",
    "Eta",
    "Bracket",
    "Theta",
    "Neg",
    "BinOp",
    "Pow",
    "parse",
    "parse_unit",
    "evaluate",
    "parse_value",
]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, src: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.src = src


class EvalError(ValueError):
    pass


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Eta:
    pass


@dataclass(frozen=True)
class Bracket:
    unit: FormalUnit


@dataclass(frozen=True)
class Theta:
    unit: FormalUnit


@dataclass(frozen=True)
class Neg:
    operand: "Ast"


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True)
class Pow:
    base: "Ast"
    exponent: int


Ast = Union[Num, Eta, Bracket, Theta, Neg, BinOp, Pow]


def _h() -> Ast:
    return BinOp("+", Num(2), BinOp("*", Eta(), Bracket(MINUS_ONE)))


def _pointed(u: FormalUnit) -> Ast:
    return BinOp("+", Num(1), BinOp("*", Eta(), Bracket(u)))


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*^()[]<>":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), src)
            out.append((ch, ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


_KEYWORDS = {"eta", "h", "eps", "theta"}
_STARTS_PRIMARY = {"[", "<", "("}


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str):
        t = self.tok
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1] or 'end of input'!r}", t[2], self.src)
        return self.advance()

    def error(self, msg: str):
        raise ParseError(msg, self.tok[2], self.src)

    # expressions
    def sum(self) -> Ast:
        node = self.product()
        while self.tok[0] in ("+", "-"):
            op = self.advance()[0]
            node = BinOp(op, node, self.product())
        return node

    def _starts_factor(self) -> bool:
        kind, text, _ = self.tok
        return kind in _STARTS_PRIMARY or (kind == "name" and text in _KEYWORDS)

    def product(self) -> Ast:
        node = self.unary()
        while True:
            if self.tok[0] == "*":
                self.advance()
            elif not self._starts_factor():
                break
            node = BinOp("*", node, self.unary())
        return node

    def unary(self) -> Ast:
        if self.tok[0] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def _exponent(self) -> int:
        sign = 1
        if self.tok[0] == "-":
            self.advance()
            sign = -1
        return sign * int(self.expect("int")[1])

    def power(self) -> Ast:
        node = self.primary()
        if self.tok[0] == "^":
            self.advance()
            node = Pow(node, self._exponent())
        return node

    def primary(self) -> Ast:
        kind, text, pos = self.tok
        if kind == "int":
            self.advance()
            return Num(int(text))
        if kind == "name":
            if text == "eta":
                self.advance()
                return Eta()
            if text == "h":
                self.advance()
                return _h()
            if text == "eps":
                self.advance()
                return Neg(_pointed(MINUS_ONE))
            if text == "theta":
                self.advance()
                self.expect("(")
                u = self.unit()
                self.expect(")")
                return Theta(u)
            self.error(f"unit {text!r} outside [ ], < > or theta( )")
        if kind == "[":
            self.advance()
            u = self.unit()
            self.expect("]")
            return Bracket(u)
        if kind == "<":
            self.advance()
            u = self.unit()
            self.expect(">")
            return _pointed(u)
        if kind == "(":
            self.advance()
            node = self.sum()
            self.expect(")")
            return node
        self.error(f"unexpected {text or 'end of input'!r}")

    # units
    def unit(self) -> FormalUnit:
        negate = False
        if self.tok[0] == "-":
            self.advance()
            negate = True
        u = self.ufactor()
        while self.tok[0] == "*":
            self.advance()
            u = unit_mul(u, self.ufactor())
        return -u if negate else u

    def ufactor(self) -> FormalUnit:
        kind, text, pos = self.tok
        if kind == "name" and text not in _KEYWORDS:
            self.advance()
            u = var(text)
        elif kind == "int" and text == "1":
            self.advance()
            u = ONE
        elif kind == "(":
            self.advance()
            u = self.unit()
            self.expect(")")
        else:
            self.error(f"expected a unit, found {text or 'end of input'!r}")
        if self.tok[0] == "^":
            self.advance()
            u = u ** self._exponent()
        return u


def parse(src: str) -> Ast:
    p = _Parser(src)
    if p.tok[0] == "end":
        p.error("empty expression")
    node = p.sum()
    if p.tok[0] != "end":
        p.error(f"unexpected {p.tok[1]!r}")
    return node


def parse_unit(src: str) -> FormalUnit:
    p = _Parser(src)
    u = p.unit()
    if p.tok[0] != "end":
        p.error(f"unexpected {p.tok[1]!r}")
    return u


# -- evaluation --------------------------------------------------------------

Value = Union[MwExpr, Fa1Element]


def _as_central(x: MwExpr) -> Fa1Element:
    nf = normalize(x)
    if nf and not nf.is_homogeneous(2):
        raise EvalError(f"only degree-2 expressions multiply group elements, got {nf}")
    return Fa1Element(nf, ONE)


def evaluate(node: Ast) -> Value:
    if isinstance(node, Num):
        return const(node.value)
    if isinstance(node, Eta):
        return ETA
    if isinstance(node, Bracket):
        return symbol(node.unit)
    if isinstance(node, Theta):
        return theta(node.unit)
    if isinstance(node, Neg):
        v = evaluate(node.operand)
        if isinstance(v, Fa1Element):
            raise EvalError("negation is not defined on group elements")
        return -v
    if isinstance(node, Pow):
        v = evaluate(node.base)
        if isinstance(v, Fa1Element):
            return fa1_pow(v, node.exponent)
        if node.exponent < 0:
            raise EvalError("negative powers of MW expressions are not defined")
        return v**node.exponent
    if isinstance(node, BinOp):
        a, b = evaluate(node.left), evaluate(node.right)
        if node.op in "+-":
            if isinstance(a, Fa1Element) or isinstance(b, Fa1Element):
                raise EvalError("group elements cannot be added; write products")
            return a + b if node.op == "+" else a - b
        if isinstance(a, MwExpr) and isinstance(b, MwExpr):
            return a * b
        if isinstance(a, MwExpr):
            a = _as_central(a)
        if isinstance(b, MwExpr):
            b = _as_central(b)
        return fa1_mul(a, b)
    raise TypeError(f"unknown node {node!r}")


def parse_value(src: str) -> Value:
    return evaluate(parse(src))
