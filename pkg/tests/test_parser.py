import pytest
from hypothesis import given

from mwcalc.engine import normalize
from mwcalc.fa1 import Fa1Element
from mwcalc.parser import (
    BinOp,
    Bracket,
    Eta,
    EvalError,
    Neg,
    Num,
    ParseError,
    Pow,
    Theta,
    parse,
    parse_unit,
    parse_value,
)
from mwcalc.units import MINUS_ONE, var
from strategies import exprs

U, V, W = var("U"), var("V"), var("W")


def test_h_is_desugared():
    tree = parse("h*(h-1)*[U]*[V]")
    h = BinOp("+", Num(2), BinOp("*", Eta(), Bracket(MINUS_ONE)))
    assert tree == BinOp("*", BinOp("*", BinOp("*", h, BinOp("-", h, Num(1))), Bracket(U)), Bracket(V))


def test_sum_tree():
    tree = parse("eta*[U^-1]*[V] + [W]")
    assert tree == BinOp("+", BinOp("*", BinOp("*", Eta(), Bracket(U**-1)), Bracket(V)), Bracket(W))


def test_adjacency_is_product():
    assert parse("[U][V]") == BinOp("*", Bracket(U), Bracket(V))
    assert parse("[U][V]") == parse("[U]*[V]")
    assert parse("2[U]") == BinOp("*", Num(2), Bracket(U))


def test_pointed_and_eps():
    assert parse("<U>") == BinOp("+", Num(1), BinOp("*", Eta(), Bracket(U)))
    assert parse("eps") == Neg(parse("<-1>"))


def test_precedence():
    # ^ binds tighter than unary minus, which binds tighter than *
    assert parse("-eta^2") == Neg(Pow(Eta(), 2))
    assert parse("-[U]*[V]") == BinOp("*", Neg(Bracket(U)), Bracket(V))
    assert parse("[U] - [V]*[W]") == BinOp("-", Bracket(U), BinOp("*", Bracket(V), Bracket(W)))
    assert parse("theta(U)^-1") == Pow(Theta(U), -1)


def test_units():
    assert parse_unit("-U*V^-2") == -U * V**-2
    assert parse_unit("(U*V)^-1") == (U * V) ** -1
    assert parse_unit("-1") == MINUS_ONE
    assert parse_unit("-(-U)") == U


@pytest.mark.parametrize(
    "src, pos",
    [("[U]+*", 4), ("[U", 2), ("U", 0), ("[U] $ [V]", 4), ("", 0), ("theta U", 6), ("[eta]", 1), ("(1", 2)],
)
def test_errors_carry_positions(src, pos):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.pos == pos


def test_evaluation_types():
    assert isinstance(parse_value("theta(U)*theta(V)"), Fa1Element)
    assert isinstance(parse_value("[U][V]*theta(W)"), Fa1Element)
    with pytest.raises(EvalError):
        parse_value("theta(U) + theta(V)")
    with pytest.raises(EvalError):
        parse_value("[U]*theta(V)")
    with pytest.raises(EvalError):
        parse_value("[U]^-1")


@given(exprs())
def test_render_round_trip(e):
    n = normalize(e)
    assert normalize(parse_value(n.render())) == n
    assert parse_value(n.render()) == n


def test_group_element_round_trip():
    x = parse_value("theta(U)*theta(V)^-1")
    assert parse_value(str(x)) == x
