import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwcalc.engine import (
    EPS,
    ETA,
    H,
    RULES,
    MwExpr,
    MwMonomial,
    NonHomogeneousError,
    TermBoundExceeded,
    apply_rule,
    bracket,
    const,
    find_redex,
    is_normal,
    mw_equal,
    normalize,
    pointed,
    recombine,
    redex_sites,
    symbol,
    to_symbol_form,
)
from mwcalc.fields import probe, random_assignment, random_residue_assignment, residue_probe
from mwcalc.parser import parse_value
from mwcalc.units import MINUS_ONE, var
from strategies import exprs, monomials

U, V, W = var("U"), var("V"), var("W")
BACKENDS = ("F3", "F5", "F7", "R")


def nf(text):
    return normalize(parse_value(text))


@pytest.mark.parametrize(
    "lhs, rhs",
    [
        ("eta*h", "0"),
        ("h*[-1]", "0"),
        ("[U*V]", "[U] + [V] + eta*[U][V]"),
        ("[U^-1]", "-[U] - eta*[-1][U]"),
        ("<U>*<U^-1>", "1"),
        ("[V][U]", "eps*[U][V]"),
        ("[U][-U]", "0"),
        ("[U][U]", "[U][-1]"),
        ("<-1>*<-1>", "1"),
        ("eta^2*[-1]", "-2*eta"),
        ("eta*[-1][-1]", "-2*[-1]"),
        ("[1]", "0"),
    ],
)
def test_known_identities(lhs, rhs):
    assert mw_equal(parse_value(lhs), parse_value(rhs))


def test_distinct_normal_forms_are_unequal():
    assert not mw_equal(symbol(U), symbol(V))
    assert not mw_equal(symbol(U) * symbol(V), symbol(V) * symbol(U))
    assert not mw_equal(H, const(0))


def test_normal_form_rendering():
    assert str(nf("[V][U]")) == "-[U][V] - eta*[-1][U][V]"
    assert str(nf("h*(h-1)*[U][V]")) == "2*[U][V] + eta*[-1][U][V]"
    assert str(nf("0")) == "0"


def test_constants():
    assert normalize(H) == normalize(const(2) + ETA * symbol(MINUS_ONE))
    assert normalize(EPS) == normalize(-pointed(MINUS_ONE))
    assert bracket(U * V) == normalize(symbol(U) + symbol(V) + ETA * symbol(U) * symbol(V))


@given(exprs())
def test_normalize_idempotent_and_normal(e):
    n = normalize(e)
    assert normalize(n) == n
    assert is_normal(n)
    for m in n:
        assert find_redex(m) is None


@given(exprs(max_terms=2, max_len=2), exprs(max_terms=2, max_len=2), exprs(max_terms=2, max_len=2))
@settings(max_examples=40)
def test_ring_laws(a, b, c):
    assert mw_equal(a * (b * c), (a * b) * c)
    assert mw_equal(a * (b + c), a * b + a * c)
    assert mw_equal((a + b) * c, a * c + b * c)
    assert mw_equal(a + b, b + a)
    assert mw_equal(a - a, 0)


@given(exprs(max_terms=2, max_len=2), exprs(max_terms=2, max_len=2))
@settings(max_examples=40)
def test_normalize_is_a_ring_map(a, b):
    assert normalize(a * b) == normalize(normalize(a) * normalize(b))
    assert normalize(a + b) == normalize(normalize(a) + normalize(b))


@given(monomials(max_eta=1, max_len=2), monomials(max_eta=1, max_len=2))
def test_graded_commutativity(m1, m2):
    # xy = eps^{|x||y|} yx for homogeneous x, y
    a, b = MwExpr({m1: 1}), MwExpr({m2: 1})
    sign = EPS if (m1.degree * m2.degree) % 2 else const(1)
    assert mw_equal(a * b, sign * b * a)


def test_eta_is_central():
    x = symbol(U) * symbol(V)
    assert mw_equal(ETA * x, symbol(U) * ETA * symbol(V))


def _sites(m):
    return [(r, s) for r in RULES for s in redex_sites(m, r)]


@given(monomials(max_eta=2, max_len=3), st.randoms(use_true_random=False))
@settings(max_examples=150)
def test_every_rule_preserves_witt_probe(m, rng):
    for rule, site in _sites(m):
        children = apply_rule(m, rule, site)
        after = MwExpr({})
        for c, child in children:
            after = after + MwExpr({child: c})
        for backend in BACKENDS:
            asg = random_assignment(("U", "V", "W"), backend, rng)
            assert probe(MwExpr({m: 1}), asg, backend) == probe(after, asg, backend), (rule, site, m)


@given(monomials(max_eta=1, max_len=3), st.randoms(use_true_random=False))
@settings(max_examples=150)
def test_every_rule_preserves_tame_symbol(m, rng):
    if m.degree != 2:
        return
    for rule, site in _sites(m):
        after = MwExpr({child: c for c, child in apply_rule(m, rule, site)})
        for q in (5, 7):
            asg = random_residue_assignment(("U", "V", "W"), q, rng)
            assert residue_probe(MwExpr({m: 1}), asg, q) == residue_probe(after, asg, q), (rule, m)


def test_tame_symbol_separates_non_commuting_symbols():
    asg = {"U": (1, 1), "V": (0, 2)}
    assert residue_probe(nf("[U][V]"), asg, 5) != residue_probe(nf("[V][U]"), asg, 5)


def test_one_minus_u_convention_breaks_the_rules():
    # [u] -> <1,-u> differs from <u> - 1 by a sign per bracket; over F_q the
    # discrepancy lies in I^2 = 0, over R it does not
    m = MwMonomial(0, (U * V,))
    after = MwExpr({child: c for c, child in apply_rule(m, "R1", 0)})
    asg = {"U": -1, "V": -1}
    assert probe(MwExpr({m: 1}), asg, "R", "pfister") != probe(after, asg, "R", "pfister")
    assert probe(MwExpr({m: 1}), asg, "R") == probe(after, asg, "R")
    r6 = MwMonomial(2, (MINUS_ONE,))
    after6 = MwExpr({child: c for c, child in apply_rule(r6, "R6", 0)})
    assert probe(MwExpr({r6: 1}), {}, "R", "pfister") != probe(after6, {}, "R", "pfister")


@given(exprs(max_terms=2, max_len=2))
@settings(max_examples=25)
def test_trace_replays(e):
    n, trace = normalize(e, trace=True)
    assert n == normalize(e)
    assert normalize(trace.replay(e)) == n
    assert trace.replay(e) == n
    for step in trace:
        assert step.rule in RULES and step.citation


def test_trace_json():
    _, trace = normalize(parse_value("[U*V]"), trace=True)
    rows = trace.to_json()
    assert rows[0]["rule"] == "R1" and rows[0]["monomial"] == "[U*V]"


def test_term_bound():
    with pytest.raises(TermBoundExceeded):
        normalize(parse_value("[U*V*W][W*U^-1][V*W^2][U*V*W]"), term_bound=5)


def test_symbol_form_round_trip():
    e = nf("eta*[-1][U][V] + 3*[U][W]")
    sf = to_symbol_form(e, 2)
    assert all(len(w) == 2 for _, w in sf)
    assert mw_equal(recombine(sf), e)


def test_symbol_form_rejects_mixed_degrees():
    with pytest.raises(NonHomogeneousError):
        to_symbol_form(nf("[U] + [U][V]"), 2)


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        symbol(U) ** -1


def test_json_round():
    e = nf("2*[U][V] - eta*[-1][W]")
    rows = e.to_json()
    assert {"coeff": 2, "eta": 0, "brackets": ["U", "V"]} in rows


@given(monomials(max_eta=1, max_len=3))
@settings(max_examples=40)
def test_factorwise_and_stepwise_strategies_agree(m):
    import mwcalc.engine as engine

    engine._NF_CACHE.clear()
    stepwise = dict(engine._rewrite_nf(m, 10**6))
    engine._NF_CACHE.clear()
    factorwise = dict(engine._factorwise_nf(m, 10**6)) if len(m.brackets) > 1 else stepwise
    assert stepwise == factorwise
