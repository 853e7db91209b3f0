import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from mwcalc.presentations import (
    BoundError,
    FinPresAbGroup,
    brute_witt_ring,
    eta_sequence_exactness_finite,
    fundamental_ideal_power,
    int_matrix,
    kmw_finite_field,
    milnor_k2,
    milnor_kn,
    smith_normal_form,
    solve_integer_system,
)

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def _det(a) -> int:
    return int(Matrix(a.tolist()).det())


@given(matrices)
@settings(max_examples=150)
def test_smith_form_against_sympy(rows):
    A = int_matrix(rows)
    snf = smith_normal_form(A)
    D = snf.D
    assert (snf.S.dot(A).dot(snf.T) == D).all()
    assert abs(_det(snf.S)) == 1 and abs(_det(snf.T)) == 1
    assert (snf.T.dot(snf.T_inv) == np.eye(A.shape[1], dtype=object)).all()
    off = D.copy()
    for i in range(min(D.shape)):
        off[i, i] = 0
    assert not off.any()
    diag = snf.diagonal
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    ref = sympy_snf(Matrix(rows), domain=ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)))
    assert sorted(diag) == ref_diag


def test_small_smith_example():
    assert smith_normal_form(int_matrix([[2, 0], [0, 3]])).diagonal == [1, 6]
    assert smith_normal_form(int_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])).diagonal == [2, 6, 12]


@given(matrices, st.lists(st.integers(-5, 5), min_size=5, max_size=5))
@settings(max_examples=80)
def test_integer_solver(rows, x0):
    A = int_matrix(rows)
    x0 = x0[: A.shape[1]]
    b = list(A.dot(np.array(x0, dtype=object)))
    x = solve_integer_system(A, b)
    assert x is not None
    assert list(A.dot(np.array(x, dtype=object))) == b


def test_unsolvable_system():
    assert solve_integer_system([[2]], [1]) is None
    assert solve_integer_system([[1, 1], [1, 1]], [0, 1]) is None


def test_group_invariants():
    g = FinPresAbGroup(["a", "b", "c"], int_matrix([[2, 0, 0], [0, 4, 0]]))
    assert g.invariants == [2, 4]
    assert g.free_rank == 1
    assert g.order is None
    assert g.describe() == "Z/2 + Z/4 + Z"
    h = FinPresAbGroup(["a", "b"], int_matrix([[2, 0], [0, 3]]))
    assert h.invariants == [6] and h.order == 6
    assert h.is_zero({"a": 2}) and not h.is_zero("a")


def test_group_from_elements():
    # Z/2 x Z/2 given by its addition table
    elems = [(0, 0), (0, 1), (1, 0), (1, 1)]
    g = FinPresAbGroup.from_elements(elems, lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2))
    assert g.invariants == [2, 2]


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_milnor_k2_of_finite_fields_vanishes(q):
    assert milnor_k2(q).is_trivial


@pytest.mark.parametrize("q", [3, 5, 7])
def test_milnor_k1_is_the_unit_group(q):
    assert milnor_kn(q, 1).invariants == [q - 1]


@pytest.mark.parametrize("q", [3, 5, 7])
def test_witt_ring_and_ideal_powers(q):
    W = brute_witt_ring(q)
    assert W.order == 4
    assert [len(W.ideal_power(n)) for n in range(4)] == [4, 2, 1, 1]
    assert fundamental_ideal_power(q, 1).order == 2
    assert fundamental_ideal_power(q, 2).is_trivial


@pytest.mark.parametrize("q, order", [(3, 2), (5, 4), (7, 6)])
def test_kmw_of_finite_fields(q, order):
    assert kmw_finite_field(q, 1).order == order
    assert kmw_finite_field(q, 2).order == 1
    assert kmw_finite_field(q, 2).group.is_trivial


@pytest.mark.parametrize("q", [3, 5, 7])
def test_exactness(q):
    rep = eta_sequence_exactness_finite(q, 2)
    assert rep.exact and rep.eta_h_vanishes
    assert rep.orders["K^MW_2"] == 1


def test_bounds():
    with pytest.raises(BoundError):
        milnor_k2(11)
    with pytest.raises((BoundError, ValueError)):
        eta_sequence_exactness_finite(5, 7)
