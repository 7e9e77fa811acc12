from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtorus.errors import ArityMismatch, NonRationalTorus, UnsupportedVariety
from qtorus.kfield import FORMAL_TAU
from qtorus.mlcover import (
    CoverItem,
    MLCover,
    VarietySpec,
    compute_ml_cover,
    emit_ml_axiom,
    group_points,
    special_pair_check,
    verify_cover,
)
from qtorus.multgroup import validate_basis
from qtorus.torus import TorusSpec, is_q_torus, torus_dim

from conftest import K

LINE = VarietySpec.linear([[1, 1]], [1])
DIAG = VarietySpec.linear([[1, -2]], [0])


def test_linear_canonicalization():
    W = VarietySpec.linear([[2, 2], [1, 1]], [2, 1])
    assert W.rows == ((1, 1),) and W.constants == (1,)
    assert VarietySpec.linear([[1, 1], [1, 1]], [1, 2]).empty
    with pytest.raises(ArityMismatch):
        VarietySpec.linear([[1, 1]], [1, 2])


def test_special_line_full_torus(g23):
    v = special_pair_check(LINE, TorusSpec.full(2), g23, [["1/2", "1/2"]])
    assert not v.special
    w = v.witnesses[0]
    assert w["projection"] == [] and w["dims"] == [1, 2] and w["threshold"] == 2


def test_special_point_curve():
    G = validate_basis([2])
    W = VarietySpec.from_points([[4, 8]])
    v = special_pair_check(W, TorusSpec.make([[3, -2]], 2), G, [[4, 8]])
    assert v.special and v.checked_points == 1


def test_special_n_zero(g23):
    W = VarietySpec.linear_in(0, [], [])
    assert special_pair_check(W, TorusSpec.full(0), g23, []).special


def test_special_no_candidates(g23):
    v = special_pair_check(LINE, TorusSpec.make([[1, 0], [0, 1]], 2), g23, bound=4)
    assert v.special and "NO_CANDIDATES" in v.note


def test_special_search(g23):
    v = special_pair_check(LINE, TorusSpec.full(2), g23, bound=3)
    assert not v.special and v.checked_points == 7


def test_special_arity(g23):
    with pytest.raises(ArityMismatch):
        special_pair_check(LINE, TorusSpec.full(3), g23, [])


def test_cover_line(g23):
    c = compute_ml_cover(LINE, g23, 10)
    assert len(c.items) == 7
    assert all(torus_dim(it.torus) == 0 for it in c.items)
    assert {tuple(x.value() for x in it.g) for it in c.items} == {
        (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 3), Fraction(2, 3)), (Fraction(2, 3), Fraction(1, 3)),
        (Fraction(1, 4), Fraction(3, 4)), (Fraction(3, 4), Fraction(1, 4)), (Fraction(1, 9), Fraction(8, 9)),
        (Fraction(8, 9), Fraction(1, 9))}
    assert verify_cover(c, LINE, g23, 12).ok


def test_cover_diagonal(g23):
    c = compute_ml_cover(DIAG, g23, 10)
    (it,) = c.items
    assert [x.value() for x in it.g] == [2, 1]
    assert it.torus.row_strings() == [["1", "-1"]]
    assert verify_cover(c, DIAG, g23, 12).ok


def test_cover_x_is_one(g23):
    W = VarietySpec.linear([[1]], [1])
    (it,) = compute_ml_cover(W, g23, 10).items
    assert [x.value() for x in it.g] == [1] and torus_dim(it.torus) == 0


def test_deleting_item_gives_counterexample(g23):
    c = compute_ml_cover(LINE, g23, 10)
    missing = c.items[0]
    check = verify_cover(c.without(0), LINE, g23, 12)
    assert not check.ok
    assert [tuple(x.value() for x in p) for p in check.counterexamples] == [tuple(x.value() for x in missing.g)]


def test_cover_two_equations(g23):
    W = VarietySpec.linear([[1, 1, 0], [0, 1, -1]], [1, 0])
    c = compute_ml_cover(W, g23, 6)
    assert len(c.items) == 7
    assert verify_cover(c, W, g23, 8).ok


def test_cover_inconsistent(g23):
    W = VarietySpec.linear([[1, 1], [1, 1]], [1, 2])
    c = compute_ml_cover(W, g23, 4)
    assert c.items == ()
    assert emit_ml_axiom(W, None, c) == "special(W,L,x) -> false"


def test_cover_rejects_points(g23):
    with pytest.raises(UnsupportedVariety):
        compute_ml_cover(VarietySpec.from_points([[2]]), g23, 4)


def test_axiom_text(g23):
    c = compute_ml_cover(DIAG, g23, 10)
    assert emit_ml_axiom(DIAG, None, c) == "special(W,L,x) -> (chi[1,-1](x) = chi[1,-1]((2,1)))"
    text = emit_ml_axiom(LINE, None, compute_ml_cover(LINE, g23, 10))
    parts = text.split(" -> ")[1].split(" | ")
    assert len(parts) == 7 and all(p.count(" & ") == 1 for p in parts)
    assert text == emit_ml_axiom(LINE, None, compute_ml_cover(LINE, g23, 10))


def test_axiom_rowless_and_non_rational(g23):
    free = MLCover(1, (CoverItem((g23.identity(),), TorusSpec.full(1)),), 1)
    assert emit_ml_axiom(None, None, free) == "special(W,L,x) -> (true)"
    G = validate_basis([2, 3], FORMAL_TAU)
    bad = TorusSpec.make([[K("t"), K("-1")]], 2, 0, FORMAL_TAU)
    cover = MLCover(2, (CoverItem((G.identity(), G.identity()), bad),), 1)
    with pytest.raises(NonRationalTorus):
        emit_ml_axiom(None, None, cover)


def test_binomial_points(g23):
    W = VarietySpec.binomial(TorusSpec.make([[1, -1]], 2), [g23.from_rational(2), g23.identity()])
    pts = group_points(W, g23, 1)
    # x = 2y keeps the 2-exponent of y in [-1, 0]: 2 * 3 choices
    assert len(pts) == 6 and all(p[0].value() == 2 * p[1].value() for p in pts)


coef = st.integers(-6, 6).map(lambda k: Fraction(k, 2))


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(
    st.lists(st.lists(coef, min_size=n, max_size=n), min_size=1, max_size=n),
    st.lists(coef, min_size=2, max_size=2))))
def test_cover_properties(data):
    A, c = data
    c = c[: len(A)]
    G = validate_basis([2, 3])
    if not all(any(r[j] for r in A) for j in range(len(A[0]))):
        return
    W = VarietySpec.linear(A, c)
    cover = compute_ml_cover(W, G, 5)
    assert verify_cover(cover, W, G, 5).ok
    for it in cover.items:
        assert is_q_torus(it.torus)
        assert all(x.is_integral() for x in it.g)
        if W.rows:
            assert torus_dim(it.torus) < W.n


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(1, 3))
def test_positive_coefficients_give_points(a, c):
    G = validate_basis([2, 3])
    W = VarietySpec.linear([a], [c])
    assert all(torus_dim(it.torus) == 0 for it in compute_ml_cover(W, G, 3).items)
