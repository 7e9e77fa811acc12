from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtorus.errors import DivisionByZero, InvalidMinimalPolynomial, ModeMismatch, ParseError
from qtorus.kfield import (
    FORMAL_TAU,
    RATIONAL,
    FieldMode,
    KScalar,
    as_scalar,
    kernel_basis,
    matrix_kernel_k,
    matrix_rank_k,
    parse_scalar,
    primitive_vector,
    rational_coordinates,
    rational_rank,
    scalar_arith,
)

from conftest import K


def test_add_polynomials():
    assert scalar_arith("add", K("t+1"), K("t-1")) == K("2*t")


def test_inverse_swaps_fraction():
    assert scalar_arith("inv", K("(t-1)/(t+1)")) == K("(t+1)/(t-1)")


def test_algebraic_reduction(sqrt2):
    t = sqrt2.tau()
    assert t * t == sqrt2(2)
    assert (t * t).is_rational()


def test_inv_zero_raises():
    with pytest.raises(DivisionByZero):
        scalar_arith("inv", FORMAL_TAU.zero())
    with pytest.raises(ZeroDivisionError):
        K("1") / K("0")


def test_mode_mismatch():
    with pytest.raises(ModeMismatch):
        K("t") + parse_scalar("1", RATIONAL)
    with pytest.raises(ModeMismatch):
        RATIONAL.tau()


def test_reducible_polynomial_rejected():
    with pytest.raises(InvalidMinimalPolynomial):
        FieldMode.algebraic("x^2-4")
    with pytest.raises(InvalidMinimalPolynomial):
        FieldMode(FORMAL_TAU.kind, (Fraction(1), Fraction(1)))


def test_minimal_polynomial_made_monic():
    m = FieldMode.algebraic("2*x^2-6")
    assert m == FieldMode.algebraic("x^2-3")
    assert m.degree == 2


def test_canonical_form():
    x = K("(2*t+2)/(4*t^2-4)")
    assert x == K("1/(2*t-2)")
    assert x.num == (Fraction(1, 2),) and x.den == (Fraction(-1), Fraction(1))
    assert K("6/4") == K("3/2")


@pytest.mark.parametrize("text,expected", [
    ("2*t^2+t-1/2", "2*t^2+t-1/2"),
    ("-3/2", "-3/2"),
    ("t/2", "1/2*t"),
    ("(2t+1)/(t-3)", "(2*t+1)/(t-3)"),
])
def test_render_roundtrip(text, expected):
    x = K(text)
    assert str(x) == expected
    assert K(str(x)) == x


def test_parse_error_column():
    with pytest.raises(ParseError) as exc:
        K("t + * 2")
    assert exc.value.column == 5


def test_rank_examples():
    assert matrix_rank_k([[K("1"), K("t")], [K("t"), K("t^2")]]) == 1
    I3 = [[as_scalar(int(i == j), RATIONAL) for j in range(3)] for i in range(3)]
    assert matrix_rank_k(I3) == 3
    assert matrix_rank_k([[as_scalar(0, RATIONAL)] * 4] * 2) == 0


def test_kernel_examples():
    (v,) = matrix_kernel_k([[as_scalar(2, RATIONAL), as_scalar(3, RATIONAL)]], 2)
    assert [x.to_fraction() for x in v] == [3, -2]
    (w,) = matrix_kernel_k([[K("1"), K("t")]], 2)
    # span{(-t, 1)}
    assert w[0] * K("1") + w[1] * K("t") == K("0")
    assert w[0] / w[1] == K("-t")
    assert matrix_kernel_k([[K("1"), K("2")], [K("3"), K("4")]], 2) == []


def test_rational_coordinates():
    rows = rational_coordinates([K("t+1"), K("t-1")])
    assert rows == [[1, 1], [-1, 1]]
    assert rational_rank(rows) == 2
    assert rational_rank(rational_coordinates([K("1"), K("t"), K("2*t")])) == 2
    assert rational_rank(rational_coordinates([parse_scalar("5", RATIONAL)])) == 1


def test_primitive_vector():
    assert primitive_vector([K("2*t"), K("-2*t")]) == [K("1"), K("-1")]
    v = primitive_vector([K("1/2"), K("1/3")])
    assert v == [K("3"), K("2")]


small = st.integers(-4, 4)
poly = st.lists(small, min_size=1, max_size=3)


def _from(coeffs, den):
    num = sum((K(str(c)) * K("t") ** i for i, c in enumerate(coeffs)), K("0"))
    d = sum((K(str(c)) * K("t") ** i for i, c in enumerate(den)), K("0"))
    return num / d if d else num


@settings(max_examples=60, deadline=None)
@given(poly, poly)
def test_inverse_property(a, b):
    x = _from(a, b)
    if x:
        assert x * x.inv() == K("1")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.tuples(small, small), min_size=3, max_size=3), min_size=1, max_size=3))
def test_rank_nullity(rows):
    M = [[K(str(a)) + K(str(b)) * K("t") for a, b in r] for r in rows]
    assert matrix_rank_k(M) + len(kernel_basis(M, 3)) == 3


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=1, max_size=4))
def test_flattening_rank_at_least_k_rank(pairs):
    xs = [K(str(a)) + K(str(b)) * K("t") for a, b in pairs]
    k_rank = matrix_rank_k([[x] for x in xs])
    assert rational_rank(rational_coordinates(xs)) >= k_rank


@settings(max_examples=40, deadline=None)
@given(poly, poly)
def test_canonical_idempotent(a, b):
    x = _from(a, b)
    y = KScalar(x.mode, x.num, x.den)
    assert y == x and hash(y) == hash(x)
    assert K(str(x)) == x
