import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtorus.errors import ArityMismatch
from qtorus.kfield import FORMAL_TAU
from qtorus.multgroup import ldim_k, validate_basis
from qtorus.torus import (
    TorusSpec,
    as_rational_torus,
    is_q_torus,
    minimal_torus,
    rational_rows,
    torus_contains,
    torus_dim,
    torus_fiber,
)

from conftest import K


def T(rows, n, m=0, mode=FORMAL_TAU):
    return TorusSpec.make([[K(str(x), mode) for x in r] for r in rows], n, m, mode)


def test_dims():
    assert torus_dim(TorusSpec.make([[1, -1]], 2)) == 1
    assert torus_dim(TorusSpec.full(3)) == 3
    assert torus_dim(TorusSpec.make([[1, 0], [0, 1]], 2)) == 0


def test_fiber_point():
    G = validate_basis([2])
    L = TorusSpec.make([[1, -1]], 1, 1)
    fib = torus_fiber(L, [G.from_rational(4)])
    assert fib.dim == 0
    assert fib.contains([G.from_rational(4)])
    assert not fib.contains([G.from_rational(2)])


def test_fiber_full_torus():
    G = validate_basis([2])
    fib = torus_fiber(TorusSpec.full(2, 1), [G.from_rational(4)])
    assert fib.dim == 2


def test_fiber_cube_square():
    # y^2 = x^3 at x = 4: the positive solution is y = 8
    G = validate_basis([2])
    fib = torus_fiber(TorusSpec.make([[3, -2]], 1, 1), [G.from_rational(4)])
    assert fib.dim == 0
    (sol,) = fib.particular_solution()
    assert G.element(sol).value() == 8


def test_fiber_arity():
    G = validate_basis([2])
    with pytest.raises(ArityMismatch):
        torus_fiber(TorusSpec.make([[1, -1]], 1, 1), [])


def test_minimal_torus_examples():
    G2 = validate_basis([2])
    L = minimal_torus([], [G2.from_rational(4), G2.from_rational(8)])
    assert [[x.to_fraction() for x in r] for r in L.rows] == [[3, -2]]
    assert torus_dim(L) == 1
    G23 = validate_basis([2, 3])
    assert torus_dim(minimal_torus([], [G23.from_rational(2), G23.from_rational(3)])) == 2
    L1 = minimal_torus([], [G23.identity()])
    assert torus_dim(L1) == 0


def test_contains_examples():
    G = validate_basis([2, 3])
    L = TorusSpec.make([[3, -2]], 2)
    assert torus_contains(L, [G.from_rational(4), G.from_rational(8)])
    assert not torus_contains(L, [G.from_rational(2), G.from_rational(3)])
    assert torus_contains(TorusSpec.full(2), [G.from_rational(5 - 4), G.from_rational(3)])
    with pytest.raises(ArityMismatch):
        torus_contains(L, [G.from_rational(2)])


def test_q_torus_examples():
    assert not is_q_torus(T([["t", -1]], 2))
    L = T([["2*t", "-2*t"]], 2)
    assert is_q_torus(L)
    assert rational_rows(L) == [[1, -1]]
    assert is_q_torus(TorusSpec.full(2, 0, FORMAL_TAU))
    assert not is_q_torus(T([["t", 1, "-t-1"]], 3))
    assert as_rational_torus(L).row_strings() == [["1", "-1"]]


def test_rows_canonical():
    a = T([["t", "-t"], [1, 1]], 2)
    b = T([[1, 1], [2, 0]], 2)
    assert a.rows == b.rows


coef = st.tuples(st.integers(-3, 3), st.integers(-2, 2))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(coef, min_size=2, max_size=2), min_size=1, max_size=4), st.integers(0, 2))
def test_minimal_torus_dim_is_ldim(vecs, nb):
    G = validate_basis([2, 3], FORMAL_TAU)
    els = [G.element([K(str(a)) + K(str(b)) * K("t") for a, b in v]) for v in vecs]
    b, a = els[:nb], els[nb:] or els[:1]
    L = minimal_torus(b, a)
    assert torus_dim(L) == ldim_k(a, b)
    assert torus_contains(L, b + a)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(coef, min_size=3, max_size=3), min_size=1, max_size=2), st.integers(-3, 3))
def test_fiber_dim_bounded_and_scaling_invariance(rows, e):
    G = validate_basis([2], FORMAL_TAU)
    M = [[K(str(a)) + K(str(b)) * K("t") for a, b in r] for r in rows]
    L = TorusSpec.make(M, 2, 1, FORMAL_TAU)
    fib = torus_fiber(L, [G.element([e])])
    if fib.dim is not None:
        assert fib.dim <= torus_dim(L)
    scaled = TorusSpec.make([[x * K("t+2") for x in r] for r in M], 2, 1, FORMAL_TAU)
    assert is_q_torus(scaled) == is_q_torus(L)
    if len(M) == 2:
        mixed = TorusSpec.make([[x + y for x, y in zip(*M)], M[1]], 2, 1, FORMAL_TAU)
        assert is_q_torus(mixed) == is_q_torus(L)
