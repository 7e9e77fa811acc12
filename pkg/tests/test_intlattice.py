import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qtorus import intlattice


def test_saturation_examples():
    assert intlattice.saturation([[2, 2]], 2) == [[1, 1]]
    assert intlattice.saturation([[2, 1]], 2) == [[2, 1]]
    assert intlattice.saturation([], 2) == []


def test_hnf_is_upper_triangular():
    H = intlattice.hnf([[4, 6], [2, 3], [0, 5]])
    assert len(H) == 2
    assert H[1][0] == 0 and H[0][0] > 0 and H[1][1] > 0


def test_solve_integer():
    assert intlattice.solve_integer([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert intlattice.solve_integer([[2, 0]], [3]) is None
    assert intlattice.solve_integer([[1, 1], [1, 1]], [1, 2]) is None


mat = st.integers(1, 3).flatmap(
    lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=1, max_size=3)
)


@settings(max_examples=80, deadline=None)
@given(mat)
def test_hnf_matches_sympy_lattice(rows):
    ncols = len(rows[0])
    H = intlattice.hnf(rows)
    assert len(H) == sympy.Matrix(rows).rank()
    # same lattice: each generator is in span(H) and each H row in span(rows)
    basis = intlattice.hnf(rows)
    for r in rows:
        assert intlattice.in_lattice(basis, r)
    for h in H:
        assert intlattice.solve_integer([list(c) for c in zip(*rows)], h) is not None
    assert all(len(h) == ncols for h in H)


@settings(max_examples=80, deadline=None)
@given(mat, st.lists(st.integers(-6, 6), min_size=3, max_size=3))
def test_solve_integer_is_exact(rows, x):
    n = len(rows[0])
    x = x[:n]
    t = [sum(a * b for a, b in zip(r, x)) for r in rows]
    y = intlattice.solve_integer(rows, t)
    assert y is not None
    assert [sum(a * b for a, b in zip(r, y)) for r in rows] == t


@settings(max_examples=60, deadline=None)
@given(mat)
def test_saturation_idempotent_and_contains(rows):
    n = len(rows[0])
    S = intlattice.saturation(rows, n)
    assert intlattice.saturation(S, n) == S
    for r in rows:
        assert intlattice.in_lattice(S, r)
