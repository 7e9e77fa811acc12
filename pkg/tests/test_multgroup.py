from fractions import Fraction
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtorus.errors import DependentBasis, IllegalPower, NonIntegerExponent, NonpositiveInput, NotInGroup
from qtorus.errors import PresentationMismatch
from qtorus.kfield import FORMAL_TAU
from qtorus.multgroup import (
    element_combine,
    eval_rational,
    in_closure,
    ldim_k,
    lfo,
    power_subgroup_membership,
    purity_closure,
    subgroup_index,
    validate_basis,
)

from conftest import K


def test_valid_basis(g23):
    assert g23.rank == 2


def test_dependent_basis_witness():
    with pytest.raises(DependentBasis) as exc:
        validate_basis([2, 4])
    assert exc.value.details["witness"] in ([2, -1], [-2, 1])
    with pytest.raises(DependentBasis) as exc:
        validate_basis([Fraction(2, 3), Fraction(3, 2)])
    assert exc.value.details["witness"] in ([1, 1], [-1, -1])


def test_nonpositive_and_one_rejected():
    with pytest.raises(NonpositiveInput):
        validate_basis([2, -3])
    with pytest.raises(DependentBasis):
        validate_basis([1])


def test_combine_examples(g23, g2tau):
    g = element_combine("mul", g23.element([1, 0]), g23.element([0, 1]))
    assert g.integer_exponents() == (1, 1) and g.value() == 6
    h = element_combine("pow", g2tau.element([1]), K("t"))
    assert h.exponents == (K("t"),)
    assert element_combine("pow", g23.element([1, 1]), 3).value() == 216


def test_illegal_power(g23):
    with pytest.raises(IllegalPower):
        element_combine("pow", g23.element([1, 0]), Fraction(1, 2))
    d = validate_basis([2, 3], divisible=True)
    assert element_combine("pow", d.element([1, 0]), Fraction(1, 2)).exponents[0] == Fraction(1, 2)


def test_presentation_mismatch(g23, g2tau):
    with pytest.raises(PresentationMismatch):
        element_combine("mul", g23.element([1, 0]), g2tau.element([1]))


def test_eval_rational(g23, g2tau):
    assert eval_rational(g23.element([-2, 1])) == Fraction(3, 4)
    assert eval_rational(g23.identity()) == 1
    with pytest.raises(NonIntegerExponent):
        eval_rational(g2tau.element([K("t")]))


def test_from_rational(g23):
    assert g23.from_rational(Fraction(3, 4)).integer_exponents() == (-2, 1)
    with pytest.raises(NotInGroup):
        g23.from_rational(5)
    with pytest.raises(NotInGroup):
        validate_basis([4]).from_rational(2)
    assert validate_basis([4], divisible=True).from_rational(2).exponents[0] == Fraction(1, 2)


def test_ldim_lfo_examples(g23, g2tau):
    e = [g23.from_rational(x) for x in (2, 3, 6)]
    assert ldim_k(e) == 2 and lfo(e) == 2
    pair = [g2tau.element([1]), g2tau.element([K("t")])]
    assert ldim_k(pair) == 1
    assert lfo(pair) == 2
    assert ldim_k([], e) == 0
    g2 = validate_basis([2])
    assert lfo([g2.from_rational(4)], [g2.from_rational(2)]) == 0


def test_purity_examples(g23):
    c = purity_closure(g23, [], [g23.from_rational(36)])
    assert c == [[1, 1]]
    assert in_closure(c, g23.from_rational(6))
    assert purity_closure(g23, [], [g23.from_rational(12)]) == [[2, 1]]
    assert purity_closure(g23, [], []) == []


def test_power_subgroup(g23):
    assert power_subgroup_membership(g23.element([2, 4]), 2)
    assert not power_subgroup_membership(g23.element([2, 3]), 2)
    d = validate_basis([2, 3], divisible=True)
    assert power_subgroup_membership(d.element([Fraction(1, 3), 1]), 7)


def test_subgroup_index(g23):
    assert subgroup_index(g23, 3) == 9
    assert subgroup_index(g23, 1) == 1
    assert subgroup_index(validate_basis([2, 3], divisible=True), 5) == 1


@pytest.mark.parametrize("r", [0, 1, 2, 3])
@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_index_equals_residue_count(r, d):
    G = validate_basis([2, 3, 5][:r])
    classes = {tuple(x % d for x in v) for v in itertools.product(range(2 * d), repeat=r)}
    assert subgroup_index(G, d) == len(classes)


vec = st.lists(st.integers(-5, 5), min_size=2, max_size=2)


@settings(max_examples=60, deadline=None)
@given(vec, vec)
def test_eval_is_homomorphism(a, b):
    G = validate_basis([2, 3])
    g, h = G.element(a), G.element(b)
    assert eval_rational(g * h) == eval_rational(g) * eval_rational(h)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4))
def test_ldim_at_most_lfo(pairs):
    G = validate_basis([2], FORMAL_TAU)
    els = [G.element([K(str(a)) + K(str(b)) * K("t")]) for a, b in pairs]
    assert ldim_k(els) <= lfo(els)


@settings(max_examples=60, deadline=None)
@given(st.lists(vec, min_size=1, max_size=4))
def test_rational_mode_ldim_equals_lfo(vs):
    G = validate_basis([2, 3])
    els = [G.element(v) for v in vs]
    assert ldim_k(els) == lfo(els)


@settings(max_examples=60, deadline=None)
@given(st.lists(vec, min_size=0, max_size=3))
def test_purity_idempotent(vs):
    G = validate_basis([2, 3])
    c = purity_closure(G, [G.element(v) for v in vs])
    assert purity_closure(G, [G.element(v) for v in c]) == c
    assert all(in_closure(c, G.element(v)) for v in vs)
