import itertools
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtorus.cosets import (
    And,
    CosetConstraint,
    CosetUnion,
    Not,
    Or,
    character_eval,
    coset_member,
    coset_normalize,
    coset_union_ops,
    dkm_membership,
    evaluate,
    parse_constraints,
)
from qtorus.errors import ClassLimitExceeded, DivisibleGroupWarning, MixedArity, ParseError, ShapeMismatch
from qtorus.multgroup import validate_basis


@pytest.fixture
def g2():
    return validate_basis([2])


def test_character_eval(g23):
    G = validate_basis([2])
    assert character_eval((2, -1), [G.from_rational(4), G.from_rational(8)]).value() == 2
    assert character_eval((0, 0), [G.from_rational(4), G.from_rational(8)]).value() == 1
    assert character_eval((1, 1), [g23.from_rational(2), g23.from_rational(3)]).value() == 6


def test_dkm(g2):
    assert not dkm_membership([g2.element([3])], (2,), 4)
    assert dkm_membership([g2.element([2])], (2,), 4)
    assert dkm_membership([g2.element([7])], (5,), 1)


def test_normalize_example(g2):
    expr = And((CosetConstraint((1,), 2), CosetConstraint((1,), 3, ((1,),))))
    U = coset_normalize(expr, g2)
    assert U.modulus == 6 and U.classes == [[4]]
    assert coset_member(U, [g2.element([10])])
    assert not coset_member(U, [g2.element([3])])


def test_complement_and_contradiction(g2):
    U = coset_normalize(Not(CosetConstraint((1,), 2)), g2)
    assert U.classes == [[1]]
    X = CosetConstraint((1,), 3)
    assert coset_normalize(And((X, Not(X))), g2).classes == []


def test_union_ops(g2):
    A = CosetUnion.from_classes(2, 1, 1, [[0]])
    B = CosetUnion.from_classes(3, 1, 1, [[1]])
    assert coset_union_ops("intersect", A, B).classes == [[4]]
    full = CosetUnion.full(1, 1, 2)
    assert coset_union_ops("complement", full).classes == []
    u = coset_union_ops("union", A, coset_union_ops("complement", A))
    assert len(u.classes) == 2
    assert coset_member(full, [g2.element([5])])
    with pytest.raises(ShapeMismatch):
        coset_union_ops("union", A, CosetUnion.full(2, 1, 2))


def test_mixed_arity(g2):
    with pytest.raises(MixedArity):
        coset_normalize(And((CosetConstraint((1,), 2), CosetConstraint((1, 1), 2))), g2)


def test_class_limit(g23):
    with pytest.raises(ClassLimitExceeded):
        coset_normalize(CosetConstraint((1, 1), 97), g23, max_classes=1000)


def test_divisible_warns():
    d = validate_basis([2], divisible=True)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        U = coset_normalize(CosetConstraint((1,), 2), d)
    assert any(issubclass(w.category, DivisibleGroupWarning) for w in rec)
    assert U.modulus == 1 and U.classes == [[0]]


def test_parse_constraints():
    e = parse_constraints("(and (coset k=[1] m=2) (not (coset k=[1] m=3 shift=[1])))", 1)
    assert isinstance(e, And) and isinstance(e.children[1], Not)
    assert e.children[1].child.shift == ((1,),)
    e2 = parse_constraints("(or (ncoset k=[1,2] m=4 shift=[1,0,0,1]) (coset k=[0,1] m=2 polarity=out))", 2)
    assert not e2.children[0].polarity and e2.children[0].shift == ((1, 0), (0, 1))
    assert not e2.children[1].polarity


@pytest.mark.parametrize("text,col", [("(and (coset k=[1] m=2)", 23), ("(xor)", 2), ("(coset m=2)", 2)])
def test_parse_errors(text, col):
    with pytest.raises(ParseError) as exc:
        parse_constraints(text, 1)
    assert exc.value.column == col


def test_power_subgroup_inside_dkm():
    # (G^[m])^n is inside D_{k,m}: every tuple of residues 0 mod m satisfies any k
    G = validate_basis([2, 3])
    for k in itertools.product(range(-2, 3), repeat=2):
        for m in (2, 3):
            U = coset_normalize(CosetConstraint(k, m), G)
            assert coset_member(U, [G.element([m, 2 * m]), G.element([-m, 0])])


atom = st.builds(
    lambda k, m, s, p: CosetConstraint(k, m, s, p),
    st.lists(st.integers(-3, 3), min_size=2, max_size=2),
    st.sampled_from([2, 3, 4]),
    st.one_of(st.just(()), st.lists(st.lists(st.integers(-3, 3), min_size=1, max_size=1), min_size=2, max_size=2)),
    st.booleans(),
)
tree = st.recursive(atom, lambda c: st.one_of(
    st.builds(lambda xs: And(tuple(xs)), st.lists(c, min_size=2, max_size=3)),
    st.builds(lambda xs: Or(tuple(xs)), st.lists(c, min_size=2, max_size=3)),
    st.builds(Not, c),
), max_leaves=6)


@settings(max_examples=60, deadline=None)
@given(tree, st.lists(st.lists(st.integers(-20, 20), min_size=1, max_size=1), min_size=2, max_size=2),
       st.sampled_from([1, 2, 3]))
def test_normalize_sound_and_refinement(expr, exps, s):
    G = validate_basis([3])
    U = coset_normalize(expr, G, 2)
    g = [G.element(e) for e in exps]
    assert coset_member(U, g) == evaluate(expr, g)
    assert coset_member(U.refine(U.modulus * s), g) == coset_member(U, g)


@settings(max_examples=40, deadline=None)
@given(tree, tree)
def test_de_morgan(a, b):
    G = validate_basis([3])
    A, B = coset_normalize(a, G, 2), coset_normalize(b, G, 2)
    c = lambda X: coset_union_ops("complement", X)
    assert c(coset_union_ops("union", A, B)) == coset_union_ops("intersect", c(A), c(B))
    assert c(coset_union_ops("intersect", A, B)) == coset_union_ops("union", c(A), c(B))
