"""Finitely generated subgroups of Q_{>0} and their K-linear exponent spans.

A :class:`GroupPresentation` fixes a multiplicatively independent basis
``b_1..b_r`` of positive rationals. A :class:`GroupElement` is an exponent
vector over K relative to that basis, so ``2^t`` (the formal power of 2) is
the vector ``(t,)`` over ``<2>``. Integral vectors are the points of the
lattice group Gamma; a divisible presentation also admits rational (and, in
the tau modes, K-valued) exponents.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from sympy import factorint

from . import intlattice
from .errors import (
    DependentBasis,
    IllegalPower,
    NonIntegerExponent,
    NonpositiveInput,
    NotInGroup,
    PresentationMismatch,
)
from .kfield import (
    RATIONAL,
    FieldMode,
    as_scalar,
    kernel_basis,
    matrix_rank_k,
    primitive_vector,
    rational_coordinates,
    rational_rank,
)


def prime_exponents(q: Fraction) -> dict[int, int]:
    q = Fraction(q)
    if q <= 0:
        raise NonpositiveInput(f"{q} is not positive", value=str(q))
    out = dict(factorint(q.numerator)) if q.numerator > 1 else {}
    for p, e in (factorint(q.denominator).items() if q.denominator > 1 else ()):
        out[p] = out.get(p, 0) - e
    return out


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    mode: FieldMode
    basis: tuple
    divisible: bool = False
    primes: tuple = field(default=(), compare=False)
    exponent_matrix: tuple = field(default=(), compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, GroupPresentation):
            return NotImplemented
        return (self.mode, self.basis, self.divisible) == (other.mode, other.basis, other.divisible)

    def __hash__(self):
        return hash((self.mode, self.basis, self.divisible))

    def describe(self) -> dict:
        out = self.mode.describe()
        out["basis"] = [str(b) for b in self.basis]
        out["divisible"] = self.divisible
        return out

    @cached_property
    def _solver(self):
        # rows of the prime matrix F (r x P); solving e F = v is F^T e = v
        return [list(col) for col in zip(*self.exponent_matrix)] if self.basis else []

    def element(self, exponents) -> "GroupElement":
        exps = tuple(as_scalar(e, self.mode) for e in exponents)
        if len(exps) != self.rank:
            raise PresentationMismatch(
                f"exponent vector of length {len(exps)} for rank {self.rank}"
            )
        return GroupElement(self, exps)

    def identity(self) -> "GroupElement":
        return GroupElement(self, tuple(self.mode.zero() for _ in self.basis))

    def generator(self, i: int) -> "GroupElement":
        return self.element([int(i == j) for j in range(self.rank)])

    def from_rational(self, q) -> "GroupElement":
        """Express a positive rational in the basis, or raise NOT_IN_GROUP."""
        q = Fraction(q)
        pe = prime_exponents(q)
        extra = set(pe) - set(self.primes)
        if extra:
            raise NotInGroup(f"{q} involves primes {sorted(extra)} outside the basis", value=str(q))
        target = [Fraction(pe.get(p, 0)) for p in self.primes]
        if self.rank == 0:
            if q != 1:
                raise NotInGroup(f"{q} is not in the trivial group", value=str(q))
            return self.identity()
        from .kfield import rref

        aug = [row + [t] for row, t in zip(self._solver, target)]
        R, piv = rref([[Fraction(x) for x in row] for row in aug])
        if self.rank in piv:
            raise NotInGroup(f"{q} is not in the group generated by the basis", value=str(q))
        sol = [Fraction(0)] * self.rank
        for row, c in zip(R, piv):
            sol[c] = row[-1]
        if not self.divisible and any(x.denominator != 1 for x in sol):
            raise NotInGroup(f"{q} is only in the divisible closure", value=str(q))
        return self.element(sol)

    def parse_element(self, spec) -> "GroupElement":
        """A list is an exponent vector; a string or number is a rational value."""
        if isinstance(spec, GroupElement):
            if spec.presentation != self:
                raise PresentationMismatch("element belongs to another presentation")
            return spec
        if isinstance(spec, (list, tuple)):
            return self.element(spec)
        return self.from_rational(Fraction(str(spec)))


def validate_basis(candidates, mode: FieldMode = RATIONAL, divisible: bool = False) -> GroupPresentation:
    basis = []
    for c in candidates:
        try:
            q = Fraction(str(c)) if not isinstance(c, Fraction) else c
        except (ValueError, ZeroDivisionError) as exc:
            raise NonpositiveInput(f"cannot read {c!r} as a rational") from exc
        if q <= 0:
            raise NonpositiveInput(f"basis element {q} is not positive", value=str(q))
        basis.append(q)
    factored = [prime_exponents(b) for b in basis]
    primes = tuple(sorted({p for f in factored for p in f}))
    F = [[f.get(p, 0) for p in primes] for f in factored]
    if basis and matrix_rank_k([[Fraction(x) for x in row] for row in F]) < len(basis):
        # integer relation c with c @ F = 0
        cols = [[Fraction(F[i][j]) for i in range(len(basis))] for j in range(len(primes))]
        if not cols:
            cols = [[Fraction(0)] * len(basis)]
        rel = primitive_vector(kernel_basis(cols, len(basis))[0])
        rel = [int(x) for x in rel]
        parts = [f"({b})^{c}" for b, c in zip(basis, rel) if c]
        raise DependentBasis(
            "basis is multiplicatively dependent: " + " * ".join(parts) + " = 1",
            witness=rel,
        )
    return GroupPresentation(mode, tuple(basis), bool(divisible), primes, tuple(tuple(r) for r in F))


@dataclass(frozen=True)
class GroupElement:
    presentation: GroupPresentation
    exponents: tuple

    def is_integral(self) -> bool:
        return all(e.is_integer() for e in self.exponents)

    def integer_exponents(self) -> tuple:
        if not self.is_integral():
            raise NonIntegerExponent(f"exponents {self.exponent_strings()} are not all integers")
        return tuple(int(e.to_fraction()) for e in self.exponents)

    def rational_exponents(self) -> tuple:
        if not all(e.is_rational() for e in self.exponents):
            raise NonIntegerExponent(f"exponents {self.exponent_strings()} are not rational")
        return tuple(e.to_fraction() for e in self.exponents)

    def exponent_strings(self) -> list:
        return [str(e) for e in self.exponents]

    def __mul__(self, other):
        return element_combine("mul", self, other)

    def __pow__(self, q):
        return element_combine("pow", self, q)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.presentation, tuple(-e for e in self.exponents))

    def value(self) -> Fraction:
        return eval_rational(self)

    def __str__(self):
        if self.is_integral():
            return str(self.value())
        return "exp(" + ",".join(self.exponent_strings()) + ")"


def _same(*elements):
    pres = elements[0].presentation
    for e in elements[1:]:
        if e.presentation != pres:
            raise PresentationMismatch("elements belong to different presentations")
    return pres


def element_combine(op: str, g: GroupElement, h) -> GroupElement:
    if op == "mul":
        pres = _same(g, h)
        return GroupElement(pres, tuple(a + b for a, b in zip(g.exponents, h.exponents)))
    if op == "pow":
        pres = g.presentation
        q = as_scalar(h, pres.mode)
        # t-powers are the point of the tau modes; only rational fractions leave the lattice
        if not pres.divisible and q.is_rational() and not q.is_integer():
            raise IllegalPower(f"power {q} is not an integer in a lattice presentation")
        return GroupElement(pres, tuple(q * e for e in g.exponents))
    raise ValueError(f"unknown operation {op!r}")


def eval_rational(g: GroupElement) -> Fraction:
    out = Fraction(1)
    for b, e in zip(g.presentation.basis, g.integer_exponents()):
        out *= b**e
    return out


def _rows(elements):
    return [list(e.exponents) for e in elements]


def _common(elements, over):
    items = list(elements) + list(over)
    if not items:
        return None
    return _same(*items)


def ldim_k(elements, over=()) -> int:
    """K-linear dimension of ``elements`` relative to ``over``."""
    elements, over = list(elements), list(over)
    if not elements:
        return 0
    _common(elements, over)
    return matrix_rank_k(_rows(over + elements)) - (
        matrix_rank_k(_rows(over)) if over else 0
    )


def _flatten(vectors):
    """Flatten K-vectors to rational rows with one shared common denominator."""
    if not vectors:
        return []
    r = len(vectors[0])
    coords = rational_coordinates([x for v in vectors for x in v]) if r else []
    out = []
    for i in range(len(vectors)):
        row = []
        for j in range(r):
            row.extend(coords[i * r + j])
        out.append(row)
    return out


def lfo(elements, over=()) -> int:
    """Q-linear dimension of ``elements`` relative to ``over``."""
    elements, over = list(elements), list(over)
    if not elements:
        return 0
    _common(elements, over)
    rows = _flatten([e.exponents for e in over + elements])
    if not rows or not rows[0]:
        return 0
    total = rational_rank(rows)
    base = rational_rank(rows[: len(over)]) if over else 0
    return total - base


def purity_closure(presentation: GroupPresentation, generators_H=(), A=()) -> list[list[int]]:
    """HNF basis of the smallest pure subgroup containing ``H`` and ``A``."""
    vecs = [g.integer_exponents() for g in list(generators_H) + list(A)]
    for g in list(generators_H) + list(A):
        if g.presentation != presentation:
            raise PresentationMismatch("element belongs to another presentation")
    return intlattice.saturation(vecs, presentation.rank)


def in_closure(closure_hnf, g: GroupElement) -> bool:
    return intlattice.in_lattice(closure_hnf, g.integer_exponents())


def power_subgroup_membership(g: GroupElement, d: int) -> bool:
    if d < 1:
        raise ValueError("d must be a positive integer")
    if g.presentation.divisible:
        return True
    return all(e % d == 0 for e in g.integer_exponents())


def subgroup_index(presentation: GroupPresentation, d: int) -> int:
    """Index of the d-th powers; Gamma is torsion-free of rank r, so d^r."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    if presentation.divisible:
        return 1
    return d**presentation.rank


__all__ = [
    "GroupPresentation",
    "GroupElement",
    "validate_basis",
    "element_combine",
    "eval_rational",
    "ldim_k",
    "lfo",
    "purity_closure",
    "in_closure",
    "power_subgroup_membership",
    "subgroup_index",
    "prime_exponents",
]
