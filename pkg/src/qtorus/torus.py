"""Basic K-tori given by exponent matrices.

A row ``(p_1, ..., p_{m+n})`` stands for the character equation
``x_1^{p_1} ... x_{m+n}^{p_{m+n}} = 1``; the first ``m`` columns are
parameters. Tori are never materialized as point sets: membership and
dimension are questions about exponent vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ArityMismatch, PresentationMismatch
from .kfield import (
    RATIONAL,
    FieldMode,
    Kind,
    as_scalar,
    kernel_basis,
    matrix_kernel_k,
    matrix_rank_k,
    primitive_vector,
    rational_coordinates,
    rref,
)
from .multgroup import GroupElement


def _canonical_rows(rows, width: int, mode: FieldMode):
    rows = [[as_scalar(x, mode) for x in r] for r in rows]
    for r in rows:
        if len(r) != width:
            raise ArityMismatch(f"row of length {len(r)} in a torus of arity {width}")
    R, _ = rref(rows)
    return tuple(tuple(primitive_vector(r)) for r in R)


@dataclass(frozen=True)
class TorusSpec:
    mode: FieldMode
    m: int
    n: int
    rows: tuple

    @classmethod
    def make(cls, rows, n: int, m: int = 0, mode: FieldMode = RATIONAL) -> "TorusSpec":
        return cls(mode, m, n, _canonical_rows(rows, m + n, mode))

    @classmethod
    def full(cls, n: int, m: int = 0, mode: FieldMode = RATIONAL) -> "TorusSpec":
        return cls(mode, m, n, ())

    @property
    def arity(self) -> int:
        return self.m + self.n

    def row_strings(self) -> list:
        return [[str(x) for x in r] for r in self.rows]

    def describe(self) -> dict:
        return {"m": self.m, "n": self.n, "rows": self.row_strings(), "dim": torus_dim(self)}

    def permuted(self, order) -> "TorusSpec":
        """Reorder columns by ``order`` and canonicalize; ``m`` is kept."""
        return TorusSpec.make([[r[j] for j in order] for r in self.rows], self.n, self.m, self.mode)

    def with_split(self, m: int) -> "TorusSpec":
        return TorusSpec(self.mode, m, self.arity - m, self.rows)


def torus_dim(L: TorusSpec) -> int:
    if not L.rows:
        return L.n
    return L.n - matrix_rank_k([r[L.m:] for r in L.rows])


@dataclass(frozen=True)
class Fiber:
    """Solution set in n variables of ``chi_row(y) = constant`` for each row.

    ``consts[i]`` is the exponent vector (over the group basis) that the
    i-th character must take. ``empty`` marks an inconsistent system.
    """

    mode: FieldMode
    n: int
    rows: tuple
    consts: tuple
    empty: bool

    @property
    def torus(self) -> TorusSpec:
        return TorusSpec.make(self.rows, self.n, 0, self.mode)

    @property
    def dim(self):
        if self.empty:
            return None
        return torus_dim(self.torus)

    def contains(self, y) -> bool:
        if self.empty:
            return False
        if len(y) != self.n:
            raise ArityMismatch(f"point of length {len(y)} for fiber arity {self.n}")
        for row, c in zip(self.rows, self.consts):
            ch = _character(row, y)
            if (ch != list(c)) if c else any(ch):
                return False
        return True

    def particular_solution(self):
        """Exponent vectors of one point when the fiber is a single point."""
        if self.empty or self.dim != 0:
            return None
        sol = [None] * self.n
        for row, c in zip(self.rows, self.consts):
            piv = next(j for j, x in enumerate(row) if x)
            sol[piv] = tuple(x / row[piv] for x in c)
        return sol


def _character(row, points):
    """Exponent vector of prod_j points[j]^row[j]."""
    r = len(points[0].exponents) if points else 0
    mode = row[0].mode if row else None
    acc = [mode.zero() if mode else 0 for _ in range(r)]
    for p, x in zip(row, points):
        if p:
            acc = [a + p * e for a, e in zip(acc, x.exponents)]
    return acc


def torus_fiber(L: TorusSpec, b) -> Fiber:
    b = list(b)
    if len(b) != L.m:
        raise ArityMismatch(f"{len(b)} parameters for a torus with m={L.m}")
    for x in b:
        if x.presentation != b[0].presentation:
            raise PresentationMismatch("parameters from different presentations")
        if x.presentation.mode != L.mode:
            raise PresentationMismatch("torus and parameters use different field modes")
    aug = []
    for row in L.rows:
        c = [-x for x in _character(list(row[: L.m]), b)] if b else []
        aug.append(list(row[L.m:]) + c)
    R, _ = rref(aug)
    rows, consts, empty = [], [], False
    for row in R:
        var, c = row[: L.n], row[L.n:]
        if not any(var):
            if any(c):
                empty = True
            continue
        rows.append(tuple(var))
        consts.append(tuple(c))
    return Fiber(L.mode, L.n, tuple(rows), tuple(consts), empty)


def minimal_torus(b, a) -> TorusSpec:
    """Smallest K-torus over ``b`` through ``a``: all character relations of (b, a)."""
    b, a = list(b), list(a)
    pts = b + a
    if not pts:
        raise ArityMismatch("minimal_torus needs at least one coordinate")
    pres = pts[0].presentation
    for x in pts:
        if x.presentation != pres:
            raise PresentationMismatch("points from different presentations")
    N = len(pts)
    ET = [[x.exponents[j] for x in pts] for j in range(pres.rank)]
    rows = matrix_kernel_k(ET, N) if ET else [
        [pres.mode.one() if i == j else pres.mode.zero() for j in range(N)] for i in range(N)
    ]
    return TorusSpec.make(rows, len(a), len(b), pres.mode)


def torus_contains(L: TorusSpec, x) -> bool:
    x = list(x)
    if len(x) != L.arity:
        raise ArityMismatch(f"point of length {len(x)} for torus arity {L.arity}")
    if not L.rows:
        return True
    if x and x[0].presentation.mode != L.mode:
        raise PresentationMismatch("torus and point use different field modes")
    return all(not any(_character(row, x)) for row in L.rows)


def rational_subspace(rows, width: int):
    """Canonical basis of (K-row-space of ``rows``) intersected with Q^width.

    A rational vector v lies in the row space iff it annihilates every
    K-kernel vector; each such condition splits into rational conditions,
    one per coordinate of the flattened kernel vector.
    """
    if not rows:
        return []
    constraints = []
    for k in kernel_basis(rows, width):
        coords = rational_coordinates(k)
        for d in range(len(coords[0])):
            constraints.append([coords[j][d] for j in range(width)])
    if not constraints:
        return [[Fraction(int(i == j)) for j in range(width)] for i in range(width)]
    basis = kernel_basis(constraints, width)
    if not basis:
        return []
    R, _ = rref(basis)
    return [primitive_vector(v) for v in R]


def is_q_torus(L: TorusSpec) -> bool:
    if L.mode.kind is Kind.RATIONAL or not L.rows:
        return True
    return len(rational_subspace(L.rows, L.arity)) == len(L.rows)


def rational_rows(L: TorusSpec):
    """Primitive integer rows defining ``L`` when it is a Q-torus, else None."""
    if not L.rows:
        return []
    if L.mode.kind is Kind.RATIONAL:
        return [[int(x.to_fraction()) for x in r] for r in L.rows]
    basis = rational_subspace(L.rows, L.arity)
    if len(basis) != len(L.rows):
        return None
    return [[int(x) for x in r] for r in basis]


def as_rational_torus(L: TorusSpec) -> TorusSpec:
    """The same Q-torus with its rows rewritten in RATIONAL mode."""
    rows = rational_rows(L)
    if rows is None:
        raise ValueError("not a Q-torus")
    return TorusSpec.make(rows, L.n, L.m, RATIONAL)
