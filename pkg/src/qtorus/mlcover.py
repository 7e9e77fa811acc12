"""Special pairs and Mordell-Lang covers for linear varieties.

A cover of ``W`` is a finite list of cosets ``g_i * L_i`` with ``L_i`` a
basic Q-torus, containing every group point of ``W``. For a linear system the
cover is assembled equation by equation: the terms of a solution split into
one block summing to the constant (a non-degenerate Mann solution) and blocks
summing to zero (non-degenerate after dividing by a pivot term, giving a
coset of a diagonal torus). Items from different equations are intersected
as integer lattice cosets.

Completeness of the Mann enumeration is only known up to the search bound,
and :func:`verify_cover` reports exactly that.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import intlattice
from .errors import (
    ArityMismatch,
    InvalidInput,
    NonRationalTorus,
    SearchSpaceTooLarge,
    UnsupportedVariety,
)
from .kfield import RATIONAL, matrix_rank_k, rref
from .mann import DEFAULT_MAX_SEARCH, MannProblem, _box, enumerate_solutions, solve_box
from .multgroup import GroupElement, GroupPresentation
from .torus import TorusSpec, is_q_torus, rational_rows, torus_contains, torus_dim, torus_fiber

POINTS = "points"
LINEAR = "linear"
BINOMIAL = "binomial"


@dataclass(frozen=True)
class VarietySpec:
    kind: str
    n: int
    points: tuple = ()
    rows: tuple = ()
    constants: tuple = ()
    torus: TorusSpec | None = None
    shift: tuple = ()
    empty: bool = False

    @classmethod
    def linear(cls, matrix, constants) -> "VarietySpec":
        matrix = [[Fraction(x) for x in r] for r in matrix]
        constants = [Fraction(c) for c in constants]
        if len(matrix) != len(constants):
            raise ArityMismatch("one constant per equation is required")
        if not matrix:
            raise ArityMismatch("a linear variety needs its arity; use linear_in")
        return cls.linear_in(len(matrix[0]), matrix, constants)

    @classmethod
    def linear_in(cls, n: int, matrix, constants) -> "VarietySpec":
        matrix = [[Fraction(x) for x in r] for r in matrix]
        constants = [Fraction(c) for c in constants]
        for r in matrix:
            if len(r) != n:
                raise ArityMismatch(f"equation of length {len(r)} in arity {n}")
        R, _ = rref([r + [c] for r, c in zip(matrix, constants)])
        rows, consts, empty = [], [], False
        for r in R:
            if not any(r[:n]):
                empty = empty or r[n] != 0
                continue
            rows.append(tuple(r[:n]))
            consts.append(r[n])
        return cls(LINEAR, n, rows=tuple(rows), constants=tuple(consts), empty=empty)

    @classmethod
    def from_points(cls, points) -> "VarietySpec":
        pts = tuple(tuple(Fraction(str(x)) if not isinstance(x, GroupElement) else x for x in p)
                    for p in points)
        if not pts:
            raise ArityMismatch("a point variety needs at least one point")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ArityMismatch("points of different lengths")
        return cls(POINTS, n, points=tuple(sorted(set(pts), key=str)))

    @classmethod
    def binomial(cls, torus: TorusSpec, shift) -> "VarietySpec":
        shift = tuple(shift)
        if torus.m != 0 or len(shift) != torus.n:
            raise ArityMismatch("binomial variety needs a basic torus and a shift of matching arity")
        return cls(BINOMIAL, torus.n, torus=torus, shift=shift)

    def describe(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        if self.kind == LINEAR:
            out["rows"] = [[str(x) for x in r] for r in self.rows]
            out["constants"] = [str(c) for c in self.constants]
            out["empty"] = self.empty
        elif self.kind == POINTS:
            out["points"] = [[str(x) for x in p] for p in self.points]
        else:
            out["torus"] = self.torus.row_strings()
            out["shift"] = [str(x) for x in self.shift]
        return out

    # fiber dimension through a point with coordinates ``fixed`` pinned
    def fiber_dim(self, fixed) -> int:
        free = [j for j in range(self.n) if j not in set(fixed)]
        if self.kind == POINTS:
            return 0
        if self.kind == LINEAR:
            rows = [[r[j] for j in free] for r in self.rows]
        else:
            rows = [[r[j] for j in free] for r in self.torus.rows]
        if not rows or not free:
            return len(free)
        return len(free) - matrix_rank_k(rows)

    def contains(self, y, group: GroupPresentation) -> bool:
        if self.kind == POINTS:
            vals = tuple(_value(x) for x in y)
            return any(tuple(_value(p) for p in pt) == vals for pt in self.points)
        if self.kind == LINEAR:
            if self.empty:
                return False
            vals = [_value(x) for x in y]
            return all(sum(a * v for a, v in zip(r, vals)) == c for r, c in zip(self.rows, self.constants))
        shift = [_element(group, s) for s in self.shift]
        return torus_contains(self.torus, [x * s.inverse() for x, s in zip(y, shift)])


def _value(x):
    return x.value() if isinstance(x, GroupElement) else Fraction(x)


def _element(group, x):
    return group.parse_element(x) if not isinstance(x, GroupElement) else x


# ---------------------------------------------------------------------------
# special pairs


@dataclass(frozen=True)
class SpecialVerdict:
    special: bool
    witnesses: tuple
    checked_points: int
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "special": self.special,
            "checked_points": self.checked_points,
            "witnesses": list(self.witnesses),
        }
        if self.note:
            out["note"] = self.note
        return out


def special_pair_check(W: VarietySpec, L: TorusSpec, group: GroupPresentation, points=None, *,
                       bound: int | None = None, max_search=DEFAULT_MAX_SEARCH, backend=None) -> SpecialVerdict:
    """Check dim W(pi(y)) + dim L(pi(y)) < n - l at every y in W and L.

    Projections range over all coordinate subsets of size l < n. Candidate
    points are taken from ``points`` or, with ``bound``, found by search.
    """
    if L.m != 0 or L.n != W.n:
        raise ArityMismatch(f"variety of arity {W.n} with torus of arity {L.m}+{L.n}")
    if L.mode != group.mode and L.mode == RATIONAL:
        L = TorusSpec.make([[x.to_fraction() for x in r] for r in L.rows], L.n, 0, group.mode)
    n = W.n
    if n == 0:
        return SpecialVerdict(True, (), 0, "n = 0")
    if points is None:
        if bound is None:
            raise InvalidInput("give candidate points or a search bound")
        candidates = group_points(W, group, bound, max_search=max_search, backend=backend)
    else:
        candidates = [tuple(_element(group, x) for x in p) for p in points]
        for p in candidates:
            if len(p) != n:
                raise ArityMismatch(f"candidate of length {len(p)} in arity {n}")
        candidates = [p for p in candidates if W.contains(p, group)]
    on_both = [p for p in candidates if torus_contains(L, p)]
    if not on_both:
        return SpecialVerdict(True, (), 0, "NO_CANDIDATES: no point of W and L found; special vacuously")
    witnesses = []
    for y in on_both:
        for l in range(n):
            for fixed in itertools.combinations(range(n), l):
                dw = W.fiber_dim(fixed)
                dl = _torus_fiber_dim(L, y, fixed)
                if dw + dl >= n - l:
                    witnesses.append({
                        "point": [str(_value(x)) if x.is_integral() else str(x) for x in y],
                        "projection": [j + 1 for j in fixed],
                        "dims": [dw, dl],
                        "threshold": n - l,
                    })
    return SpecialVerdict(not witnesses, tuple(witnesses), len(on_both))


def _torus_fiber_dim(L: TorusSpec, y, fixed) -> int:
    fixed = list(fixed)
    order = fixed + [j for j in range(L.n) if j not in set(fixed)]
    M = TorusSpec.make([[r[j] for j in order] for r in L.rows], L.n - len(fixed), len(fixed), L.mode)
    fib = torus_fiber(M, [y[j] for j in fixed])
    return fib.dim


# ---------------------------------------------------------------------------
# group points of a variety inside the exponent box


def group_points(W: VarietySpec, group: GroupPresentation, bound: int, *,
                 max_search=DEFAULT_MAX_SEARCH, backend=None) -> list:
    """All points of W in G^n whose exponents lie in [-bound, bound]."""
    if W.kind == POINTS:
        out = []
        for p in W.points:
            try:
                pt = tuple(_element(group, x) for x in p)
            except Exception:
                continue
            if all(x.is_integral() and all(abs(e) <= bound for e in x.integer_exponents()) for x in pt):
                out.append(pt)
        return out
    if W.kind == LINEAR:
        E = _linear_exponents(W, group, bound, max_search, backend)
        return [tuple(group.element(e) for e in p) for p in E.tolist()]
    size = (2 * bound + 1) ** (group.rank * W.n)
    if size > max_search:
        raise SearchSpaceTooLarge(f"search space {size} exceeds limit {max_search}", size=size)
    exps, _ = _box(group, bound)
    elems = [group.element(e) for e in exps]
    return [p for p in itertools.product(elems, repeat=W.n) if W.contains(p, group)]


def _linear_exponents(W, group, bound, max_search, backend) -> np.ndarray:
    """Integer exponent array of shape (points, n, rank), sorted lexicographically."""
    r = group.rank
    if W.empty:
        return np.zeros((0, W.n, r), dtype=np.int64)
    box = _box(group, bound)
    exps, values = box
    index = {v: i for i, v in enumerate(values)}
    assignments = [{}]
    for row, c in zip(W.rows, W.constants):
        support = [j for j in range(W.n) if row[j] != 0]
        nxt = []
        for asg in assignments:
            free = [j for j in support if j not in asg]
            rest = c - sum(row[j] * values[asg[j]] for j in support if j in asg)
            if not free:
                if rest == 0:
                    nxt.append(asg)
                continue
            if len(free) == 1:
                i = index.get(rest / row[free[0]])
                if i is not None:
                    nxt.append({**asg, free[0]: i})
                continue
            _, _, hits = solve_box([row[j] for j in free], rest, group, bound, max_search=max_search,
                                   backend=backend, box=box)
            for h in hits:
                nxt.append({**asg, **dict(zip(free, h))})
        assignments = nxt
    unconstrained = [j for j in range(W.n) if all(row[j] == 0 for row in W.rows)]
    if unconstrained and assignments:
        size = len(assignments) * len(values) ** len(unconstrained)
        if size > max_search:
            raise SearchSpaceTooLarge(f"search space {size} exceeds limit {max_search}", size=size)
    table = np.array(exps, dtype=np.int64).reshape(len(exps), r)
    idx = []
    for asg in assignments:
        for extra in itertools.product(range(len(values)), repeat=len(unconstrained)):
            full = {**asg, **dict(zip(unconstrained, extra))}
            idx.append([full[j] for j in range(W.n)])
    idx = np.array(idx, dtype=np.int64).reshape(len(idx), W.n)
    E = table[idx]
    if not len(E):
        return E
    order = np.lexsort(E.reshape(len(E), -1).T[::-1])
    return E[order]


def _point_exponents(W, group, bound, max_search, backend) -> np.ndarray:
    if W.kind == LINEAR:
        return _linear_exponents(W, group, bound, max_search, backend)
    pts = group_points(W, group, bound, max_search=max_search, backend=backend)
    return np.array([[x.integer_exponents() for x in p] for p in pts], dtype=np.int64).reshape(
        len(pts), W.n, group.rank)


# ---------------------------------------------------------------------------
# Mordell-Lang covers


@dataclass(frozen=True)
class CoverItem:
    g: tuple
    torus: TorusSpec
    note: str = ""

    def key(self):
        rows = rational_rows(self.torus)
        return (tuple(map(tuple, rows)), tuple(_chi(k, self.g) for k in rows))

    def contains(self, x) -> bool:
        rows = rational_rows(self.torus)
        return all(_chi(k, x) == _chi(k, self.g) for k in rows)

    def to_dict(self) -> dict:
        return {
            "g": [str(x.value()) for x in self.g],
            "g_exponents": [list(map(str, x.integer_exponents())) for x in self.g],
            "torus_rows": self.torus.row_strings(),
            "dim": torus_dim(self.torus),
            "note": self.note,
        }


def _chi(k, pts):
    r = len(pts[0].integer_exponents()) if pts else 0
    acc = [0] * r
    for kj, x in zip(k, pts):
        if kj:
            acc = [a + kj * e for a, e in zip(acc, x.integer_exponents())]
    return tuple(acc)


@dataclass(frozen=True)
class MLCover:
    n: int
    items: tuple
    bound: int
    notes: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "bound": self.bound,
            "item_count": len(self.items),
            "items": [it.to_dict() for it in self.items],
        }

    def without(self, i: int) -> "MLCover":
        return MLCover(self.n, self.items[:i] + self.items[i + 1:], self.bound, self.notes)


def _set_partitions(seq):
    if not seq:
        yield []
        return
    first, rest = seq[0], seq[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _equation_items(row, c, n, group, bound, max_search, backend):
    support = [j for j in range(n) if row[j] != 0]
    items = []
    one = group.identity()
    partitions = sorted((sorted(sorted(b) for b in p) for p in _set_partitions(support)))
    for part in partitions:
        heads = range(len(part)) if c != 0 else [None]
        for head in heads:
            blocks = []
            ok = True
            for bi, block in enumerate(part):
                if bi == head:
                    sols = enumerate_solutions(
                        MannProblem(tuple(row[j] for j in block), group, c, bound),
                        max_search=max_search, backend=backend,
                    ).non_degenerate()
                    choices = [dict(zip(block, s.values)) for s in sols]
                    rows = [[int(i == j) for i in range(n)] for j in block]
                    blocks.append((choices, rows, f"constant block {[j + 1 for j in block]}"))
                else:
                    if len(block) < 2:
                        ok = False
                        break
                    p = block[-1]
                    others = block[:-1]
                    sols = enumerate_solutions(
                        MannProblem(tuple(row[j] for j in others), group, -row[p], 2 * bound),
                        max_search=max_search, backend=backend,
                    ).non_degenerate()
                    choices = [{**dict(zip(others, s.values)), p: one} for s in sols]
                    rows = [[int(i == j) - int(i == p) for i in range(n)] for j in others]
                    blocks.append((choices, rows, f"zero block {[j + 1 for j in block]} pivot {p + 1}"))
            if not ok:
                continue
            rows = [r for _, rs, _ in blocks for r in rs]
            note = "; ".join(t for _, _, t in blocks)
            torus = TorusSpec.make(rows, n, 0, RATIONAL) if rows else TorusSpec.full(n)
            for combo in itertools.product(*(ch for ch, _, _ in blocks)):
                assign = {}
                for d in combo:
                    assign.update(d)
                g = tuple(assign.get(j, one) for j in range(n))
                items.append(CoverItem(g, torus, note))
    return items


def _intersect(a: CoverItem, b: CoverItem, group: GroupPresentation):
    ra, rb = rational_rows(a.torus), rational_rows(b.torus)
    K = ra + rb
    n = len(a.g)
    if not K:
        return CoverItem(a.g, a.torus, a.note)
    targets = [_chi(k, a.g) for k in ra] + [_chi(k, b.g) for k in rb]
    cols = []
    for j in range(group.rank):
        y = intlattice.solve_integer(K, [t[j] for t in targets])
        if y is None:
            return None
        cols.append(y)
    g = tuple(group.element([cols[j][i] for j in range(group.rank)]) for i in range(n))
    torus = TorusSpec.make(K, n, 0, RATIONAL)
    return CoverItem(g, torus, f"{a.note} | {b.note}")


def compute_ml_cover(W: VarietySpec, group: GroupPresentation, bound: int, *,
                     max_search=DEFAULT_MAX_SEARCH, backend=None) -> MLCover:
    if W.kind != LINEAR:
        raise UnsupportedVariety(f"covers are computed for linear varieties, not {W.kind}")
    if group.divisible:
        raise InvalidInput("covers are computed over a lattice (non-divisible) presentation")
    n = W.n
    if W.empty:
        return MLCover(n, (), bound, ("inconsistent system: no points",))
    items = [CoverItem(tuple(group.identity() for _ in range(n)), TorusSpec.full(n), "no equations")]
    for eq, (row, c) in enumerate(zip(W.rows, W.constants)):
        eq_items = _equation_items(row, c, n, group, bound, max_search, backend)
        merged = []
        for a in items:
            for b in eq_items:
                it = _intersect(a, b, group) if a.torus.rows else CoverItem(b.g, b.torus, b.note)
                if it is not None:
                    merged.append(it)
        items = merged
    seen = {}
    for it in items:
        seen.setdefault(it.key(), it)
    ordered = tuple(seen[k] for k in sorted(seen))
    return MLCover(n, ordered, bound, (f"complete up to exponent bound {bound}",))


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    checked: int
    counterexamples: tuple

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked_points": self.checked,
            "counterexamples": [[str(x.value()) for x in p] for p in self.counterexamples],
        }


def verify_cover(cover: MLCover, W: VarietySpec, group: GroupPresentation, bound: int, *,
                 max_search=DEFAULT_MAX_SEARCH, backend=None) -> CoverCheck:
    if cover.n != W.n:
        raise ArityMismatch(f"cover of arity {cover.n} for variety of arity {W.n}")
    E = _point_exponents(W, group, bound, max_search, backend)
    covered = np.zeros(len(E), dtype=np.bool_)
    for it in cover.items:
        rows = rational_rows(it.torus)
        if not rows:
            covered[:] = True
            break
        K = np.array(rows, dtype=np.int64)
        target = np.array([_chi(k, it.g) for k in rows], dtype=np.int64).reshape(len(rows), group.rank)
        vals = np.einsum("sn,pnr->psr", K, E)
        covered |= (vals == target).all(axis=(1, 2))
    missing = tuple(tuple(group.element(e) for e in p) for p in E[~covered].tolist())
    return CoverCheck(not missing, len(E), missing)


def emit_ml_axiom(W: VarietySpec, L: TorusSpec | None, cover: MLCover) -> str:
    """Render the formula special(W,L,x) -> OR_i AND_j chi_k(x) = chi_k(gamma_i)."""
    disjuncts = []
    for it in cover.items:
        if not is_q_torus(it.torus):
            raise NonRationalTorus("cover item torus is not a Q-torus")
        rows = rational_rows(it.torus)
        gamma = "(" + ",".join(str(x.value()) for x in it.g) + ")"
        if not rows:
            disjuncts.append("(true)")
            continue
        parts = []
        for k in rows:
            ks = "[" + ",".join(str(v) for v in k) + "]"
            parts.append(f"chi{ks}(x) = chi{ks}({gamma})")
        disjuncts.append("(" + " & ".join(parts) + ")")
    consequent = " | ".join(disjuncts) if disjuncts else "false"
    return f"special(W,L,x) -> {consequent}"
