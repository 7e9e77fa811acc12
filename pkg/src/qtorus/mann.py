"""Bounded enumeration of solutions of a_1 x_1 + ... + a_n x_n = c in a group.

The search runs over the exponent box ``[-B, B]^r`` for each coordinate. The
first ``n - 1`` coordinates are enumerated and the last one is solved for; a
compiled residue scan modulo two word-sized primes proposes candidates, and
every candidate is confirmed with exact rational arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import prevprime

from . import kernels
from .errors import ArityMismatch, InvalidInput, SearchSpaceTooLarge
from .multgroup import GroupElement, GroupPresentation

DEFAULT_MAX_SEARCH = 10**8


@dataclass(frozen=True)
class MannProblem:
    coefficients: tuple
    group: GroupPresentation
    rhs: Fraction = Fraction(1)
    bound: int = 10

    def __post_init__(self):
        coeffs = tuple(Fraction(a) for a in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "rhs", Fraction(self.rhs))
        if not coeffs:
            raise InvalidInput("a Mann equation needs at least one term")
        if any(a == 0 for a in coeffs):
            raise InvalidInput("Mann coefficients must be nonzero")
        if self.bound < 1:
            raise InvalidInput("bound must be >= 1")
        if self.group.divisible:
            raise InvalidInput("Mann search needs a lattice (non-divisible) presentation")
        if self.rhs == 0 and len(coeffs) == 1:
            raise InvalidInput("a x = 0 has no solution in a group")

    @property
    def n(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class MannSolution:
    values: tuple
    non_degenerate: bool
    certificate: tuple | None

    def rationals(self) -> tuple:
        return tuple(x.value() for x in self.values)

    def to_dict(self) -> dict:
        out = {
            "values": [str(v) for v in self.rationals()],
            "exponents": [list(map(str, x.integer_exponents())) for x in self.values],
            "non_degenerate": self.non_degenerate,
        }
        if self.certificate is not None:
            out["vanishing_subset"] = list(self.certificate)
        return out


@dataclass(frozen=True)
class MannSolutionSet:
    solutions: tuple
    bound_used: int

    def non_degenerate(self) -> list:
        return [s for s in self.solutions if s.non_degenerate]

    def to_dict(self) -> dict:
        return {
            "bound": self.bound_used,
            "count": len(self.solutions),
            "non_degenerate_count": len(self.non_degenerate()),
            "solutions": [s.to_dict() for s in self.solutions],
        }


def nondegeneracy_check(coefficients, solution, rhs=1):
    """Return ``(True, None)`` or ``(False, I)`` with I a vanishing index set (1-based).

    Subsets are tried by increasing size, then lexicographically. For a
    homogeneous equation (rhs 0) the full index set is excluded.
    """
    coefficients = [Fraction(a) for a in coefficients]
    if len(coefficients) != len(solution):
        raise ArityMismatch(f"{len(coefficients)} coefficients for {len(solution)} values")
    vals = [x.value() if isinstance(x, GroupElement) else Fraction(x) for x in solution]
    n = len(vals)
    top = n if Fraction(rhs) != 0 else n - 1
    terms = [a * v for a, v in zip(coefficients, vals)]
    for size in range(1, top + 1):
        for I in itertools.combinations(range(n), size):
            if sum(terms[i] for i in I) == 0:
                return False, tuple(i + 1 for i in I)
    return True, None


def _box(group: GroupPresentation, bound: int):
    exps = list(itertools.product(range(-bound, bound + 1), repeat=group.rank))
    values = []
    for e in exps:
        v = Fraction(1)
        for b, k in zip(group.basis, e):
            v *= b**k
        values.append(v)
    return exps, values


def _pick_primes(fractions):
    bad = set()
    for q in fractions:
        bad.add(abs(q.numerator))
        bad.add(q.denominator)
    primes = []
    p = 2**31
    while len(primes) < 2:
        p = prevprime(p)
        if all(x % p for x in bad if x):
            primes.append(p)
    return primes


def _res(q: Fraction, p: int) -> int:
    return q.numerator % p * pow(q.denominator, -1, p) % p


def search_space(group: GroupPresentation, n: int, bound: int) -> int:
    """Number of enumerated tuples: the last coordinate is solved, not enumerated."""
    return (2 * bound + 1) ** (group.rank * (n - 1))


def solve_box(coefficients, rhs, group: GroupPresentation, bound: int, *, max_search=DEFAULT_MAX_SEARCH,
              backend=None, box=None):
    """All exponent-index tuples with sum a_i x_i = rhs, values in the box.

    Returns ``(exps, values, hits)`` where ``hits`` is a sorted list of index
    tuples into ``exps``/``values``.
    """
    coefficients = [Fraction(a) for a in coefficients]
    rhs = Fraction(rhs)
    n = len(coefficients)
    size = search_space(group, n, bound)
    if size > max_search:
        raise SearchSpaceTooLarge(
            f"search space {size} exceeds limit {max_search}", size=size, limit=max_search
        )
    exps, values = box if box is not None else _box(group, bound)
    p1, p2 = _pick_primes(list(group.basis) + coefficients + [Fraction(rhs.denominator)])
    res1 = np.array([_res(v, p1) for v in values], dtype=np.int64)
    res2 = np.array([_res(v, p2) for v in values], dtype=np.int64)
    a_last = coefficients[-1]
    raw = kernels.mann_scan(
        res1, res2,
        [_res(a, p1) for a in coefficients[:-1]],
        [_res(a, p2) for a in coefficients[:-1]],
        _res(rhs, p1), _res(rhs, p2),
        _res(1 / a_last, p1), _res(1 / a_last, p2),
        p1, p2, n - 1, backend=backend,
    )
    hits = []
    for row in raw:
        idx = tuple(int(i) for i in row)
        if sum(a * values[i] for a, i in zip(coefficients, idx)) == rhs:
            hits.append(idx)
    hits.sort()
    return exps, values, hits


def enumerate_solutions(p: MannProblem, *, max_search=DEFAULT_MAX_SEARCH, backend=None) -> MannSolutionSet:
    exps, _, hits = solve_box(p.coefficients, p.rhs, p.group, p.bound, max_search=max_search,
                              backend=backend)
    sols = []
    for idx in hits:
        point = tuple(p.group.element(exps[i]) for i in idx)
        ok, cert = nondegeneracy_check(p.coefficients, point, p.rhs)
        sols.append(MannSolution(point, ok, cert))
    return MannSolutionSet(tuple(sols), p.bound)


def stabilization_report(p: MannProblem, bounds, *, max_search=DEFAULT_MAX_SEARCH, backend=None) -> dict:
    bounds = [int(b) for b in bounds]
    if bounds != sorted(bounds) or len(set(bounds)) != len(bounds):
        raise InvalidInput("bounds must be strictly ascending")
    counts = []
    for b in bounds:
        q = MannProblem(p.coefficients, p.group, p.rhs, b)
        counts.append(len(enumerate_solutions(q, max_search=max_search, backend=backend).non_degenerate()))
    return {
        "bounds": bounds,
        "counts": counts,
        "stable": len(counts) >= 2 and counts[-1] == counts[-2],
    }
