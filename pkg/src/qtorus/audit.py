"""Instance checks for the Schanuel condition and the group axioms A2-A4."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotASubgroup, NotInGroup
from .kfield import kernel_basis, rational_coordinates
from .multgroup import GroupPresentation, _same, ldim_k, lfo, subgroup_index
from .torus import TorusSpec, is_q_torus

PASS, FAIL, UNKNOWN = "PASS", "FAIL", "UNKNOWN"
PROVED_EMPTY, VIOLATION, NOT_APPLICABLE = "PROVED_EMPTY", "VIOLATION", "NOT_APPLICABLE"


@dataclass(frozen=True)
class SchanuelReport:
    elements: tuple
    lfo: int
    ldo: int
    declared_td: int | None
    verdict: str

    @property
    def defect(self) -> int:
        return self.lfo - self.ldo

    def to_dict(self) -> dict:
        return {
            "elements": [x.exponent_strings() for x in self.elements],
            "lfo": self.lfo,
            "ldo": self.ldo,
            "defect": self.defect,
            "required_td": max(self.defect, 0),
            "declared_td": self.declared_td,
            "verdict": self.verdict,
        }


def schanuel_audit(elements, declared_td=None) -> SchanuelReport:
    """Compare td + ldo against lfo; the transcendence degree is supplied, never computed."""
    elements = tuple(elements)
    if elements:
        _same(*elements)
    if declared_td is not None and (int(declared_td) != declared_td or declared_td < 0):
        raise ValueError("declared_td must be a natural number")
    lf = lfo(elements)
    ld = ldim_k(elements)
    if declared_td is None:
        verdict = UNKNOWN
    else:
        verdict = PASS if declared_td + ld >= lf else FAIL
    return SchanuelReport(elements, lf, ld, None if declared_td is None else int(declared_td), verdict)


def density_check(G: GroupPresentation) -> bool:
    # independent rationals have Q-independent logs: two of them give a dense log-lattice
    return G.rank >= 2 or (G.rank >= 1 and G.divisible)


@dataclass(frozen=True)
class A4Verdict:
    verdict: str
    witness: tuple = ()
    forced: tuple = ()
    note: str = ""

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict}
        if self.witness:
            out["witness"] = [str(x.value()) for x in self.witness]
            out["witness_exponents"] = [x.exponent_strings() for x in self.witness]
        if self.forced:
            out["forced_coordinates"] = list(self.forced)
        if self.note:
            out["note"] = self.note
        return out


def flattened_relations(L: TorusSpec):
    """Rational matrix whose integer kernel is the set of exponent columns on L.

    A column ``e`` (one group coordinate across the n variables) must satisfy
    sum_j p_ij e_j = 0 in K for every row; each such equation splits into one
    rational equation per coordinate of K over Q.
    """
    F = []
    for row in L.rows:
        coords = rational_coordinates(list(row))
        for d in range(len(coords[0])):
            F.append([coords[j][d] for j in range(L.arity)])
    return F


def a4_emptiness(L: TorusSpec, G: GroupPresentation, bound: int = 8) -> A4Verdict:
    """Decide whether L meets (G minus 1)^n, for a torus that is not a Q-torus.

    Every group coordinate of a point on L is an integer vector in the
    kernel N of the flattened relations. If some variable is zero on all of
    N it is forced to 1 and L misses (G minus 1)^n. Otherwise a full-support
    integer vector v in N exists, and x_j = b_1^(v_j) is a point of L with
    every coordinate different from 1.
    """
    if is_q_torus(L):
        return A4Verdict(NOT_APPLICABLE, note="L is a Q-torus")
    if L.m != 0:
        L = L.with_split(0)
    n = L.arity
    if G.rank == 0:
        return A4Verdict(PROVED_EMPTY, note="trivial group")
    F = flattened_relations(L)
    N = kernel_basis(F, n) if F else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    forced = tuple(j + 1 for j in range(n) if all(v[j] == 0 for v in N))
    if forced:
        return A4Verdict(PROVED_EMPTY, forced=forced, note="forced coordinates have exponent 0")
    v = _box_witness(F, n, bound) or _constructed_witness(N, n)
    witness = tuple(G.element([e if i == 0 else 0 for i in range(G.rank)]) for e in v)
    return A4Verdict(VIOLATION, witness=witness)


def _box_witness(F, n, bound):
    best = None
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if 0 in v:
            continue
        if all(sum(a * x for a, x in zip(row, v)) == 0 for row in F):
            key = (max(map(abs, v)), [-x for x in v])
            if best is None or key < best[0]:
                best = (key, v)
    return list(best[1]) if best else None


def _constructed_witness(N, n):
    # a combination avoiding the finitely many hyperplanes v_j = 0
    for c in itertools.count(1):
        v = [sum(Fraction(c**i) * b[j] for i, b in enumerate(N)) for j in range(n)]
        if all(v):
            den = math.lcm(*(x.denominator for x in v))
            return [int(x * den) for x in v]


def a3_index_check(Gamma: GroupPresentation, G: GroupPresentation, d_max: int) -> bool:
    return all(a == b for _, a, b in index_table(Gamma, G, d_max))


def index_table(Gamma: GroupPresentation, G: GroupPresentation, d_max: int):
    """Rows (d, |Gamma : Gamma^[d]|, |G : G^[d]|) for d = 1..d_max."""
    if d_max < 1:
        raise ValueError("d_max must be a positive integer")
    if Gamma.divisible and not G.divisible:
        raise NotASubgroup("a divisible group is not inside a lattice presentation")
    for b in Gamma.basis:
        try:
            G.from_rational(b)
        except NotInGroup as exc:
            raise NotASubgroup(f"basis element {b} is not in G", value=str(b)) from exc
    return [(d, subgroup_index(Gamma, d), subgroup_index(G, d)) for d in range(1, d_max + 1)]
