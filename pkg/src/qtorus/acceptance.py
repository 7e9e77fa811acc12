"""Release checks. Each criterion compares the library against an independent oracle.

Used by the test suite and by ``qtorus selftest``. Every criterion has a
fixed seed (``1000 + number``) so results are reproducible.
"""
from __future__ import annotations

import itertools
import json
import math
import random
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import sympy

from . import audit, cli, cosets, mann, mlcover, multgroup, torus
from .kfield import FORMAL_TAU, RATIONAL, FieldMode, KScalar, as_scalar

PRIMES = (2, 3, 5)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"criterion {self.number} [{'PASS' if self.passed else 'FAIL'}] {self.title}"

    def to_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed, "detail": self.detail}


def _rng(number: int) -> random.Random:
    return random.Random(1000 + number)


# ---------------------------------------------------------------------------
# 1. Mann benchmark


def _smooth_exponents(q: Fraction, bound: int):
    """Exponents (a, b) with q = 2^a 3^b and |a|, |b| <= bound, by trial division."""
    exps = []
    num, den = q.numerator, q.denominator
    for p in (2, 3):
        e = 0
        while num % p == 0:
            num //= p
            e += 1
        while den % p == 0:
            den //= p
            e -= 1
        exps.append(e)
    if num != 1 or den != 1 or any(abs(e) > bound for e in exps):
        return None
    return tuple(exps)


def mann_oracle(bound: int = 10):
    """Non-degenerate solutions of x + y = 1 in <2,3> by brute force."""
    out = set()
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            x = Fraction(2) ** a * Fraction(3) ** b
            y = 1 - x
            if y > 0 and _smooth_exponents(y, bound) is not None:
                out.add((x, y))
    return out


def criterion_1() -> CriterionResult:
    G = multgroup.validate_basis([2, 3])
    t0 = time.perf_counter()
    sols = mann.enumerate_solutions(mann.MannProblem((1, 1), G, 1, 10)).non_degenerate()
    elapsed = time.perf_counter() - t0
    got = {s.rationals() for s in sols}
    want = mann_oracle(10)
    ok = len(got) == 7 and got == want and elapsed < 5
    return CriterionResult(1, "Mann benchmark x+y=1 over <2,3>, bound 10", ok, {
        "count": len(got),
        "oracle_count": len(want),
        "solutions": sorted(f"{x}+{y}" for x, y in got),
        "within_time": elapsed < 5,
    })


# ---------------------------------------------------------------------------
# 2. coset constraint normalization


def _random_tree(rng, n, r, depth):
    if depth == 0 or rng.random() < 0.35:
        k = [rng.randint(-3, 3) for _ in range(n)]
        shift = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(n)] if rng.random() < 0.5 else []
        return cosets.CosetConstraint(k, rng.choice((2, 3, 4)), shift, rng.random() < 0.7)
    op = rng.choice(("and", "or", "not"))
    if op == "not":
        return cosets.Not(_random_tree(rng, n, r, depth - 1))
    kids = tuple(_random_tree(rng, n, r, depth - 1) for _ in range(rng.randint(2, 3)))
    return cosets.And(kids) if op == "and" else cosets.Or(kids)


def _direct(expr, exps, r):
    """Evaluate a tree on raw integer exponent vectors."""
    if isinstance(expr, cosets.CosetConstraint):
        shift = expr.shift or [[0] * r for _ in expr.k]
        inside = all(
            sum(k * (e[j] - s[j]) for k, e, s in zip(expr.k, exps, shift)) % expr.m == 0
            for j in range(r)
        )
        return inside == expr.polarity
    if isinstance(expr, cosets.And):
        return all(_direct(c, exps, r) for c in expr.children)
    if isinstance(expr, cosets.Or):
        return any(_direct(c, exps, r) for c in expr.children)
    return not _direct(expr.child, exps, r)


def criterion_2(trees: int = 500, points: int = 100) -> CriterionResult:
    rng = _rng(2)
    t0 = time.perf_counter()
    mismatches = checked = 0
    for _ in range(trees):
        r, n = rng.randint(1, 2), rng.randint(1, 2)
        G = multgroup.validate_basis(PRIMES[:r])
        expr = _random_tree(rng, n, r, 3)
        U = cosets.coset_normalize(expr, G, n)
        for _ in range(points):
            exps = [[rng.randint(-12, 12) for _ in range(r)] for _ in range(n)]
            g = [G.element(e) for e in exps]
            checked += 1
            if cosets.coset_member(U, g) != _direct(expr, exps, r):
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 60
    return CriterionResult(2, "coset normalization agrees with direct evaluation", ok, {
        "checked": checked,
        "mismatches": mismatches,
        "within_time": elapsed < 60,
    })


# ---------------------------------------------------------------------------
# 3. minimal torus dimension against linear dimension


def _sympy_rank(rows, mode):
    if not rows:
        return 0
    t = sympy.Symbol("t")
    value = t if mode.kind.value == "formal_tau" else None
    if mode.kind.value == "algebraic_tau":
        value = sympy.sqrt(2)

    def conv(x: KScalar):
        num = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(x.num))
        den = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(x.den))
        expr = num / den
        return sympy.simplify(expr.subs(t, value)) if value is not None else expr

    return sympy.Matrix([[conv(x) for x in r] for r in rows]).rank(simplify=True)


def _random_scalar(rng, mode):
    if mode.kind.value == "rational":
        return as_scalar(rng.randint(-3, 3), mode)
    return as_scalar(rng.randint(-3, 3), mode) + as_scalar(rng.randint(-2, 2), mode) * mode.tau()


def criterion_3(instances: int = 200) -> CriterionResult:
    rng = _rng(3)
    modes = (RATIONAL, FORMAL_TAU, FieldMode.algebraic("x^2-2"))
    mismatches, oracle_mismatches = 0, 0
    for _ in range(instances):
        mode = rng.choice(modes)
        r = rng.randint(1, 3)
        G = multgroup.validate_basis(PRIMES[:r], mode)
        seeds = [[_random_scalar(rng, mode) for _ in range(r)] for _ in range(rng.randint(1, 3))]

        def elem():
            # combinations of a few seed vectors, so relations are common
            coeffs = [as_scalar(rng.randint(-2, 2), mode) for _ in seeds]
            return G.element([sum((c * s[j] for c, s in zip(coeffs, seeds)), mode.zero()) for j in range(r)])

        b = [elem() for _ in range(rng.randint(0, 2))]
        a = [elem() for _ in range(rng.randint(1, 3))]
        dim = torus.torus_dim(torus.minimal_torus(b, a))
        ld = multgroup.ldim_k(a, b)
        oracle = _sympy_rank([x.exponents for x in b + a], mode) - _sympy_rank([x.exponents for x in b], mode)
        mismatches += dim != ld
        oracle_mismatches += ld != oracle
    ok = mismatches == 0 and oracle_mismatches == 0
    return CriterionResult(3, "minimal torus dimension equals relative ldim", ok, {
        "instances": instances,
        "mismatches": mismatches,
        "ldim_vs_sympy_rank_mismatches": oracle_mismatches,
    })


# ---------------------------------------------------------------------------
# 4. index law


def criterion_4() -> CriterionResult:
    bad = []
    for r in range(0, 4):
        G = multgroup.validate_basis(PRIMES[:r])
        for d in range(1, 6):
            classes = {tuple(x % d for x in v) for v in itertools.product(range(-d, d + 1), repeat=r)}
            if multgroup.subgroup_index(G, d) != len(classes):
                bad.append([r, d])
    return CriterionResult(4, "subgroup index equals residue count", not bad, {"failures": bad})


# ---------------------------------------------------------------------------
# 5. Schanuel failure instance


def criterion_5() -> CriterionResult:
    G = multgroup.validate_basis([2], FORMAL_TAU)
    rep = audit.schanuel_audit([G.element([1]), G.element([FORMAL_TAU.tau()])], 0)
    ok = rep.verdict == audit.FAIL and rep.defect == 1
    return CriterionResult(5, "tau = log2(3) encoding fails the Schanuel condition", ok, rep.to_dict())


# ---------------------------------------------------------------------------
# 6. A4 emptiness for non-Q tori


def random_non_q_row(rng, n):
    while True:
        row = [as_scalar(rng.randint(-3, 3), FORMAL_TAU) + as_scalar(rng.randint(-3, 3), FORMAL_TAU) * FORMAL_TAU.tau()
               for _ in range(n)]
        if not any(row):
            continue
        L = torus.TorusSpec.make([row], n, 0, FORMAL_TAU)
        if not torus.is_q_torus(L):
            return L


def a4_oracle(L: torus.TorusSpec, rank: int, bound: int = 8):
    """Exhaustive search for a point of L in (G minus 1)^n with exponents in [-bound, bound].

    A candidate exponent column c must satisfy sum_j p_j c_j = 0 in K; a point
    needs ``rank`` such columns with every variable nonzero in at least one.
    """
    n = L.arity
    cols = []
    for c in itertools.product(range(-bound, bound + 1), repeat=n):
        if all(not sum((p * x for p, x in zip(row, c)), FORMAL_TAU.zero()) for row in L.rows):
            cols.append(c)
    supports = {frozenset(j for j in range(n) if c[j]) for c in cols}
    full = frozenset(range(n))
    for combo in itertools.product(supports, repeat=rank):
        if frozenset().union(*combo) == full:
            return True
    return False


def criterion_6(instances: int = 50) -> CriterionResult:
    rng = _rng(6)
    G = multgroup.validate_basis([2, 3], FORMAL_TAU)
    verdicts = {audit.PROVED_EMPTY: 0, audit.VIOLATION: 0, audit.NOT_APPLICABLE: 0}
    oracle_hits = unsound = beyond_box = 0
    violating_rows = []
    for _ in range(instances):
        # a single nonzero row in one variable always reduces to (1), a Q-torus
        L = random_non_q_row(rng, rng.randint(2, 3))
        v = audit.a4_emptiness(L, G, 8)
        verdicts[v.verdict] += 1
        hit = a4_oracle(L, G.rank, 8)
        oracle_hits += hit
        unsound += hit and v.verdict == audit.PROVED_EMPTY
        beyond_box += v.verdict == audit.VIOLATION and not hit
        if v.verdict == audit.VIOLATION and len(violating_rows) < 5:
            violating_rows.append({"row": L.row_strings()[0], "witness": [str(x.value()) for x in v.witness]})
    ok = verdicts[audit.PROVED_EMPTY] == instances and oracle_hits == 0
    return CriterionResult(6, "A4: non-Q tori miss (G minus 1)^n", ok, {
        "verdicts": verdicts,
        "oracle_witnesses": oracle_hits,
        "oracle_contradicts_proved_empty": unsound,
        "violations_with_no_witness_in_box": beyond_box,
        "violation_examples": violating_rows,
    })


# ---------------------------------------------------------------------------
# 7. Mordell-Lang cover soundness


def random_linear_variety(rng):
    n = rng.randint(1, 3)
    e = rng.randint(1, min(2, n))
    while True:
        A = [[Fraction(rng.randint(-6, 6), 2) for _ in range(n)] for _ in range(e)]
        if all(any(r[j] for r in A) for j in range(n)):
            break
    c = [Fraction(rng.randint(-6, 6), 2) for _ in range(e)]
    return mlcover.VarietySpec.linear_in(n, A, c)


def criterion_7(instances: int = 20, bound: int = 12) -> CriterionResult:
    rng = _rng(7)
    G = multgroup.validate_basis([2, 3])
    failures, deletion_witness, items = [], None, 0
    for i in range(instances):
        W = random_linear_variety(rng)
        cover = mlcover.compute_ml_cover(W, G, bound)
        items += len(cover.items)
        check = mlcover.verify_cover(cover, W, G, bound)
        if not check.ok:
            failures.append({"instance": i, "variety": W.describe(), **check.to_dict()})
        if deletion_witness is None and cover.items and check.checked:
            if all(not mlcover.verify_cover(cover.without(j), W, G, bound).ok for j in range(len(cover.items))):
                deletion_witness = {"instance": i, "variety": W.describe(), "items": len(cover.items)}
    ok = not failures and deletion_witness is not None
    return CriterionResult(7, "Mordell-Lang covers verified at bound 12", ok, {
        "instances": instances,
        "total_items": items,
        "failures": failures,
        "deletion_breaks_cover": deletion_witness,
    })


# ---------------------------------------------------------------------------
# 8. purity closure against brute-force saturation


def _rational_solve(gens, v):
    """Coefficients x with x * gens = v (gens independent), or None."""
    M = sympy.Matrix(gens).T
    sol, params = M.gauss_jordan_solve(sympy.Matrix(v))
    return [Fraction(int(s.p), int(s.q)) for s in sol] if not params else None


def _bruteforce_saturated(gens, v, nmax=24):
    try:
        x = _rational_solve(gens, v)
    except ValueError:
        return False
    return any(all((n * c).denominator == 1 for c in x) for n in range(1, nmax + 1))


def _order_mod_lattice(gens, v):
    """Least n with n*v in the lattice, or None when v is outside its rational span."""
    try:
        x = _rational_solve(gens, v)
    except ValueError:
        return None
    return math.lcm(*(c.denominator for c in x)) if x else 1


def criterion_8(instances: int = 200) -> CriterionResult:
    rng = _rng(8)
    mismatches = []
    explained = 0
    for i in range(instances):
        r = rng.randint(1, 3)
        k = rng.randint(1, r)
        while True:
            gens = [[rng.randint(-4, 4) for _ in range(r)] for _ in range(k)]
            if sympy.Matrix(gens).rank() == k:
                break
        G = multgroup.validate_basis(PRIMES[:r])
        closure = multgroup.purity_closure(G, [G.element(g) for g in gens])
        R = 4 if r < 3 else 3
        bad = [list(v) for v in itertools.product(range(-R, R + 1), repeat=r)
               if multgroup.in_closure(closure, G.element(v)) != _bruteforce_saturated(gens, v)]
        bad += [list(b) for b in closure if not _bruteforce_saturated(gens, b)]
        if bad:
            orders = sorted({_order_mod_lattice(gens, v) or 0 for v in bad})
            explained += all(o > 24 for o in orders)
            mismatches.append({"instance": i, "generators": gens, "disagree": bad[:4],
                               "orders_mod_lattice": orders})
    return CriterionResult(8, "purity closure equals brute-force saturation", not mismatches, {
        "instances": instances,
        "mismatches": mismatches,
        "mismatches_with_order_above_24": explained,
    })


# ---------------------------------------------------------------------------
# 9. determinism


def corpus_files():
    root = resources.files("qtorus") / "corpus"
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


def criterion_9() -> CriterionResult:
    differing = []
    with tempfile.TemporaryDirectory() as tmp:
        for p in corpus_files():
            outs = []
            for jobs, tag in ((1, "a"), (2, "b")):
                out = Path(tmp) / f"{p.name}.{tag}"
                cli.main(["run", str(p), "--out", str(out), "--jobs", str(jobs)])
                outs.append(out.read_bytes())
            if outs[0] != outs[1]:
                differing.append(p.name)
    files = [p.name for p in corpus_files()]
    return CriterionResult(9, "cli run is byte-deterministic on the corpus", bool(files) and not differing, {
        "files": files,
        "differing": differing,
    })


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_all():
    return [c() for c in CRITERIA]


def selftest_report() -> dict:
    results = run_all()
    corpus = []
    for p in corpus_files():
        report, code = cli.run_text(p.read_text())
        entry = {"file": p.name, "exit_code": code}
        if code == 1:
            entry["error"] = json.loads(report)["error"]
        corpus.append(entry)
    return {
        "schema_version": cli.SCHEMA_VERSION,
        "criteria": [r.to_dict() for r in results],
        "corpus": corpus,
        "all_passed": all(r.passed for r in results) and all(c["exit_code"] != 1 for c in corpus),
    }
