"""Command-line front end: batch problem files and one subcommand per task type.

A problem file is JSON::

    {"group": {"mode": "rational", "basis": ["2", "3"], "divisible": false},
     "limits": {"max_search": 100000000, "max_classes": 1000000},
     "tasks": [{"id": "t1", "type": "mann-solve", "coefficients": [1, 1], "rhs": 1, "bound": 10}]}

Reports are JSON with sorted keys and exact rationals written as strings.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import audit, cosets, mann, mlcover, multgroup, torus
from .errors import ArityMismatch, InvalidInput, ParseError, QTorusError
from .kfield import FieldMode, Kind

SCHEMA_VERSION = 1
TASK_TYPES = (
    "ldim", "lfo", "torus-dim", "minimal-torus", "mann-solve", "coset-normalize",
    "special-check", "ml-cover", "schanuel-audit", "density-check", "a4-check",
    "a3-check", "index", "purity",
)
DEFAULT_LIMITS = {"max_search": mann.DEFAULT_MAX_SEARCH, "max_classes": cosets.DEFAULT_MAX_CLASSES}


# ---------------------------------------------------------------------------
# problem file parsing


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def load_problem(text: str) -> dict:
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise ParseError(str(exc), None, None) from None
    if not isinstance(doc, dict):
        raise ParseError("a problem file is a JSON object", 1, 1)
    if "group" not in doc or not isinstance(doc["group"], dict):
        raise ParseError("missing group declaration", None, None)
    tasks = doc.get("tasks", [])
    if not isinstance(tasks, list) or not all(isinstance(t, dict) for t in tasks):
        raise ParseError("tasks must be a list of objects", None, None)
    limits = {**DEFAULT_LIMITS, **doc.get("limits", {})}
    for k, v in limits.items():
        if not isinstance(v, int) or v < 1:
            raise ParseError(f"limit {k} must be a positive integer", None, None)
    for i, t in enumerate(tasks):
        t.setdefault("id", f"task-{i + 1}")
        if t.get("type") not in TASK_TYPES:
            raise ParseError(f"task {t['id']!r} has unknown type {t.get('type')!r}", None, None)
    return {"group": doc["group"], "limits": limits, "tasks": tasks}


def build_mode(decl: dict) -> FieldMode:
    kind = Kind(str(decl.get("mode", "rational")).lower())
    if kind is Kind.ALGEBRAIC_TAU:
        return FieldMode.algebraic(decl["minimal_polynomial"])
    return FieldMode(kind)


def build_group(decl: dict) -> multgroup.GroupPresentation:
    return multgroup.validate_basis(
        [Fraction(str(b)) for b in decl.get("basis", [])],
        build_mode(decl),
        bool(decl.get("divisible", False)),
    )


def _elements(G, specs):
    return [G.parse_element(s) for s in specs]


def _torus(G, spec) -> torus.TorusSpec:
    rows = spec.get("rows", [])
    m = int(spec.get("m", 0))
    if rows:
        n = len(rows[0]) - m
    elif "n" in spec:
        n = int(spec["n"])
    else:
        raise InvalidInput("a torus without rows needs its arity n")
    if "n" in spec and int(spec["n"]) != n:
        raise ArityMismatch(f"rows of width {n + m} for declared m={m}, n={spec['n']}")
    return torus.TorusSpec.make([[str(x) for x in r] for r in rows], n, m, G.mode)


def _variety(G, spec) -> mlcover.VarietySpec:
    kind = str(spec.get("kind", "")).lower()
    if kind == mlcover.LINEAR:
        matrix = [[Fraction(str(x)) for x in r] for r in spec.get("matrix", [])]
        consts = [Fraction(str(c)) for c in spec.get("constants", [])]
        n = int(spec["n"]) if "n" in spec else (len(matrix[0]) if matrix else None)
        if n is None:
            raise InvalidInput("a linear variety without equations needs its arity n")
        if len(consts) != len(matrix):
            raise ArityMismatch("one constant per equation is required")
        return mlcover.VarietySpec.linear_in(n, matrix, consts)
    if kind == mlcover.POINTS:
        return mlcover.VarietySpec.from_points([[str(x) for x in p] for p in spec.get("points", [])])
    if kind == mlcover.BINOMIAL:
        return mlcover.VarietySpec.binomial(_torus(G, spec["torus"]), [G.parse_element(s) for s in spec["shift"]])
    raise InvalidInput(f"unknown variety kind {spec.get('kind')!r}")


# ---------------------------------------------------------------------------
# task dispatch


def _task_ldim(G, t, lim):
    return {"value": multgroup.ldim_k(_elements(G, t["elements"]), _elements(G, t.get("over", [])))}


def _task_lfo(G, t, lim):
    return {"value": multgroup.lfo(_elements(G, t["elements"]), _elements(G, t.get("over", [])))}


def _task_torus_dim(G, t, lim):
    L = _torus(G, t["torus"])
    return {"dim": torus.torus_dim(L), "q_torus": torus.is_q_torus(L), "rows": L.row_strings()}


def _task_minimal_torus(G, t, lim):
    L = torus.minimal_torus(_elements(G, t.get("b", [])), _elements(G, t["a"]))
    return L.describe()


def _task_mann(G, t, lim):
    p = mann.MannProblem(tuple(Fraction(str(a)) for a in t["coefficients"]), G,
                         Fraction(str(t.get("rhs", 1))), int(t.get("bound", 10)))
    out = mann.enumerate_solutions(p, max_search=lim["max_search"]).to_dict()
    if "stabilization" in t:
        out["stabilization"] = mann.stabilization_report(p, t["stabilization"], max_search=lim["max_search"])
    return out


def _task_cosets(G, t, lim):
    expr = cosets.parse_constraints(t["constraints"], G.rank)
    U = cosets.coset_normalize(expr, G, t.get("n"), max_classes=lim["max_classes"])
    return U.to_dict()


def _task_special(G, t, lim):
    W = _variety(G, t["variety"])
    L = _torus(G, t["torus"]) if "torus" in t else torus.TorusSpec.full(W.n, 0, G.mode)
    if "points" in t:
        v = mlcover.special_pair_check(W, L, G, t["points"])
    else:
        v = mlcover.special_pair_check(W, L, G, bound=int(t.get("bound", 5)), max_search=lim["max_search"])
    return v.to_dict()


def _task_ml_cover(G, t, lim):
    W = _variety(G, t["variety"])
    bound = int(t.get("bound", 10))
    cover = mlcover.compute_ml_cover(W, G, bound, max_search=lim["max_search"])
    out = cover.to_dict()
    vb = t.get("verify_bound", bound)
    if vb:
        out["verification"] = {"bound": int(vb), **mlcover.verify_cover(
            cover, W, G, int(vb), max_search=lim["max_search"]).to_dict()}
    if t.get("emit_axiom"):
        L = _torus(G, t["torus"]) if "torus" in t else None
        out["axiom"] = mlcover.emit_ml_axiom(W, L, cover)
    return out


def _task_schanuel(G, t, lim):
    td = t.get("declared_td")
    return audit.schanuel_audit(_elements(G, t["elements"]), None if td is None else int(td)).to_dict()


def _task_density(G, t, lim):
    return {"dense": audit.density_check(G), "rank": G.rank, "divisible": G.divisible}


def _task_a4(G, t, lim):
    return audit.a4_emptiness(_torus(G, t["torus"]), G, int(t.get("bound", 8))).to_dict()


def _task_a3(G, t, lim):
    sub = t["subgroup"]
    Gamma = multgroup.validate_basis([Fraction(str(b)) for b in sub.get("basis", [])], G.mode,
                                     bool(sub.get("divisible", False)))
    table = audit.index_table(Gamma, G, int(t.get("d_max", 5)))
    return {
        "equal": all(a == b for _, a, b in table),
        "table": [{"d": d, "subgroup": a, "group": b} for d, a, b in table],
    }


def _task_index(G, t, lim):
    return {"d": int(t["d"]), "value": multgroup.subgroup_index(G, int(t["d"]))}


def _task_purity(G, t, lim):
    H = _elements(G, t.get("H", []))
    A = _elements(G, t.get("A", []))
    return {"closure": multgroup.purity_closure(G, H, A)}


HANDLERS = {
    "ldim": _task_ldim,
    "lfo": _task_lfo,
    "torus-dim": _task_torus_dim,
    "minimal-torus": _task_minimal_torus,
    "mann-solve": _task_mann,
    "coset-normalize": _task_cosets,
    "special-check": _task_special,
    "ml-cover": _task_ml_cover,
    "schanuel-audit": _task_schanuel,
    "density-check": _task_density,
    "a4-check": _task_a4,
    "a3-check": _task_a3,
    "index": _task_index,
    "purity": _task_purity,
}


def run_task(group_decl: dict, limits: dict, task: dict) -> dict:
    record = {"id": task["id"], "type": task["type"]}
    try:
        G = build_group(group_decl)
        record["result"] = HANDLERS[task["type"]](G, task, limits)
        record["status"] = "ok"
    except QTorusError as exc:
        record.update(status="error", error=exc.to_dict())
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        name = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        record.update(status="error", error={"code": "INVALID_INPUT", "message": name})
    return record


def _run_one(args):
    return run_task(*args)


def run_problem(problem: dict, jobs: int = 1) -> dict:
    work = [(problem["group"], problem["limits"], t) for t in problem["tasks"]]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work))
    else:
        results = [_run_one(w) for w in work]
    return {"schema_version": SCHEMA_VERSION, "results": results}


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def run_text(text: str, jobs: int = 1) -> tuple[str, int]:
    """Run a problem given as text; returns (report, exit code)."""
    try:
        problem = load_problem(text)
    except ParseError as exc:
        return render({"schema_version": SCHEMA_VERSION, "error": exc.to_dict()}), 1
    report = run_problem(problem, jobs)
    code = 0 if all(r["status"] == "ok" for r in report["results"]) else 2
    return render(report), code


# ---------------------------------------------------------------------------
# argument handling


def _split_top(text: str):
    """Split on commas outside brackets: '[1],[t,2]' -> ['[1]', '[t,2]']."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += (ch == "[") - (ch == "]")
        cur += ch
    if cur.strip():
        out.append(cur)
    return [s.strip() for s in out if s.strip()]


def _element_specs(values):
    specs = []
    for v in values or []:
        for item in _split_top(v):
            if item.startswith("["):
                specs.append([x.strip() for x in item.strip("[]").split(",") if x.strip()])
            else:
                specs.append(item)
    return specs


def _csv(text):
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


def _json_arg(text):
    if text is None:
        return None
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    return json.loads(Path(text).read_text())


def _rows_arg(text, m=0):
    if text is None:
        return None
    rows = [_csv(r) for r in text.split(";") if r.strip()]
    return {"rows": rows, "m": m}


def _task_from_args(ns) -> dict:
    t = {"id": ns.command, "type": ns.command}
    c = ns.command
    if c in ("ldim", "lfo", "schanuel-audit"):
        t["elements"] = _element_specs(ns.elements)
        if c != "schanuel-audit":
            t["over"] = _element_specs(ns.over)
        else:
            t["declared_td"] = ns.td
    elif c in ("torus-dim", "a4-check"):
        t["torus"] = _json_arg(ns.torus) if ns.torus else _rows_arg(ns.rows, ns.m)
        if c == "a4-check":
            t["bound"] = ns.bound
    elif c == "minimal-torus":
        t["b"] = _element_specs(ns.b)
        t["a"] = _element_specs(ns.a)
    elif c == "mann-solve":
        t.update(coefficients=_csv(ns.coeffs), rhs=ns.rhs, bound=ns.bound)
        if ns.stabilize:
            t["stabilization"] = [int(x) for x in _csv(ns.stabilize)]
    elif c == "coset-normalize":
        t["constraints"] = ns.constraints
        if ns.n is not None:
            t["n"] = ns.n
    elif c in ("special-check", "ml-cover"):
        t["variety"] = _json_arg(ns.variety)
        tor = _json_arg(ns.torus) if ns.torus else _rows_arg(ns.rows, 0)
        if tor is not None:
            t["torus"] = tor
        t["bound"] = ns.bound
        if c == "special-check" and ns.points:
            t["points"] = _json_arg(ns.points)
        if c == "ml-cover":
            t["verify_bound"] = ns.verify_bound if ns.verify_bound is not None else ns.bound
            t["emit_axiom"] = ns.emit_axiom
    elif c == "a3-check":
        t["subgroup"] = {"basis": _csv(ns.sub_basis), "divisible": ns.sub_divisible}
        t["d_max"] = ns.d_max
    elif c == "index":
        t["d"] = ns.d
    elif c == "purity":
        t["H"] = _element_specs(ns.H)
        t["A"] = _element_specs(ns.A)
    return t


def _add_group_flags(p):
    p.add_argument("--basis", default="", help="comma-separated positive rationals")
    p.add_argument("--mode", default="rational", choices=[k.value for k in Kind])
    p.add_argument("--minpoly", help="minimal polynomial for algebraic_tau, e.g. 'x^2-2'")
    p.add_argument("--divisible", action="store_true")
    p.add_argument("--max-search", type=int, default=DEFAULT_LIMITS["max_search"])
    p.add_argument("--max-classes", type=int, default=DEFAULT_LIMITS["max_classes"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtorus", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a problem file")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("selftest", help="run the acceptance checks and the bundled corpus")
    p.add_argument("--out")

    def task(name, help_):
        q = sub.add_parser(name, help=help_)
        _add_group_flags(q)
        return q

    for name in ("ldim", "lfo"):
        q = task(name, f"{name} of elements over a base tuple")
        q.add_argument("--elements", nargs="+", required=True, help='e.g. "[1,0]","[t,1]" or 6,3/2')
        q.add_argument("--over", nargs="*")
    q = task("schanuel-audit", "Schanuel condition report")
    q.add_argument("--elements", nargs="+", required=True)
    q.add_argument("--td", type=int)
    for name in ("torus-dim", "a4-check"):
        q = task(name, "torus dimension" if name == "torus-dim" else "A4 emptiness for a non-Q torus")
        q.add_argument("--torus", help="torus JSON file or inline JSON")
        q.add_argument("--rows", help='rows separated by ";", e.g. "t,-1"')
        q.add_argument("--m", type=int, default=0)
        if name == "a4-check":
            q.add_argument("--bound", type=int, default=8)
    q = task("minimal-torus", "minimal torus over b through a")
    q.add_argument("--b", nargs="*")
    q.add_argument("--a", nargs="+", required=True)
    q = task("mann-solve", "bounded Mann equation solver")
    q.add_argument("--coeffs", required=True)
    q.add_argument("--rhs", default="1")
    q.add_argument("--bound", type=int, default=10)
    q.add_argument("--stabilize", help="ascending bounds, e.g. 8,10,12")
    q = task("coset-normalize", "normalize a coset constraint formula")
    q.add_argument("--constraints", required=True)
    q.add_argument("--n", type=int)
    for name in ("special-check", "ml-cover"):
        q = task(name, "special pair check" if name == "special-check" else "Mordell-Lang cover")
        q.add_argument("--variety", required=True, help="variety JSON file or inline JSON")
        q.add_argument("--torus")
        q.add_argument("--rows")
        q.add_argument("--bound", type=int, default=10 if name == "ml-cover" else 5)
        if name == "special-check":
            q.add_argument("--points", help="JSON list of candidate tuples")
        else:
            q.add_argument("--verify-bound", type=int)
            q.add_argument("--emit-axiom", action="store_true")
    task("density-check", "A2 density of the group")
    q = task("a3-check", "A3 index comparison")
    q.add_argument("--sub-basis", required=True)
    q.add_argument("--sub-divisible", action="store_true")
    q.add_argument("--d-max", type=int, default=5)
    q = task("index", "index of the d-th powers")
    q.add_argument("--d", type=int, required=True)
    q = task("purity", "pure closure of H and A")
    q.add_argument("--H", nargs="*")
    q.add_argument("--A", nargs="*")
    return parser


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.command == "run":
        try:
            text = Path(ns.file).read_text()
        except OSError as exc:
            sys.stderr.write(f"qtorus: {exc}\n")
            return 1
        report, code = run_text(text, ns.jobs)
        _emit(report, ns.out)
        return code
    if ns.command == "selftest":
        from .acceptance import selftest_report

        report = selftest_report()
        _emit(render(report), ns.out)
        return 0 if report["all_passed"] else 2
    group = {"mode": ns.mode, "basis": _csv(ns.basis), "divisible": ns.divisible}
    if ns.minpoly:
        group["minimal_polynomial"] = ns.minpoly
    limits = {"max_search": ns.max_search, "max_classes": ns.max_classes}
    try:
        task = _task_from_args(ns)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"qtorus: {exc}\n")
        return 1
    record = run_task(group, limits, task)
    _emit(render({"schema_version": SCHEMA_VERSION, "results": [record]}), None)
    return 0 if record["status"] == "ok" else 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
