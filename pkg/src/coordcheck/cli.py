"""``coordcheck`` command line: run scripts and individual kernel checks.

Exit codes: for ``check residual`` 0 = ResidualCoordinate,
1 = NotResidualCoordinate, 2 = Inconclusive; for verdict-valued checks
0 = Proven, 1 = Refuted, 2 = Exhausted; 3 = error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, List, Optional, Sequence, Union

from .criterion import (
    FPF_LND,
    PARTIALS,
    CriterionReport,
    corollary_b_report,
    field_coordinate_2var,
    theorem_a_check,
)
from .derivations import (
    DEFAULT_LND_BOUND,
    DEFAULT_SLICE_DEGREE,
    Derivation,
    Matrix,
    find_slice,
    is_fixed_point_free,
    is_locally_nilpotent,
    is_retraction,
    jacobian_derivation,
    jacobian_matrix,
    minors,
)
from .errors import CoordCheckError
from .groebner import Ideal, UnitCertificate, buchberger, step_budget
from .parser import (
    CheckDirective,
    IdealLiteral,
    MapLiteral,
    Script,
    parse,
    parse_polynomial,
    parse_ring,
)
from .poly import DEGREVLEX, LEX, Polynomial, RingPresentation
from .verdict import Status, Verdict, exhausted, proven, refuted

ERROR_EXIT = 3


@dataclass(frozen=True)
class GroebnerBasis:
    basis: tuple


Outcome = Union[CriterionReport, Verdict, GroebnerBasis, None]


@dataclass
class RunResult:
    directive: CheckDirective
    outcome: Outcome
    elapsed: float
    error: Optional[str] = None


# directive execution


def _lookup_poly(script: Script, name: str, ring: RingPresentation) -> Polynomial:
    value = script.bindings.get(name)
    if isinstance(value, Polynomial):
        return ring.convert(value)
    return ring.gen(name)


def _directive_derivation(d: CheckDirective, script: Script) -> Derivation:
    value = script.bindings.get(d.subject)
    if isinstance(value, MapLiteral):
        return Derivation(value.as_dict(), value.ring)
    ring = d.ring
    f = _lookup_poly(script, d.subject, ring)
    ts = [_lookup_poly(script, t, ring) for t in d.option("t-vars", ())]
    xs = d.option("x-vars") or ring.fibre_variables
    return jacobian_derivation([f] + ts, xs, ring)


def _unit_verdict(ideal: Ideal) -> Verdict:
    if ideal.is_unit():
        return proven(ideal.unit_certificate, "UNIT")
    return refuted(ideal.basis, "NOT-UNIT")


def execute(d: CheckDirective, script: Script) -> Outcome:
    """Run one directive against the bindings of its script."""
    ring = d.ring
    kind = d.kind
    if kind in ("residual", "corollary-b"):
        f = _lookup_poly(script, d.subject, ring)
        ts = d.option("t-vars")
        if kind == "corollary-b" or ts:
            return corollary_b_report(
                f,
                d.option("x-vars"),
                [_lookup_poly(script, t, ring) for t in ts],
                ring,
                generic_asserted=d.option("generic-asserted", False),
                lnd_bound=d.option("lnd-bound", DEFAULT_LND_BOUND),
                slice_degree=d.option("slice-degree", DEFAULT_SLICE_DEGREE),
            )
        return theorem_a_check(
            f,
            ring,
            generic_asserted=d.option("generic-asserted", False),
            stably_polynomial=d.option("stably-polynomial", False),
            variables=d.option("x-vars"),
        )
    if kind == "field-coordinate-2var":
        f = _lookup_poly(script, d.subject, ring)
        return field_coordinate_2var(
            f, d.option("lnd-bound", DEFAULT_LND_BOUND), d.option("slice-degree", DEFAULT_SLICE_DEGREE)
        )
    if kind == "lnd":
        return is_locally_nilpotent(_directive_derivation(d, script), d.option("bound", DEFAULT_LND_BOUND))
    if kind == "fpf":
        return is_fixed_point_free(_directive_derivation(d, script))
    if kind in ("groebner", "unit-ideal"):
        value = script.bindings.get(d.subject)
        if isinstance(value, IdealLiteral):
            ideal = Ideal(value.generators, value.ring)
        else:
            ideal = Ideal([_lookup_poly(script, d.subject, ring)], ring)
        if kind == "groebner":
            return GroebnerBasis(ideal.basis)
        return _unit_verdict(ideal)
    if kind == "retraction":
        value = script.bindings[d.subject]
        return is_retraction(value.as_dict(), value.ring)
    raise CoordCheckError(f"unknown directive kind {kind!r}")


def run_parsed(script: Script) -> List[RunResult]:
    results = []
    for d in script.directives:
        start = time.perf_counter()
        try:
            outcome, error = execute(d, script), None
        except CoordCheckError as exc:
            outcome, error = None, f"{d.line}:{d.column}: {exc}"
        results.append(RunResult(d, outcome, (time.perf_counter() - start) * 1000.0, error))
    return results


def run_script(path, flags: Optional[dict] = None) -> List[RunResult]:
    """Parse the script at ``path`` and execute its directives in order.

    ``flags`` may carry ``step_budget`` (S-pair reductions per Groebner run).
    """
    flags = flags or {}
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    script = parse(text)
    with step_budget(flags.get("step_budget")):
        return run_parsed(script)


# rendering


def _jsonable(obj) -> Any:
    if isinstance(obj, Polynomial):
        return str(obj)
    if isinstance(obj, Verdict):
        return {"status": obj.status.value, "witness": _jsonable(obj.witness), "note": obj.note}
    if isinstance(obj, UnitCertificate):
        return {
            "identity": str(obj),
            "terms": [
                {"kind": k, "generator": str(g), "cofactor": str(c)}
                for g, c, k in zip(obj.generators, obj.cofactors, obj.labels)
            ],
        }
    if isinstance(obj, Derivation):
        return {v: str(p) for v, p in obj.images.items()}
    if isinstance(obj, Matrix):
        return [[str(e) for e in row] for row in obj.rows]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _fmt(obj) -> str:
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in obj) + "]"
    return str(obj)


def _witness_lines(w, indent: str) -> List[str]:
    if isinstance(w, UnitCertificate):
        return [f"{indent}certificate: {w}"]
    if isinstance(w, (list, tuple)):
        return [f"{indent}basis: {_fmt(w)}"]
    if isinstance(w, Derivation):
        return [f"{indent}derivation: {w}"]
    if isinstance(w, dict):
        lines = []
        if w and all(isinstance(v, int) and not isinstance(v, bool) for v in w.values()):
            return [f"{indent}indices: " + ", ".join(f"{k}={v}" for k, v in w.items())]
        for k, v in w.items():
            if isinstance(v, Verdict):
                lines.extend(_verdict_lines(k, v, indent))
            elif isinstance(v, (UnitCertificate, dict)):
                lines.append(f"{indent}{k}:")
                lines.extend(_witness_lines(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_fmt(v)}")
        return lines
    if isinstance(w, int):
        return [f"{indent}bound: {w}"]
    return [f"{indent}witness: {w}"]


def _verdict_lines(label: str, v: Verdict, indent: str) -> List[str]:
    head = f"{indent}{label}: {v.status}"
    if v.note:
        head += f" ({v.note})"
    return [head] + _witness_lines(v.witness, indent + "  ")


def _status_and_conclusion(outcome: Outcome):
    if isinstance(outcome, CriterionReport):
        return outcome.conditions[PARTIALS].status.value, outcome.conclusion.value
    if isinstance(outcome, Verdict):
        return outcome.status.value, None
    if isinstance(outcome, GroebnerBasis):
        return "Computed", None
    return "Error", None


def format_result(r: RunResult, timing: bool = False) -> str:
    lines = [str(r.directive)]
    o = r.outcome
    if r.error is not None:
        lines.append(f"  error: {r.error}")
    elif isinstance(o, CriterionReport):
        for tag, v in o.conditions.items():
            lines.extend(_verdict_lines(tag, v, "  "))
        if FPF_LND in o.conditions and o.conditions[FPF_LND].exhausted:
            # an Exhausted (V) only carries its bound; show what was decided
            for name, v in o.kernel.items():
                lines.extend(_verdict_lines(f"kernel {name}", v, "  "))
        for name, ok in o.identities.items():
            lines.append(f"  identity {name}: {'holds' if ok else 'FAILS'}")
        lines.append(f"  conclusion: {o.conclusion}")
        lines.append(f"  reason: {o.reason}")
        lines.append("  hypotheses:")
        lines.extend(f"    - {h}" for h in o.hypotheses)
    elif isinstance(o, GroebnerBasis):
        lines.append(f"  basis: {_fmt(o.basis)}")
    elif r.directive.kind == "unit-ideal":
        lines.append("  UNIT" if o.proven else "  NOT-UNIT")
        lines.extend(_witness_lines(o.witness, "  "))
    else:
        lines.extend(_verdict_lines("status", o, "  "))
    if timing:
        lines.append(f"  elapsed: {r.elapsed:.1f} ms")
    return "\n".join(lines)


def emit(results: Sequence[RunResult], fmt: str = "text", timing: bool = False) -> str:
    """Render results as stable text blocks or as one JSON object per line."""
    if fmt == "json":
        out = []
        for r in results:
            status, conclusion = _status_and_conclusion(r.outcome)
            o = r.outcome
            if r.error is not None:
                witness, hypotheses = r.error, []
            elif isinstance(o, CriterionReport):
                witness = {
                    "conditions": _jsonable(o.conditions),
                    "kernel": _jsonable(o.kernel),
                    "identities": o.identities,
                    "reason": o.reason,
                }
                hypotheses = list(o.hypotheses)
            elif isinstance(o, GroebnerBasis):
                witness, hypotheses = _jsonable(o.basis), []
            else:
                witness, hypotheses = _jsonable(o), []
            record = {
                "directive": str(r.directive),
                "status": status,
                "conclusion": conclusion,
                "witness": witness,
                "hypotheses": hypotheses,
                "elapsed": round(r.elapsed, 3),
            }
            out.append(json.dumps(record, sort_keys=False))
        return "\n".join(out) + ("\n" if out else "")
    if not results:
        return ""
    return "\n\n".join(format_result(r, timing) for r in results) + "\n"


# argument handling


def _common(sub: argparse.ArgumentParser):
    sub.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    sub.add_argument("--step-budget", type=int, default=argparse.SUPPRESS, metavar="N",
                     help="abort Groebner computations after N S-pair reductions")


def _context_args(sub: argparse.ArgumentParser):
    sub.add_argument("--ring", help="ring expression, e.g. 'Q[x,y,z]/(x^2+y^2+z^2-1)[U,V,W]'")
    sub.add_argument("--script", help="script whose rings and bindings are in scope")


def _derivation_args(sub: argparse.ArgumentParser):
    sub.add_argument("items", nargs="+",
                     help="'v=image' pairs for an explicit derivation, or polynomials whose Jacobian derivation is used")
    sub.add_argument("--vars", help="comma-separated variables of the Jacobian derivation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coordcheck", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--step-budget", type=int, metavar="N")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("run", help="run a .ccs script")
    p.add_argument("file")
    p.add_argument("--timing", action="store_true", help="include elapsed time in text output")
    _common(p)

    p = subs.add_parser("groebner", help="reduced Groebner basis")
    p.add_argument("polys", nargs="+")
    p.add_argument("--order", choices=["lex", "degrevlex"])
    _context_args(p)
    _common(p)

    p = subs.add_parser("unit-ideal", help="decide whether polynomials generate the unit ideal")
    p.add_argument("polys", nargs="+")
    _context_args(p)
    _common(p)

    p = subs.add_parser("jacobian", help="Jacobian matrix")
    p.add_argument("polys", nargs="+")
    p.add_argument("--vars")
    _context_args(p)
    _common(p)

    p = subs.add_parser("minors", help="k x k minors of a Jacobian matrix")
    p.add_argument("polys", nargs="+")
    p.add_argument("--vars")
    p.add_argument("--size", type=int, required=True)
    _context_args(p)
    _common(p)

    for name, help_ in (("lnd-check", "bounded local nilpotency"), ("fpf-check", "fixed-point-freeness"),
                        ("slice", "search for a slice")):
        p = subs.add_parser(name, help=help_)
        _derivation_args(p)
        if name == "lnd-check":
            p.add_argument("--bound", type=int, default=DEFAULT_LND_BOUND)
        if name == "slice":
            p.add_argument("--degree", type=int, default=DEFAULT_SLICE_DEGREE)
        _context_args(p)
        _common(p)

    p = subs.add_parser("retraction-check", help="idempotence of a ring endomorphism")
    p.add_argument("items", nargs="+", help="'v=image' pairs; unmapped variables are fixed")
    _context_args(p)
    _common(p)

    p = subs.add_parser("check", help="residual-coordinate criterion")
    p.add_argument("kind", choices=["residual"])
    p.add_argument("subject")
    p.add_argument("--generic-asserted", action="store_true")
    p.add_argument("--stably-polynomial", action="store_true")
    p.add_argument("--t-vars", help="comma-separated stable variables (names or bound polynomials)")
    p.add_argument("--x-vars", help="comma-separated polynomial variables")
    p.add_argument("--lnd-bound", type=int, default=DEFAULT_LND_BOUND)
    p.add_argument("--slice-degree", type=int, default=DEFAULT_SLICE_DEGREE)
    _context_args(p)
    _common(p)
    return parser


def _context(args):
    rings, bindings, ring = {}, {}, None
    if args.script:
        with open(args.script, encoding="utf-8") as fh:
            script = parse(fh.read())
        rings, bindings, ring = script.rings, script.bindings, script.current_ring
    if args.ring:
        ring = parse_ring(args.ring, rings)
    if ring is None:
        raise CoordCheckError("give --ring or --script to declare the ambient ring")
    return ring, bindings


def _split(text: Optional[str]):
    return [t.strip() for t in text.split(",") if t.strip()] if text else None


def _derivation_from_items(items, ring, bindings, variables) -> Derivation:
    pairs = [i for i in items if "=" in i]
    if pairs and len(pairs) != len(items):
        raise CoordCheckError("mix of 'v=image' pairs and plain polynomials")
    if pairs:
        images = {}
        for item in pairs:
            v, expr = item.split("=", 1)
            images[v.strip()] = parse_polynomial(expr, ring, bindings)
        return Derivation(images, ring)
    polys = [parse_polynomial(i, ring, bindings) for i in items]
    return jacobian_derivation(polys, variables or ring.fibre_variables, ring)


def _print_verdict(v: Verdict, as_json: bool, label: str = "status"):
    if as_json:
        print(json.dumps(_jsonable(v)))
    else:
        print("\n".join(_verdict_lines(label, v, "")))


_VERDICT_EXIT = {Status.PROVEN: 0, Status.REFUTED: 1, Status.EXHAUSTED: 2}


def _dispatch(args) -> int:
    as_json = getattr(args, "json", False)
    cmd = args.command
    if cmd == "run":
        results = run_script(args.file)
        sys.stdout.write(emit(results, "json" if as_json else "text", getattr(args, "timing", False)))
        return ERROR_EXIT if any(r.error for r in results) else 0

    ring, bindings = _context(args)
    if cmd in ("groebner", "unit-ideal", "jacobian", "minors"):
        polys = [parse_polynomial(p, ring, bindings) for p in args.polys]
    if cmd == "groebner":
        order = {"lex": LEX, "degrevlex": DEGREVLEX}.get(args.order) if args.order else None
        if order is None:
            basis = list(Ideal(polys, ring).basis)
        else:
            basis = buchberger(polys + list(ring.relations), order)
        if as_json:
            print(json.dumps([str(b) for b in basis]))
        else:
            print("\n".join(str(b) for b in basis))
        return 0
    if cmd == "unit-ideal":
        v = _unit_verdict(Ideal(polys, ring))
        if as_json:
            print(json.dumps(_jsonable(v)))
        else:
            print("UNIT" if v.proven else "NOT-UNIT")
            print("\n".join(_witness_lines(v.witness, "")))
        return _VERDICT_EXIT[v.status]
    if cmd in ("jacobian", "minors"):
        variables = _split(args.vars) or list(ring.fibre_variables)
        m = jacobian_matrix(polys, variables)
        if cmd == "jacobian":
            print(json.dumps(_jsonable(m)) if as_json else "\n".join(
                "[" + ", ".join(str(e) for e in row) + "]" for row in m.rows))
        else:
            ms = minors(m, args.size)
            print(json.dumps(_jsonable(ms)) if as_json else "\n".join(str(e) for e in ms))
        return 0
    if cmd in ("lnd-check", "fpf-check", "slice"):
        d = _derivation_from_items(args.items, ring, bindings, _split(args.vars))
        if cmd == "lnd-check":
            v = is_locally_nilpotent(d, args.bound)
        elif cmd == "fpf-check":
            v = is_fixed_point_free(d)
        else:
            g = find_slice(d, args.degree)
            v = proven({"slice": g}, "D(g) = 1") if g is not None else exhausted(args.degree, "no slice up to the degree bound")
        _print_verdict(v, as_json)
        return _VERDICT_EXIT[v.status]
    if cmd == "retraction-check":
        images = {}
        for item in args.items:
            if "=" not in item:
                raise CoordCheckError(f"expected 'v=image', got {item!r}")
            var, expr = item.split("=", 1)
            images[var.strip()] = parse_polynomial(expr, ring, bindings)
        v = is_retraction(images, ring)
        _print_verdict(v, as_json)
        return _VERDICT_EXIT[v.status]
    if cmd == "check":
        f = parse_polynomial(args.subject, ring, bindings)
        ts = _split(args.t_vars)
        if ts:
            report = corollary_b_report(
                f, _split(args.x_vars), [parse_polynomial(t, ring, bindings) for t in ts], ring,
                generic_asserted=args.generic_asserted, lnd_bound=args.lnd_bound,
                slice_degree=args.slice_degree,
            )
        else:
            report = theorem_a_check(
                f, ring, generic_asserted=args.generic_asserted,
                stably_polynomial=args.stably_polynomial, variables=_split(args.x_vars),
            )
        directive = CheckDirective("residual", args.subject, ring=ring)
        result = RunResult(directive, report, 0.0)
        sys.stdout.write(emit([result], "json" if as_json else "text"))
        return report.conclusion.exit_code
    raise CoordCheckError(f"unknown command {cmd!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with step_budget(getattr(args, "step_budget", None)):
            return _dispatch(args)
    except (CoordCheckError, OSError) as exc:
        print(f"coordcheck: error: {exc}", file=sys.stderr)
        return ERROR_EXIT


if __name__ == "__main__":
    sys.exit(main())
