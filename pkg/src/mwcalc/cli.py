"""Command-line front end: ``mwcalc <verb> ...``.

Exit codes: 0 verified, 1 refuted, 2 usage or parse error, 3 resource bound.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .derivations import DERIVATIONS, as_group_element, check_values, derive
from .engine import DEFAULT_TERM_BOUND, MwExpr, TermBoundExceeded, normalize
from .fa1 import BasisBoundExceeded, Fa1Element, fa1_commutator, hk2_member
from .fields import (
    UnsupportedBackendError,
    evaluate_unit,
    get_backend,
    probe,
    random_assignment,
)
from .hurewicz import hurewicz
from .parser import EvalError, ParseError, Value, parse_value
from .presentations import BoundError, eta_sequence_exactness_finite, kmw_finite_field

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3
DEFAULT_SEED = 20240229


class UsageError(Exception):
    pass


def _render(v: Value) -> str:
    return str(v) if isinstance(v, Fa1Element) else str(normalize(v))


def _value(text: str, term_bound: int) -> Value:
    v = parse_value(text)
    if isinstance(v, MwExpr):
        return normalize(v, term_bound=term_bound)
    return v


def _emit(args, report: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2, default=str))
    else:
        print("\n".join(lines))


def _report(command, inputs, normal_forms, verdict, trace=None) -> dict:
    out = {"command": command, "inputs": inputs, "normal_forms": normal_forms, "verdict": verdict}
    if trace is not None:
        out["trace"] = trace
    return out


def _verdict(ok: bool) -> str:
    return "verified" if ok else "refuted"


def _field_id(field: str | None) -> str:
    field = field or "F5"
    try:
        get_backend(field)
    except UnsupportedBackendError as e:
        raise UsageError(str(e)) from None
    return field


def _parse_assignment(text: str, field: str) -> dict[str, int]:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"bad assignment {part!r}, expected NAME=VALUE")
        val = val.strip()
        if field == "R":
            if val in ("+", "-"):
                out[name.strip()] = 1 if val == "+" else -1
                continue
            raise UsageError(f"real backend takes signs + or -, got {val!r}")
        try:
            out[name.strip()] = int(val)
        except ValueError:
            raise UsageError(f"bad value {val!r} for {name}") from None
    return out


# -- verbs -------------------------------------------------------------------

def cmd_normalize(args) -> int:
    v = parse_value(args.expr)
    trace_json = None
    lines = []
    if isinstance(v, Fa1Element):
        nf = str(v)
    elif args.trace:
        res, trace = normalize(v, trace=True, term_bound=args.term_bound)
        nf = str(res)
        trace_json = trace.to_json()
        lines += [str(s) for s in trace.steps]
    else:
        nf = str(normalize(v, term_bound=args.term_bound))
    lines.insert(0, nf)
    _emit(args, _report("normalize", [args.expr], [nf], "ok", trace_json), lines)
    return EXIT_OK


def cmd_check(args) -> int:
    terms = list(args.terms)
    if len(terms) == 3 and terms[1] == "=":
        terms = [terms[0], terms[2]]
    if len(terms) != 2:
        raise UsageError('check takes LHS RHS or LHS = RHS')
    lhs, rhs = (parse_value(t) for t in terms)
    ok = check_values(lhs, rhs)
    nfs = [_render(lhs), _render(rhs)]
    lines = [f"lhs: {nfs[0]}", f"rhs: {nfs[1]}"]
    trace_json = None
    if args.trace:
        trace_json = []
        for side, v in zip(("lhs", "rhs"), (lhs, rhs)):
            parts = [v.k2_part] if isinstance(v, Fa1Element) else [v]
            for p in parts:
                _, t = normalize(p, trace=True, term_bound=args.term_bound)
                trace_json.append({"side": side, "steps": t.to_json()})
                lines += [f"  {side}: {s}" for s in t.steps]
    lines.append(_verdict(ok))
    _emit(args, _report("check", terms, nfs, _verdict(ok), trace_json), lines)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_derive(args) -> int:
    if args.name not in DERIVATIONS:
        raise UsageError(f"unknown derivation {args.name!r}; known: {', '.join(DERIVATIONS)}")
    rep = derive(args.name)
    lines = [f"derivation {rep.name}"]
    lines += [str(s) for s in rep.steps]
    lines.append(f"{rep.verified_count}/{len(rep.steps)} steps verified")
    steps = [
        {"lhs": s.lhs, "rhs": s.rhs, "citation": s.citation, "verified": s.verified,
         "lhs_nf": s.lhs_nf, "rhs_nf": s.rhs_nf}
        for s in rep.steps
    ]
    report = _report("derive", [args.name], [[s.lhs_nf, s.rhs_nf] for s in rep.steps], _verdict(rep.ok))
    report["steps"] = steps
    _emit(args, report, lines)
    return EXIT_OK if rep.ok else EXIT_REFUTED


def cmd_commutator(args) -> int:
    x = as_group_element(parse_value(args.x))
    y = as_group_element(parse_value(args.y))
    c = fa1_commutator(x, y)
    member, witness = hk2_member(c.k2_part) if c.unit_part.is_one else (False, None)
    lines = [f"[x, y] = {c}"]
    if witness is not None:
        lines.append(f"       = h * ({witness})")
    report = _report("commutator", [args.x, args.y], [str(c)], "ok")
    report["in_hK2"] = member
    report["witness"] = None if witness is None else str(witness)
    _emit(args, report, lines)
    return EXIT_OK


def cmd_hurewicz(args) -> int:
    x = as_group_element(parse_value(args.expr))
    out = hurewicz(x)
    _emit(args, _report("hurewicz", [args.expr], [str(x), str(out)], "ok"), [f"H({x}) = {out}"])
    return EXIT_OK


def cmd_member(args) -> int:
    v = parse_value(args.expr)
    if isinstance(v, Fa1Element):
        if not v.unit_part.is_one:
            raise UsageError("membership is tested on degree-2 elements")
        v = v.k2_part
    v = normalize(v, term_bound=args.term_bound)
    ok, witness = hk2_member(v)
    lines = [str(v), f"in h*K2: {'yes' if ok else 'no'}"]
    if ok:
        lines.append(f"witness beta = {witness}")
    report = _report("member-hk2", [args.expr], [str(v)], _verdict(ok))
    report["witness"] = None if witness is None else str(witness)
    _emit(args, report, lines)
    return EXIT_OK if ok else EXIT_REFUTED


def _finite_q(field: str | None) -> int:
    field = _field_id(field)
    if field == "R":
        raise UsageError("this verb needs a finite field")
    return int(field[1:])


def cmd_kmw(args) -> int:
    q = _finite_q(args.field)
    model = kmw_finite_field(q, args.degree)
    g = model.group
    lines = [
        f"K^MW_{args.degree}(F_{q}) = {g.describe()}",
        f"  elements: {model.order}",
        f"  invariant factors: {list(g.invariants)}",
        f"  free rank: {g.free_rank}",
    ]
    report = _report("kmw", [f"F{q}", args.degree], [g.describe()], "ok")
    report["invariants"] = [int(d) for d in g.invariants]
    report["order"] = model.order
    _emit(args, report, lines)
    return EXIT_OK


def cmd_exactness(args) -> int:
    q = _finite_q(args.field)
    rep = eta_sequence_exactness_finite(q, args.degree)
    lines = [f"q={q} n={args.degree}"]
    lines += [f"  |{k}| = {v}" for k, v in rep.orders.items()]
    lines.append(f"  eta*h = 0: {rep.eta_h_vanishes}")
    lines.append(f"  exact: {rep.exact}")
    ok = rep.exact and rep.eta_h_vanishes
    report = _report("exactness", [f"F{q}", args.degree], {k: int(v) for k, v in rep.orders.items()}, _verdict(ok))
    _emit(args, report, lines)
    return EXIT_OK if ok else EXIT_REFUTED


def _probe_value(v: Value, assignment, field: str):
    """Witt class of the K-part and, for group elements, the value of the unit."""
    if isinstance(v, Fa1Element):
        return probe(v.k2_part, assignment, field), evaluate_unit(v.unit_part, assignment, field)
    return probe(v, assignment, field), None


def _assignments(args, variables):
    if args.assign:
        fixed = _parse_assignment(args.assign, args.field)
        missing = set(variables) - set(fixed)
        if missing:
            raise UsageError(f"no value for {', '.join(sorted(missing))}")
        return [fixed]
    rng = random.Random(args.seed)
    return [random_assignment(sorted(variables), args.field, rng) for _ in range(args.trials)]


def _variables(v: Value) -> set[str]:
    if isinstance(v, Fa1Element):
        return set(v.k2_part.variables()) | set(v.unit_part.variables)
    return set(normalize(v).variables())


def cmd_probe(args) -> int:
    args.field = _field_id(args.field)
    v = parse_value(args.expr)
    rows = []
    for a in _assignments(args, _variables(v)):
        w, u = _probe_value(v, a, args.field)
        rows.append({"assignment": a, "witt": str(w), "unit": u})
    lines = [f"{args.expr} over {args.field}"]
    for r in rows:
        extra = f"  unit {r['unit']}" if r["unit"] is not None else ""
        lines.append(f"  {r['assignment']} -> {r['witt']}{extra}")
    report = _report("probe", [args.expr], [_render(v)], "ok")
    report["field"] = args.field
    report["samples"] = rows
    _emit(args, report, lines)
    return EXIT_OK


def cmd_probe_compare(args) -> int:
    args.field = _field_id(args.field)
    a, b = parse_value(args.a), parse_value(args.b)
    if isinstance(a, Fa1Element) or isinstance(b, Fa1Element):
        a, b = as_group_element(a), as_group_element(b)
    agree = 0
    assignments = _assignments(args, _variables(a) | _variables(b))
    for asg in assignments:
        if _probe_value(a, asg, args.field) == _probe_value(b, asg, args.field):
            agree += 1
    rate = agree / len(assignments)
    ok = agree == len(assignments)
    lines = [f"agreement {agree}/{len(assignments)} ({100 * rate:.1f}%) over {args.field}", _verdict(ok)]
    report = _report("probe-compare", [args.a, args.b], [_render(a), _render(b)], _verdict(ok))
    report["agreement"] = rate
    _emit(args, report, lines)
    return EXIT_OK if ok else EXIT_REFUTED


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--trace", action="store_true", help="include rewrite traces")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--field", default=None, help="F3, F5, F7, F9 or R")
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--term-bound", type=int, default=DEFAULT_TERM_BOUND)

    p = argparse.ArgumentParser(prog="mwcalc", description="Milnor-Witt K-theory calculator")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("normalize", parents=[common], help="print the normal form")
    s.add_argument("expr")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("check", parents=[common], help="decide LHS = RHS")
    s.add_argument("terms", nargs="+", metavar="LHS [=] RHS")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("derive", parents=[common], help="replay a named chain")
    s.add_argument("name", help=", ".join(DERIVATIONS))
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("commutator", parents=[common], help="commutator of two group elements")
    s.add_argument("x")
    s.add_argument("y")
    s.set_defaults(func=cmd_commutator)

    s = sub.add_parser("hurewicz", parents=[common], help="image in K^MW_1")
    s.add_argument("expr")
    s.set_defaults(func=cmd_hurewicz)

    s = sub.add_parser("member-hk2", parents=[common], help="test membership in h*K2")
    s.add_argument("expr")
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("kmw", parents=[common], help="K^MW_n of a finite field")
    s.add_argument("--degree", type=int, default=2)
    s.set_defaults(func=cmd_kmw)

    s = sub.add_parser("exactness", parents=[common], help="check 0 -> hK_n -> K_n -> K_{n-1} over F_q")
    s.add_argument("--degree", type=int, default=2)
    s.set_defaults(func=cmd_exactness)

    s = sub.add_parser("probe", parents=[common], help="evaluate in the Witt ring")
    s.add_argument("expr")
    s.add_argument("--assign", default=None, help="e.g. U=2,V=3 or U=+,V=- for R")
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("probe-compare", parents=[common], help="compare two expressions by probing")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--assign", default=None)
    s.set_defaults(func=cmd_probe_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, EvalError, UsageError, UnsupportedBackendError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TermBoundExceeded, BasisBoundExceeded, BoundError) as e:
        print(f"resource bound: {e}", file=sys.stderr)
        return EXIT_BOUND
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
