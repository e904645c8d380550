"""Command-line front end.

Exit codes: 0 success, 1 verification counterexample, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from ._validation import check_positive_int
from .closed_form import closed_form_generators, diff_printed, PRINTED_INSTANCES
from .derivations import (CAYLEY_TABLE, COMM_TABLE, cayley_generators, isometry_generators,
                          negated, structure_check)
from .forms import general_form
from .group_action import family_labels, verify_invariance
from .invariant_solver import (family_generators, family_weights, fundamental_search,
                               in_algebra_span)
from .killing_space import ParamScheme, dtt_dimension, general_element, killing_basis, span_rank
from .ratpoly import ParseError, Poly, VarTable, parse, render

SCHEMA = "v1"


class UsageError(Exception):
    pass


def _envelope(args, body: dict) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    return {"schema": SCHEMA, "version": __version__, "config": config,
            "seed": getattr(args, "seed", 0), **body}


def _check_n(n: int, minimum: int = 1) -> int:
    try:
        return check_positive_int(n, "n", minimum)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _known_invariants(family: str, n: int) -> dict:
    labels = family_labels(family, n)
    table = VarTable.build((), labels)
    known = {}
    if family == "itkt":
        known["a1_n"] = Poly.var(table, ParamScheme.build(n).invariant_label())
        if n == 2:
            known["Delta1"] = parse("a5", table)
            known["Delta2"] = parse("(a0 - a2)*a5 - a3^2 + a4^2", table)
            known["Delta3"] = parse("(a3^2 + a4^2 - a5*(a0 + a2))^2 - 4*(a5*a1 - a3*a4)^2", table)
    elif n == 2:
        known["Delta1"] = parse("a0*a2 - a1^2", table)
    return known


# -- commands ------------------------------------------------------------------

def cmd_general(args) -> tuple:
    n = _check_n(args.n)
    if args.family == "itkt":
        K, scheme = general_element(n, legacy=not args.scheme_labels)
        body = {"valence": n, "labels": list(scheme.labels),
                "slots": {l: list(scheme.coefficient_slot(l)) for l in scheme.labels},
                "components": [p.to_json() for p in K.components],
                "rendered": K.lines()}
        lines = [f"# general Killing tensor, valence {n}, {len(scheme)} parameters"]
        lines += [f"# {l} -> component {q}, t^{i} x^{j}"
                  for l in scheme.labels for q, i, j in [scheme.coefficient_slot(l)]]
        lines += K.lines()
    else:
        Q = general_form(n)
        P = Q.polynomial()
        body = {"degree": n, "labels": list(P.table.of_kind("parameter")),
                "polynomial": P.to_json(), "rendered": [f"Q = {P}"]}
        lines = [f"# general binary form, degree {n}", f"Q = {P}"]
    return 0, body, lines


def cmd_generators(args) -> tuple:
    n = _check_n(args.n)
    body: dict = {}
    lines: List[str] = []
    if args.family == "cit":
        gens = cayley_generators(n, args.convention)
        body["generators"] = {g.name: str(g) for g in gens}
        lines += [f"{g.name} = {g}" for g in gens]
        if args.check_commutators:
            fails = structure_check(gens, CAYLEY_TABLE)
            body["commutators"] = {"ok": not fails, "failures": fails}
            lines.append("[V-,V0] = -2V-, [V+,V0] = 2V+, [V-,V+] = V0: "
                         + ("ok" if not fails else "FAILED"))
        return 0, body, lines
    if args.source in ("mst", "both"):
        gens = isometry_generators(n)
        body["generators"] = {g.name: str(g) for g in gens}
        lines += [f"{g.name} = {g}" for g in gens]
        if args.check_commutators:
            fails = structure_check(negated(gens), COMM_TABLE)
            body["commutators"] = {"ok": not fails, "failures": fails}
            lines.append("[V1,V2] = 0, [V1,V3] = -V2, [V2,V3] = -V1: "
                         + ("ok" if not fails else "FAILED"))
    if args.source in ("closed", "both"):
        if n < 2:
            raise UsageError("closed forms are stated for n >= 2")
        closed, diff = closed_form_generators(n)
        body["closed"] = {g.name: str(g) for g in closed}
        body["diff"] = diff
        if args.source == "closed":
            lines += [f"{g.name} = {g}" for g in closed]
        lines.append(f"# closed form vs MST: {len(diff)} diff entries")
        for e in diff:
            lines.append(f"#   {e['generator']} D[{e['term']}] {e['kind']}: "
                         f"mst={e['mst']} closed={e['closed']} ({e['explanation'] or 'unexplained'})")
        if n in PRINTED_INSTANCES:
            pd = diff_printed(n)
            body["printed_diff"] = pd
            lines.append(f"# printed instance vs MST: {len(pd)} diff entries")
            for e in pd:
                lines.append(f"#   {e['generator']} D[{e['term']}]: mst={e['mst']} "
                             f"printed={e['closed']} ({e['explanation'] or 'unexplained'})")
    return 0, body, lines


def cmd_invariants(args) -> tuple:
    n = _check_n(args.n)
    max_degree = _check_n(args.max_degree)
    gens = family_generators(args.family, n)
    report = fundamental_search(gens, max_degree, seed=args.seed,
                                weights=family_weights(args.family, n),
                                name=f"{args.family}{n}")
    body = report.to_json()
    membership = {}
    for name, F in _known_invariants(args.family, n).items():
        if F.degree() <= max_degree:
            membership[name] = in_algebra_span(F, report.fundamentals)
    body["membership"] = membership
    lines = [f"# {args.family} n={n}: d={report.d}, s={report.s}, expected d-s={report.expected}",
             f"# search horizon: up to degree {max_degree}"]
    for k, basis in sorted(report.per_degree.items()):
        lines.append(f"degree {k}: {len(basis)} kernel element(s)")
        lines += [f"  {render(p)}" for p in basis]
    lines.append("fundamental candidates:")
    lines += [f"  {render(p)}" for p in report.fundamentals]
    lines.append(f"jacobian rank: {report.jacobian_rank}")
    for name, ok in membership.items():
        lines.append(f"{name} in span of products: {ok}")
    return 0, body, lines


def cmd_verify(args) -> tuple:
    n = _check_n(args.n)
    if args.trials < 0:
        raise UsageError("trials must be >= 0")
    table = VarTable.build((), family_labels(args.family, n))
    try:
        F = parse(args.poly, table)
    except ParseError as exc:
        raise UsageError(f"cannot parse polynomial: {exc}") from None
    verdict = verify_invariance(F, args.family, n, args.trials, args.seed)
    body = verdict.to_json()
    body["poly"] = render(F)
    status = "pass" if verdict.passed else "FAIL"
    lines = [f"{status}: {render(F)} over {verdict.trials} trial(s), seed {args.seed}"]
    if verdict.counterexample:
        lines.append(json.dumps(verdict.counterexample, sort_keys=True))
    return (0 if verdict.passed else 1), body, lines


def cmd_dims(args) -> tuple:
    max_n = _check_n(args.max_n)
    m = _check_n(args.m)
    rows = []
    for n in range(1, max_n + 1):
        row = {"n": n, "dtt": dtt_dimension(m, n)}
        if m == 2:
            row["direct"] = span_rank(killing_basis(n))
            row["formula"] = (n + 1) * (n + 2) // 2
        rows.append(row)
    lines = [f"# dimensions of valence-n Killing tensors, m = {m}"]
    for r in rows:
        lines.append("n={n} dtt={dtt}".format(**r)
                     + (" direct={direct} (n+1)(n+2)/2={formula}".format(**r) if m == 2 else ""))
    return 0, {"m": m, "rows": rows}, lines


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="killinv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("general", parents=[common], help="general element of the space")
    p.add_argument("--family", choices=("itkt", "cit"), default="itkt")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scheme-labels", action="store_true",
                   help="use ring labels a1_0, ... even for n = 2")
    p.set_defaults(func=cmd_general)

    p = sub.add_parser("generators", parents=[common], help="infinitesimal generators")
    p.add_argument("--family", choices=("itkt", "cit"), default="itkt")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--source", choices=("mst", "closed", "both"), default="mst")
    p.add_argument("--convention", choices=("lemma", "example"), default="lemma",
                   help="Cayley generator convention (cit only)")
    p.add_argument("--check-commutators", action="store_true")
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("invariants", parents=[common], help="degree-by-degree invariant search")
    p.add_argument("--family", choices=("itkt", "cit"), default="itkt")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=4)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify", parents=[common], help="randomized exact invariance check")
    p.add_argument("--family", choices=("itkt", "cit"), default="itkt")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dims", parents=[common], help="dimension table")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--max-n", type=int, default=8)
    p.set_defaults(func=cmd_dims)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, body, lines = args.func(args)
    except UsageError as exc:
        print(f"killinv: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        text = json.dumps(_envelope(args, body), indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
