"""Command-line interface.

Subcommands:
  run <scenario> [--out F] [--expr E]... [--depth D] [--seed N]
                 [--samples N] [--tol X]
  verify <trace-file>
  group derived-series <n>
  expr parse <text>
  serve [--port P]

Exit codes: 0 success, 1 falsification-not-achieved where expected,
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .expressions import EvaluationError, ExpressionSyntaxError, parse as parse_expr
from .permutations import PermutationError, derived_series, symmetric_group
from .polynomials import MonicPolynomial, match_permutation, pairwise_separation
from .runner import RequestError, RunRequest, run_request
from .scenarios import SCENARIO_IDS, VERDICT_FALSIFIED, ScenarioError
from .trace import TraceDocument, TraceReadError, read_trace, write_trace

# scenarios whose point is a falsification verdict; surveys are not
_EXPECT_FALSIFIED = {"quadratic-swap", "cubic-commutator", "quartic-nested",
                     "quintic-commutator"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monodromy",
        description="Loop scenarios over polynomial coefficient space: "
                    "closed coefficient loops, root permutations, and "
                    "radical-formula falsification.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a named scenario")
    run_p.add_argument("scenario", choices=SCENARIO_IDS)
    run_p.add_argument("--out", metavar="F", help="write the trace document here")
    run_p.add_argument("--expr", metavar="E", action="append", default=None,
                       help="candidate formula (repeatable; default: bundled corpus)")
    run_p.add_argument("--depth", type=int, default=None,
                       help="nesting depth for quartic-nested")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--samples", type=int, default=48)
    run_p.add_argument("--tol", type=float, default=1e-9)

    verify_p = sub.add_parser("verify", help="re-check a trace document")
    verify_p.add_argument("trace_file")

    group_p = sub.add_parser("group", help="permutation group utilities")
    group_sub = group_p.add_subparsers(dest="group_command", required=True)
    series_p = group_sub.add_parser("derived-series",
                                    help="orders of the iterated commutator chain")
    series_p.add_argument("n", type=int)

    expr_p = sub.add_parser("expr", help="formula language utilities")
    expr_sub = expr_p.add_subparsers(dest="expr_command", required=True)
    parse_p = expr_sub.add_parser("parse", help="parse a formula and report its shape")
    parse_p.add_argument("text")

    serve_p = sub.add_parser("serve", help="start the HTTP service")
    serve_p.add_argument("--port", type=int, default=None)
    serve_p.add_argument("--host", default="127.0.0.1")
    return parser


def _cmd_run(args) -> int:
    try:
        req = RunRequest(scenario=args.scenario,
                         exprs=tuple(args.expr) if args.expr else None,
                         depth=args.depth, seed=args.seed,
                         samples=args.samples, tol=args.tol)
        doc = run_request(req)
    except (RequestError, ExpressionSyntaxError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"scenario:     {doc.scenario}")
    print(f"degree:       {doc.degree}")
    print(f"frames:       {len(doc.frames)}")
    print(f"permutation:  {doc.final_permutation}")
    print(f"verdict:      {doc.verdict}")
    if doc.closure_residuals:
        worst = max(doc.closure_residuals.values())
        print(f"max residual: {worst:.3e}")
    if doc.survey is not None:
        print(f"branch points: {len(doc.survey.branch_points)}")
        print(f"group order:   {doc.survey.group_order}")
        print(f"solvable:      {doc.survey.solvable}")
    if doc.verdict == "no-witness":
        orders = doc.meta.get("derived_orders")
        print(f"no non-identity witness at depth {doc.meta.get('depth')}; "
              f"iterated commutator orders: {orders}")
    if args.out:
        write_trace(doc, args.out)
        print(f"wrote {args.out}")
    if args.scenario in _EXPECT_FALSIFIED and doc.verdict not in (VERDICT_FALSIFIED,
                                                                  "no-witness"):
        print("falsification not achieved", file=sys.stderr)
        return 1
    return 0


def _cmd_verify(args) -> int:
    try:
        doc = read_trace(args.trace_file)
    except (OSError, TraceReadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    problems = verify_document(doc)
    if problems:
        for p in problems:
            print(f"FAIL: {p}")
        return 1
    print(f"OK: {doc.scenario}, {len(doc.frames)} frames, "
          f"permutation {doc.final_permutation}, verdict {doc.verdict}")
    return 0


def verify_document(doc: TraceDocument, residual_tol: float = 1e-6) -> list:
    """Independent re-checks of a document's internal consistency.

    Verifies that every frame's roots actually solve the frame's monic
    polynomial, that stored closure residuals match the frames, and that
    the final permutation is the nearest-point matching of the last
    frame against the first.
    """
    problems = []
    try:
        doc.validate()
    except TraceReadError as exc:
        return [str(exc)]
    if not doc.frames:
        return problems
    scale = max(1.0, max(abs(c) for f in doc.frames for c in f.coeffs))
    worst = 0.0
    for j, frame in enumerate(doc.frames):
        poly = MonicPolynomial(tuple(frame.coeffs))
        res = max(abs(poly(z)) for z in frame.roots)
        worst = max(worst, res)
        if res > residual_tol * scale:
            problems.append(f"frame {j}: root residual {res:g} exceeds "
                            f"{residual_tol * scale:g}")
            break
    first, last = doc.frames[0], doc.frames[-1]
    for k in range(doc.degree):
        gap = abs(last.coeffs[k] - first.coeffs[k])
        stored = doc.closure_residuals.get(f"coeff[{k}]")
        if stored is not None and gap > stored + 1e-12 * scale:
            problems.append(f"coeff[{k}] closure gap {gap:g} exceeds stored {stored:g}")
    if doc.degree > 1:
        try:
            sep = pairwise_separation(first.roots)
            perm = match_permutation(first.roots, last.roots, 0.25 * sep)
            if perm.cycle_string() != doc.final_permutation:
                problems.append(
                    f"final permutation {doc.final_permutation!r} does not match "
                    f"recomputed {perm.cycle_string()!r}")
        except Exception as exc:
            problems.append(f"cannot recompute the final permutation: {exc}")
    if doc.verdict == VERDICT_FALSIFIED:
        if doc.final_permutation == "()":
            problems.append("verdict claims falsification with an identity permutation")
        for i in range(len(doc.expressions)):
            gap = doc.closure_residuals.get(f"expr[{i}]")
            if gap is not None and gap > 1e-6 * scale:
                problems.append(f"verdict claims falsification but expr[{i}] "
                                f"gap is {gap:g}")
    return problems


def _cmd_group(args) -> int:
    if args.group_command == "derived-series":
        try:
            orders = derived_series(symmetric_group(args.n))
        except PermutationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(" ".join(str(o) for o in orders))
        return 0
    return 2


def _cmd_expr(args) -> int:
    if args.expr_command == "parse":
        try:
            expr = parse_expr(args.text)
        except ExpressionSyntaxError as exc:
            print(f"syntax error: {exc}", file=sys.stderr)
            return 2
        coeffs = sorted(expr.coefficient_indices())
        radicals = expr.radicals()
        print(f"depth:        {expr.nesting_depth()}")
        print(f"coefficients: {' '.join('a' + str(k) for k in coeffs) or '(none)'}")
        print(f"radicals:     {len(radicals)}"
              + ("" if not radicals
                 else " (" + ", ".join(f"{r.node_id}:root{r.index}" for r in radicals) + ")"))
        return 0
    return 2


def resolve_port(cli_port: Optional[int], env: Optional[str]) -> int:
    """--port wins, then MONODROMY_PORT, then the default 8080."""
    if cli_port is not None:
        return cli_port
    if env:
        return int(env)
    return 8080


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = resolve_port(args.port, os.environ.get("MONODROMY_PORT"))
    uvicorn.run(create_app(), host=args.host, port=port)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "group":
        return _cmd_group(args)
    if args.command == "expr":
        return _cmd_expr(args)
    if args.command == "serve":
        return _cmd_serve(args)
    parser.print_usage(sys.stderr)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
