"""Command-line interface: ``kpoint <command> [options]``.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or input error,
3 solver failure. A JSON report is written for every run that gets past
argument parsing.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import copositive as cop
from .conic import (INFEASIBLE, OPTIMAL, UNBOUNDED, ConicError, SolverOptions, export_sdpa)
from .families import FamilyTooLarge
from .graphs import GraphError, alpha_enumerate, alpha_exact, maximum_independent_set, members, parse_graph_spec
from .hierarchies import (build_delta, build_xi_dual, build_xi_primal, hierarchy_sweep, solve_delta,
                          solve_xi_dual, solve_xi_primal)
from .report import SCHEMA_VERSION, VerificationReport, jsonable
from .selftest import run_selftest
from .transfer import DegenerateInput, moment_psd_check, transfer, verify_transfer

EXIT_OK, EXIT_CHECKS, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3
GOOD_STATUSES = (OPTIMAL, INFEASIBLE, UNBOUNDED)


class SolverFailure(RuntimeError):
    pass


class Run:
    """Collects the deterministic report body and, separately, timings."""

    def __init__(self, args):
        self.args = args
        self.checks = VerificationReport()
        self.rows: list[dict] = []
        self.result: dict = {}
        self.runtimes: list[float] = []
        self.started = time.perf_counter()

    def row(self, quantity, index, value, status, runtime):
        self.rows.append({"graph": self.args.graph, "quantity": quantity, "index": index,
                          "value": value, "status": status})
        self.runtimes.append(runtime)

    def report(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "tool": {"name": "kpoint", "version": __version__},
            "config": config_dump(self.args),
            "result": jsonable(self.result),
            "table": jsonable(self.rows),
            "checks": [c.to_dict() for c in self.checks.checks],
            "passed": self.checks.passed,
            "timing": {"timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                       "row_seconds": self.runtimes,
                       "total_seconds": time.perf_counter() - self.started},
        }


def config_dump(args) -> dict:
    skip = {"func"}
    return {k: jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


def _opts(args) -> SolverOptions:
    return SolverOptions(tol=args.solver_tol, max_iter=args.max_iter)


def _graph(args):
    if args.graph is None:
        raise GraphError("--graph is required")
    return parse_graph_spec(args.graph)


def _require(status: str):
    if status not in GOOD_STATUSES:
        raise SolverFailure(f"solver ended with status {status}")


# -- commands ----------------------------------------------------------------------

def cmd_alpha(args, run: Run):
    G = _graph(args)
    t0 = time.perf_counter()
    a = alpha_exact(G)
    run.row("alpha", None, a, OPTIMAL, time.perf_counter() - t0)
    run.result = {"alpha": a, "witness": list(members(maximum_independent_set(G)))}
    if G.n <= 20:
        run.checks.add("branch_and_bound_vs_enumeration", a, alpha_enumerate(G), "==", 0)


def cmd_delta(args, run: Run):
    G = _graph(args)
    t0 = time.perf_counter()
    res = solve_delta(G, args.k, _opts(args), args.tol)
    run.row("Delta", args.k, res.value, res.status, time.perf_counter() - t0)
    _require(res.status)
    run.result = {"value": res.value, "status": res.status, "dual_bound": res.extra["dual_bound"],
                  "iterations": res.solution.iterations, "residuals": res.solution.residuals}
    if res.status == OPTIMAL:
        run.checks.extend(res.report, "witness:")
        run.checks.add("alpha_lower_bound", res.value, alpha_exact(G), ">=", args.sweep_tol)
        run.checks.add("weak_duality", res.solution.duality_gap, 0, ">=", args.tol)


def _xi(args, run: Run, dual: bool):
    G = _graph(args)
    t0 = time.perf_counter()
    solve = solve_xi_dual if dual else solve_xi_primal
    res = solve(G, args.r, exact=args.exact, opts=_opts(args), tol=args.tol)
    run.row("xi*" if dual else "xi", args.r, res.value, res.status, time.perf_counter() - t0)
    _require(res.status)
    run.result = {"value": res.value, "status": res.status, "exact": args.exact}
    if args.exact and res.status == OPTIMAL:
        run.result["value_exact"] = str(res.value)
    if res.report is not None:
        run.checks.extend(res.report, "witness:")
    if res.status == OPTIMAL and not args.exact:
        run.checks.add("weak_duality", res.solution.duality_gap, 0, ">=", args.tol)


def cmd_xi_dual(args, run: Run):
    _xi(args, run, True)


def cmd_xi_primal(args, run: Run):
    _xi(args, run, False)


def cmd_sweep(args, run: Run):
    G = _graph(args)
    table = hierarchy_sweep(G, args.kmax, args.rmax, jobs=args.jobs, exact=args.exact,
                            tol=args.sweep_tol, mono_tol=args.mono_tol)
    for row in table.rows:
        run.row(row.quantity, row.index, row.value, row.status, row.runtime)
        _require(row.status)
    run.result = {"alpha": table.alpha}
    run.checks.extend(table.report)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["graph", "quantity", "index", "value", "status"])
            for r in run.rows:
                w.writerow([r["graph"], r["quantity"], r["index"], jsonable(r["value"]), r["status"]])


def cmd_transfer_verify(args, run: Run):
    G = _graph(args)
    k = args.r + 2
    t0 = time.perf_counter()
    res = solve_delta(G, k, _opts(args), args.tol)
    run.row("Delta", k, res.value, res.status, time.perf_counter() - t0)
    if res.status != OPTIMAL:
        raise SolverFailure(f"Delta_{k} ended with status {res.status}")
    tr = transfer(G, res.witness, args.r)
    run.checks.extend(res.report, "witness:")
    run.checks.extend(verify_transfer(G, args.r, tr, res.witness, args.tol), "transfer:")
    run.checks.extend(moment_psd_check(tr.phi, args.r, args.tol), "moments:")
    run.result = {"value": tr.objective, "delta": res.value, "phi": list(tr.phi.values),
                  "alpha_matrix": [list(map(float, row)) for row in tr.alpha]}


def cmd_certify(args, run: Run):
    mode = "exact" if args.exact else "float"
    t0 = time.perf_counter()
    if args.matrix:
        Z = json.loads(Path(args.matrix).read_text(encoding="utf-8"))
        search = cop.min_r(Z, args.rcap, mode, args.member_tol)
    else:
        G = _graph(args)
        F = cop.find_F(G, _opts(args))
        run.checks.extend(cop.check_F(G, F))
        Z0, rep = cop.build_Z0(F, args.theta, G)
        run.checks.extend(rep)
        search = cop.min_r(Z0, args.rcap, mode, args.member_tol)
        run.result["F"] = F.tolist()
        run.result["Z0"] = Z0.tolist()
    run.row("min_r", args.rcap, search.level, search.describe(), time.perf_counter() - t0)
    run.result["search"] = search.to_dict()
    run.result["value"] = search.describe()
    run.checks.add("nesting_consistent", int(search.nesting_ok), 1, "==", 0)


def cmd_export_sdpa(args, run: Run):
    G = _graph(args)
    if args.program == "delta":
        prog = build_delta(G, args.k).program
    elif args.program == "xi-dual":
        prog = build_xi_dual(G, args.r).program
    else:
        prog = build_xi_primal(G, args.r).program
    text = export_sdpa(prog)
    target = args.sdpa or "-"
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")
    run.result = {"program": args.program, "variables": prog.m, "blocks": len(prog.blocks),
                  "path": target}


def cmd_selftest(args, run: Run):
    rep = run_selftest(args.seed)
    run.checks.extend(rep)
    for line in rep.lines():
        print(line, file=sys.stderr)


COMMANDS = {
    "alpha": (cmd_alpha, "independence number by branch and bound"),
    "delta": (cmd_delta, "k-point bound Delta_k"),
    "xi-dual": (cmd_xi_dual, "copositive LP bound xi_r* (minimisation)"),
    "xi-primal": (cmd_xi_primal, "copositive LP bound xi_r (maximisation)"),
    "sweep": (cmd_sweep, "table of Delta_k and xi_r with sandwich checks"),
    "transfer-verify": (cmd_transfer_verify, "build (beta, alpha) from a Delta_{r+2} witness and check it"),
    "certify": (cmd_certify, "interior point Z0 and its level in the C_r hierarchy"),
    "export-sdpa": (cmd_export_sdpa, "write a program in SDPA sparse format"),
    "selftest": (cmd_selftest, "run the built-in invariant suite"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpoint", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"kpoint {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (fn, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.set_defaults(func=fn)
        s.add_argument("--graph", help="generator spec such as cycle:5, gnp:7,0.4,11 or a DIMACS file")
        s.add_argument("--out", help="JSON report path (default kpoint-<command>.json)")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--tol", type=float, default=1e-6, help="verification tolerance")
        s.add_argument("--solver-tol", type=float, default=1e-8)
        s.add_argument("--max-iter", type=int, default=200)
        s.add_argument("--sweep-tol", type=float, default=1e-5, help="sandwich tolerance")
        s.add_argument("--mono-tol", type=float, default=1e-6, help="monotonicity tolerance")
        s.add_argument("--exact", action="store_true", help="rational arithmetic where available")
        if name in ("delta", "export-sdpa"):
            s.add_argument("--k", type=int, default=2)
        if name in ("xi-dual", "xi-primal", "transfer-verify", "export-sdpa"):
            s.add_argument("--r", type=int, default=1)
        if name == "sweep":
            s.add_argument("--kmax", type=int, default=4)
            s.add_argument("--rmax", type=int, default=2)
            s.add_argument("--csv")
            s.add_argument("--jobs", type=int, default=1)
        if name == "certify":
            s.add_argument("--theta", type=_fraction, default="1/4")
            s.add_argument("--rcap", type=int, default=6)
            s.add_argument("--member-tol", type=float, default=1e-9)
            s.add_argument("--matrix", help="JSON file with a symmetric matrix to certify instead")
        if name == "export-sdpa":
            s.add_argument("--program", choices=("delta", "xi-dual", "xi-primal"), default="delta")
            s.add_argument("--sdpa", help="output .dat-s path (default stdout)")
    return p


def _fraction(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    run = Run(args)
    code = EXIT_OK
    try:
        args.func(args, run)
        if not run.checks.passed:
            code = EXIT_CHECKS
            for c in run.checks.failures():
                print(f"check failed: {c.name} ({c.lhs} {c.relation} {c.rhs})", file=sys.stderr)
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        run.result["error"] = str(exc)
        code = EXIT_SOLVER
    except (GraphError, FamilyTooLarge, ConicError, cop.CopositiveError, DegenerateInput,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        run.result["error"] = str(exc)
        code = EXIT_USAGE
    body = run.report()
    body["exit_code"] = code
    out = Path(args.out or f"kpoint-{args.command}.json")
    try:
        out.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    summary = run.result.get("value", run.result.get("alpha"))
    if summary is not None:
        print(jsonable(summary))
    return code


if __name__ == "__main__":
    sys.exit(main())
