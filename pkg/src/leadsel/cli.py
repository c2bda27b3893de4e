"""Command-line entry point: ``leadsel <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 input error, 4 invariant violation,
5 numerical failure.  Relative ``--out`` paths resolve against
``$LEADSEL_OUTPUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GraphError, GuardError, InvariantViolation, NumericalError
from .graph import balanced_binary_tree, path_graph, random_tree, read_edge_list, star_graph
from .harness import (
    compare_dynamics,
    convergence_sweep,
    enum_check,
    load_scenario,
    run,
    simulate_dynamics,
    sweep_csv,
)
from .oracle import Measure, check_supermodularity, exhaustive_leader_selection
from .protocol import Mode
from .variance import max_variance, steady_state_variances, total_variance

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT, EXIT_NUMERIC = 0, 2, 3, 4, 5
OUTPUT_DIR_ENV = "LEADSEL_OUTPUT_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 already; keep message terse
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _out_path(arg: str | None) -> Path | None:
    if arg is None:
        return None
    p = Path(arg)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _emit(text: str, out: str | None) -> None:
    path = _out_path(out)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _leaders(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad leader list {text!r}") from None


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_analyze(args) -> int:
    g = read_edge_list(args.graph)
    prof = steady_state_variances(g, args.leaders)
    rows = ["node,sigma"] + [f"{i},{s!r}" for i, s in sorted(prof.per_follower.items())]
    rows += ["Terr,Merr", f"{total_variance(prof)!r},{max_variance(prof)!r}"]
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = read_edge_list(args.graph)
    measure = Measure.parse(args.measure)
    lines = []
    res = exhaustive_leader_selection(g, args.k, measure, max_n=args.max_n)
    lines.append(json.dumps({"query": "leader_selection", "k": args.k, **res.to_dict()}))
    if args.supermodularity:
        w = check_supermodularity(g, measure, max_n=args.max_n or 10)
        lines.append(json.dumps({"query": "supermodularity", "measure": measure.value,
                                 "witness": None if w is None else w.to_dict()}))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_protocol_run(args) -> int:
    sc = load_scenario(args.scenario)
    rep = run(sc)
    _emit(json.dumps(rep.to_dict(), indent=2) + "\n", args.out)
    if args.trace:
        _emit(rep.trace_csv(), args.trace)
    return EXIT_INVARIANT if rep.invariant_violations else EXIT_OK


def cmd_dynamics(args) -> int:
    g = read_edge_list(args.graph)
    est = simulate_dynamics(g, args.leaders, dt=args.dt, horizon=args.horizon,
                            burn_in=args.burn_in, trials=args.trials, seed=args.seed)
    cmp = compare_dynamics(g, args.leaders, est)
    rows = ["node,analytic,empirical,se,within_band"]
    for i, r in sorted(cmp.items()):
        rows.append(f"{i},{r['analytic']!r},{r['empirical']!r},{r['se']!r},{int(r['ok'])}")
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    rng = np.random.default_rng(args.seed)
    sizes = _ints(args.sizes)
    if args.family == "path":
        trees = [path_graph(n) for n in sizes]
    elif args.family == "star":
        trees = [star_graph(n) for n in sizes]
    elif args.family == "binary":
        trees = [balanced_binary_tree(d) for d in sizes]
    else:
        trees = [random_tree(n, rng) for n in sizes]
    rows = convergence_sweep(trees, args.mode, repetitions=args.repetitions, seed=args.seed,
                             init=args.init, leader=args.leader)
    _emit(sweep_csv(rows), args.out)
    return EXIT_OK


def cmd_enum_check(args) -> int:
    if args.n > args.max_n:
        raise GuardError(f"enum-check limited to n <= {args.max_n}; raise --max-n deliberately")
    summary = enum_check(args.n, args.mode, seed=args.seed)
    if summary["ok"]:
        msg = f"all {summary['trees']} trees OK\n"
    else:
        msg = f"{len(summary['failures'])} failures over {summary['trees']} trees\n"
        msg += "".join(json.dumps(f, default=list) + "\n" for f in summary["failures"][:20])
    _emit(msg, args.out)
    return EXIT_OK if summary["ok"] else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leadsel", description="In-network leader selection on trees")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    modes = [m.value for m in Mode]

    a = sub.add_parser("analyze", help="steady-state variances for a leader set")
    a.add_argument("--graph", required=True)
    a.add_argument("--leaders", type=_leaders, required=True, help="comma-separated node ids")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    o = sub.add_parser("oracle", help="exhaustive leader selection and supermodularity scan")
    o.add_argument("--graph", required=True)
    o.add_argument("--k", type=int, default=1)
    o.add_argument("--measure", choices=["total", "max"], default="total")
    o.add_argument("--supermodularity", action="store_true")
    o.add_argument("--max-n", type=int, default=None)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("protocol-run", help="run a scenario file")
    r.add_argument("--scenario", required=True)
    r.add_argument("--out")
    r.add_argument("--trace", help="write a per-round CSV trace here")
    r.set_defaults(func=cmd_protocol_run)

    d = sub.add_parser("dynamics", help="Monte Carlo of the noisy consensus dynamics")
    d.add_argument("--graph", required=True)
    d.add_argument("--leaders", type=_leaders, required=True)
    d.add_argument("--dt", type=float, default=0.01)
    d.add_argument("--horizon", type=float, default=200.0)
    d.add_argument("--burn-in", type=float, default=50.0)
    d.add_argument("--trials", type=int, default=64)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out")
    d.set_defaults(func=cmd_dynamics)

    s = sub.add_parser("sweep", help="rounds-to-optimal against depth or radius")
    s.add_argument("--family", choices=["path", "star", "binary", "random"], default="path")
    s.add_argument("--sizes", default="5,9,17,33", help="node counts (depths for binary)")
    s.add_argument("--mode", choices=modes, default="median")
    s.add_argument("--repetitions", type=int, default=1)
    s.add_argument("--init", choices=["zeros", "max", "random"], default="zeros")
    s.add_argument("--leader", choices=["far", "random"], default="far")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    e = sub.add_parser("enum-check", help="oracle vs protocol on every labeled tree")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--mode", choices=["median", "center"], default="median")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--max-n", type=int, default=8)
    e.add_argument("--out")
    e.set_defaults(func=cmd_enum_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GraphError, GuardError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
