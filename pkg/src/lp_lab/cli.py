"""``lp-lab`` command-line workbench.

Exit codes: 0 success, 1 certificate failure or unfinished solve,
2 assumption violation, 3 size guard, 64 usage error.
"""

import argparse
import json
import math
import os
import sys

from .errors import InstanceTooLarge, InvalidParameter, LpLabError
from .instances import dump_instance, parse_grid, parse_instance
from .measures import build_condition_report
from .model import build_symmetric_pd
from .oracle import solve_exact
from .pdhg import restarted_solve, step_sizes
from .suites import SUITES, gamma_sweep, rows_to_csv, run_suite, sweep_to_csv
from .svg import loglog_svg

EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_seed():
    raw = os.environ.get("LP_LAB_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameter(f"LP_LAB_SEED must be an integer, got {raw!r}") from None


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidParameter(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _num(v):
    return f"{v:.6g}" if v is not None else "n/a"


def cmd_report(args):
    inst = parse_instance(_read(args.instance))
    pd = build_symmetric_pd(inst)
    rep = build_condition_report(pd, seed=args.seed)
    lines = [
        f"{'quantity':<14}{'value':>14}",
        f"{'mu_p':<14}{_num(rep.mu_p):>14}  ({rep.sharpness_exact_flags['primal']})",
        f"{'mu_d':<14}{_num(rep.mu_d):>14}  ({rep.sharpness_exact_flags['dual']})",
        f"{'theta_p_hat':<14}{_num(rep.theta_p_hat):>14}",
        f"{'theta_d_hat':<14}{_num(rep.theta_d_hat):>14}",
        f"{'B*':<14}{_num(rep.b_star):>14}",
        f"{'kappa':<14}{_num(rep.kappa):>14}",
        f"{'rhs primal':<14}{_num(rep.thm31_rhs):>14}",
        f"{'rhs dual':<14}{_num(rep.cor32_rhs):>14}",
    ]
    table = "\n".join(lines) + "\n"
    if args.output:
        _write(args.output, rep.to_json())
        sys.stdout.write(table)
    else:
        sys.stderr.write(table)
        sys.stdout.write(rep.to_json())
    return 0


def cmd_solve(args):
    inst = parse_instance(_read(args.instance))
    pd = build_symmetric_pd(inst)
    try:
        face = solve_exact(pd)
    except InstanceTooLarge:
        face = None
    steps = step_sizes(pd, args.policy, args.mu_p, args.mu_d)
    log = restarted_solve(pd, steps, args.eps, face, max_iter=args.max_iter, trace=bool(args.trace))
    if args.output:
        _write(args.output, log.to_json())
    if args.trace:
        _write(args.trace, log.trace_csv())
    measure = "E_d" if face is not None else "kkt"
    print(f"policy={steps.policy} tau={steps.tau:.12g} sigma={steps.sigma:.12g}")
    print(f"iterations={log.total_iterations} restarts={len(log.restart_indices)} "
          f"terminated_by={log.terminated_by} {measure}={log.final_error:.6g}")
    return 0 if log.terminated_by == "eps" else 1


def cmd_sweep(args):
    grid = parse_grid(_read(args.grid_file)) if args.grid_file else None
    if grid is not None and not grid:
        raise InvalidParameter("gamma grid is empty")
    rows = gamma_sweep(grid, seed=args.seed)
    text = sweep_to_csv(rows)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    if args.plot:
        g = [r["gamma"] for r in rows]
        names = ("mu_p", "mu_d", "theta_p_hat", "theta_d_hat", "dist0_X_rel", "dist0_S_rel")
        svg = loglog_svg(g, {k: [r[k] for r in rows] for k in names},
                         title="condition measures of LP_gamma", xlabel="gamma", ylabel="value")
        _write(args.plot, svg)
    return 0


def cmd_verify(args):
    if args.count < 0:
        raise InvalidParameter("count must be nonnegative")
    rows, entries = run_suite(args.suite, seed=args.seed, count=args.count)
    out = args.output or f"verify-{args.suite}.csv"
    _write(out, rows_to_csv(rows, args.suite))
    failed = [r for r in rows if not r.passed]
    print(f"suite={args.suite} seed={args.seed} rows={len(rows)} failed={len(failed)} csv={out}")
    if failed:
        replay = {}
        for r in failed:
            replay.setdefault(r.instance_id, json.loads(dump_instance(entries[r.instance_id].instance)))
        path = out + ".failures.json"
        _write(path, json.dumps(replay, indent=2, sort_keys=True) + "\n")
        for r in failed:
            print(f"FAIL {r.instance_id} {r.check} value={r.value:.12g} upper={r.upper:.12g} {r.detail}",
                  file=sys.stderr)
        print(f"failing instances written to {path}", file=sys.stderr)
        return 1
    return 0


def _positive(text):
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser():
    p = _Parser(prog="lp-lab", description="Condition measures and restarted PDHG for small LPs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("report", help="condition report for one instance")
    r.add_argument("instance")
    r.add_argument("-o", "--output")
    r.add_argument("--seed", type=int)
    r.set_defaults(func=cmd_report)

    s = sub.add_parser("solve", help="restarted PDHG on one instance")
    s.add_argument("instance")
    s.add_argument("--eps", type=_positive, required=True)
    s.add_argument("--policy", choices=("standard", "optimized"), default="standard")
    s.add_argument("--mu-p", type=_positive)
    s.add_argument("--mu-d", type=_positive)
    s.add_argument("--max-iter", type=int, default=100_000)
    s.add_argument("-o", "--output")
    s.add_argument("--trace", help="write a per-iteration CSV trace")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep-gamma", help="condition measures across the LP_gamma family")
    w.add_argument("--grid-file")
    w.add_argument("-o", "--output")
    w.add_argument("--plot")
    w.add_argument("--seed", type=int)
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run a certificate suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--seed", type=int)
    v.add_argument("--count", type=int, default=50)
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = default_seed()
        return args.func(args)
    except LpLabError as exc:
        print(f"lp-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
