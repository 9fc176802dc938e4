"""Command line interface.

Subcommands: solve, check, threshold, sweep, simulate, verify.
Exit codes: 0 success, 1 usage error, 2 invalid instance or a request the
instance cannot satisfy, 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import verify as verify_mod
from .conditions import (
    GBWF_POLICIES,
    ConditionError,
    check_globally_bounded_weak_feedback,
    check_order_independence,
    check_regularity,
)
from .model import (
    Instance,
    ModelError,
    SearchOrder,
    dump_instance,
    evaluate,
    format_number,
    load_instance,
    monotone_order,
    parse_number,
)
from .sim import empirical_survival, estimate_value
from .solver import (
    SolverError,
    belief_grid,
    brute_force_optimal,
    index_order_no_feedback,
    pairwise_swap_local_search,
    payoff_sweep,
    prior_threshold_2box,
    subset_dp_optimal,
)


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_number(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "perm"):
        return list(x.perm)
    return x


def _load(args) -> Instance:
    inst = load_instance(args.instance)
    if getattr(args, "prior", None) is not None:
        inst = inst.with_prior(parse_number(args.prior))
    return inst


def _emit(args, text_lines, payload):
    if getattr(args, "json", False):
        out = json.dumps(_jsonable(payload), indent=2)
    else:
        out = "\n".join(text_lines)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("JSS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"JSS_THREADS must be an integer, got {env!r}")
    return 1


def build_parser() -> Parser:
    p = Parser(prog="jss", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, prior=True):
        sp.add_argument("--instance", "-i", required=True,
                        help="instance JSON file (or inline JSON)")
        if prior:
            sp.add_argument("--prior", help="override the prior, e.g. 0.6 or 17/29")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--out", help="write output to a file instead of stdout")

    sp = sub.add_parser("solve", help="find the optimal submission order")
    common(sp)
    sp.add_argument("--algorithm", choices=("brute", "index", "dp", "local"),
                    default="brute")
    sp.add_argument("--mode", choices=("exact", "float"), default="exact")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker processes for brute force (default: JSS_THREADS or 1)")

    sp = sub.add_parser("check", help="run hypothesis checks on an instance")
    common(sp)
    sp.add_argument("--strict", action="store_true", help="strict regularity")
    sp.add_argument("--exponential", action="store_true",
                    help="require doubling payoff gaps")
    sp.add_argument("--policy", choices=GBWF_POLICIES, default="max_over_journals",
                    help="belief floor policy for the weak-feedback check")

    sp = sub.add_parser("threshold", help="exact two-box prior threshold")
    common(sp, prior=False)
    sp.add_argument("--mode", choices=("exact",), default="exact",
                    help="threshold certification is exact-only")

    sp = sub.add_parser("sweep", help="value of each order across a prior grid")
    common(sp, prior=False)
    sp.add_argument("--grid", default="0:1:101",
                    help="START:STOP:COUNT, inclusive endpoints (default 0:1:101)")
    sp.add_argument("--mode", choices=("exact", "float"), default="exact")
    sp.add_argument("--best-only", action="store_true",
                    help="emit only the best order per prior")

    sp = sub.add_parser("simulate", help="Monte Carlo check of one order")
    common(sp)
    sp.add_argument("--order", default="monotone",
                    help="comma-separated journal names, 'monotone', or 'best'")
    sp.add_argument("--episodes", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("verify", help="run randomized verification suites")
    sp.add_argument("--suite", action="append", default=None,
                    help=f"suite name or 'all' (repeatable); choices: "
                         f"{', '.join(sorted(verify_mod.SUITES))}")
    sp.add_argument("--trials", type=int, default=None,
                    help="override trial count where a suite takes one")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--episodes", type=int, default=None,
                    help="episodes per run for the mc_consistency suite")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out", help="write output to a file instead of stdout")
    return p


def cmd_solve(args) -> int:
    inst = _load(args)
    threads = _threads(args)
    if args.algorithm == "brute":
        res = brute_force_optimal(inst, mode=args.mode, threads=threads)
    elif args.algorithm == "index":
        res = index_order_no_feedback(inst)
    elif args.algorithm == "dp":
        res = subset_dp_optimal(inst, mode=args.mode)
    else:
        res = pairwise_swap_local_search(inst, mode=args.mode)
    names = inst.journal_names()
    lines = [
        f"instance: {len(names)} journals, prior {format_number(parse_number(inst.prior.mu_h))}",
        res.describe(inst),
    ]
    payload = {
        "instance": dump_instance(inst),
        "method": res.method,
        "best_order": [names[i] for i in res.best_order.perm],
        "best_order_positions": list(res.best_order.perm),
        "best_value": res.best_value,
        "best_value_float": float(res.best_value),
        "argmax": [[names[i] for i in o.perm] for o in res.argmax_set],
        "details": res.details,
    }
    _emit(args, lines, payload)
    return 0


def cmd_check(args) -> int:
    inst = _load(args)
    reports = [
        check_regularity(inst, strict=args.strict, exponential=args.exponential),
        check_order_independence(inst),
    ]
    try:
        reports.append(check_globally_bounded_weak_feedback(inst, policy=args.policy))
    except ConditionError as exc:
        reports.append(None)
        skipped = str(exc)
    lines = []
    payload = {"instance": dump_instance(inst), "checks": []}
    for rep in reports:
        if rep is None:
            lines.append(f"globally_bounded_weak_feedback: skipped ({skipped})")
            payload["checks"].append({"condition": "globally_bounded_weak_feedback",
                                      "skipped": skipped})
        else:
            lines.append(rep.summary())
            payload["checks"].append(rep.to_dict())
    _emit(args, lines, payload)
    return 0


def cmd_threshold(args) -> int:
    inst = load_instance(args.instance)
    if inst.size != 2:
        raise SolverError(f"threshold certification needs exactly 2 journals, "
                          f"got {inst.size}")
    res = prior_threshold_2box(inst.journals[0], inst.journals[1],
                               inst.outside_option)
    lines = []
    if res.kind == "threshold":
        lines.append(f"threshold: {format_number(res.mu_star)}")
        lines.append(f"threshold_float: {float(res.mu_star):.12g}")
        lines.append(f"payoff-sorted order optimal {res.direction} the threshold")
    else:
        lines.append(f"threshold: none ({res.kind})")
        lines.append(res.describe())
    payload = {
        "kind": res.kind,
        "mu_star": res.mu_star,
        "mu_star_float": None if res.mu_star is None else float(res.mu_star),
        "direction": res.direction,
        "degenerate": res.degenerate,
        "diff_at_0": res.diff_at_0,
        "diff_at_1": res.diff_at_1,
    }
    _emit(args, lines, payload)
    return 0


def cmd_sweep(args) -> int:
    inst = load_instance(args.instance)
    try:
        start, stop, count = args.grid.split(":")
        grid = belief_grid(start, stop, int(count))
    except (ValueError, ModelError) as exc:
        raise UsageError(f"bad --grid {args.grid!r}: {exc}")
    table = payoff_sweep(inst, grid, mode=args.mode,
                         per_order=(False if args.best_only else None))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            table.write_csv(fh)
    else:
        table.write_csv(sys.stdout)
    return 0


def cmd_simulate(args) -> int:
    inst = _load(args)
    names = list(inst.journal_names())
    if args.order == "monotone":
        order = monotone_order(inst)
    elif args.order == "best":
        order = brute_force_optimal(inst).best_order
    else:
        wanted = [w.strip() for w in args.order.split(",")]
        try:
            order = SearchOrder(tuple(names.index(w) for w in wanted))
        except ValueError:
            raise UsageError(f"--order names must be a permutation of {names}")
    if args.episodes < 1:
        raise UsageError("--episodes must be positive")
    trace = evaluate(inst, order)
    mean, se = estimate_value(inst, order, args.episodes, args.seed)
    freqs = empirical_survival(inst, order, args.episodes, args.seed)
    exact = float(trace.total)
    lines = [
        f"order: {order.label(inst)}",
        f"episodes: {args.episodes}   seed: {args.seed}",
        f"exact value: {format_number(trace.total)} ({exact:.6g})",
        f"mc mean: {mean:.6g}" + (f"   stderr: {se:.3g}" if se is not None else ""),
    ]
    if se:
        lines.append(f"z-score: {(mean - exact) / se:+.2f}")
    lines.append("survival (analytic vs empirical):")
    for t, (r, f) in enumerate(zip(trace.reach, freqs)):
        lines.append(f"  period {t + 1}: {float(r):.6f}  {f:.6f}")
    payload = {
        "order": [names[i] for i in order.perm],
        "episodes": args.episodes,
        "seed": args.seed,
        "exact_value": trace.total,
        "exact_value_float": exact,
        "mc_mean": mean,
        "mc_stderr": se,
        "survival_analytic": [float(r) for r in trace.reach],
        "survival_empirical": list(freqs),
    }
    _emit(args, lines, payload)
    return 0


def cmd_verify(args) -> int:
    chosen = args.suite or ["all"]
    if "all" in chosen:
        names = list(verify_mod.SUITES)
    else:
        names = []
        for s in chosen:
            if s not in verify_mod.SUITES:
                raise UsageError(f"unknown suite {s!r}; choices: "
                                 f"{', '.join(sorted(verify_mod.SUITES))}, all")
            names.append(s)
    reports = {}
    for name in names:
        kwargs = {}
        fn = verify_mod.SUITES[name]
        params = fn.__code__.co_varnames[:fn.__code__.co_argcount]
        if args.trials is not None and "trials" in params:
            kwargs["trials"] = args.trials
        if args.trials is not None and "pairs" in params:
            kwargs["pairs"] = args.trials
        if args.seed is not None and "seed" in params:
            kwargs["seed"] = args.seed
        if args.episodes is not None and "episodes" in params:
            kwargs["episodes"] = args.episodes
        reports[name] = fn(**kwargs)
    lines = []
    for name, rep in reports.items():
        lines.append(f"[{name}] {rep.text()}")
    payload = {name: rep.to_dict() for name, rep in reports.items()}
    _emit(args, lines, payload)
    return 3 if any(r.failures for r in reports.values()) else 0


COMMANDS = {
    "solve": cmd_solve,
    "check": cmd_check,
    "threshold": cmd_threshold,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ModelError, SolverError, ConditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
