"""Command-line entry point: ``flashrewrite <subcommand> ...``.

Exit status 0 on success, 2 for bad flags or specs, 1 for internal errors.
All output is deterministic in the flags, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__, bounds
from .cells import format_levels
from .codes import ModularCode, SplitCode
from .errors import FlashRewriteError, SpecError, StateSpaceTooLarge
from .graphs import complete_graph
from .harness import (balls_in_bins_oracle, choice_uniformity, compare_to_oracle,
                      cyclic_sequence, derive_seeds, optimal_game_value, robust_eval,
                      run_sequence, worst_case_t, Stats)
from .specs import build_code, build_graph, build_sequence, code_bounds, sequence_is_fixed

SCHEMA = 1

# the worked split-code example: (n, q, L), the rewrites, then digit pairs and
# per-group cell levels after each write (first entry is the erased state)
EXAMPLE_PARAMS = (16, 4, 56)
EXAMPLE_SEQUENCE = (23, 45, 6, 27, 12)
EXAMPLE_DIGITS = ((0, 0), (2, 7), (5, 5), (0, 6), (3, 3), (1, 4))
EXAMPLE_LEVELS = (
    ("0,0,0,0,0,0,0,0", "0,0,0,0,0,0,0,0"),
    ("0,0,1,0,0,0,0,0", "0,0,0,0,0,0,0,1"),
    ("0,0,1,1,0,0,0,0", "0,0,0,0,0,0,1,1"),
    ("0,0,1,1,1,0,0,1", "0,1,0,0,0,0,1,1"),
    ("0,0,1,1,1,1,1,1", "0,1,0,0,0,1,1,1"),
    ("1,2,1,1,1,1,1,1", "0,1,1,1,1,1,1,1"),
)


def _provenance(args, command: str) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output")}
    cfg["command"] = command
    return {"tool": "flashrewrite", "version": __version__, "schema": SCHEMA, "config": cfg}


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv(prov: dict, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# {prov['tool']} {prov['version']} schema={prov['schema']}\n")
    buf.write("# config: " + json.dumps(prov["config"], sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_simulate(args) -> int:
    graph = build_graph(args.graph)
    seeds = derive_seeds(args.seed, args.trials)
    fixed_seq = sequence_is_fixed(args.seq)
    reports = []
    for k, trial_seed in enumerate(seeds):
        # independent streams for the code's randomness and the sequence's
        code_seed, seq_seed = derive_seeds(trial_seed, 2)
        code = build_code(args.code, args.n, args.q, graph, seed=code_seed, t_target=args.t_target)
        length = args.length if args.length is not None else bounds.ub_trivial(code.n, code.q) + 1
        seq = build_sequence(args.seq, graph, length, seed=None if fixed_seq else seq_seed)
        rep = run_sequence(code, graph, seq, code_spec=args.code, graph_spec=args.graph,
                           seq_spec=args.seq, trace=args.trace or args.out == "json" and args.trials == 1)
        rep.lb, rep.ub = code_bounds(code, graph)
        rep.seed = trial_seed
        if args.out == "json":
            rep.bounds = bounds.bounds_report(args.n, args.q, graph.L, delta=graph.delta).to_dict()
        rep.extra = {"trial": k, "cells": code.n, "code": repr(code)}
        reports.append(rep)
    prov = _provenance(args, "simulate")
    if args.out == "csv":
        rows = [[r.extra["trial"], r.seed, r.t, "" if r.lb is None else r.lb, r.ub, r.stop_reason]
                for r in reports]
        _emit(_csv(prov, ["trial", "seed", "t", "lb", "ub", "stop_reason"], rows), args.output)
    else:
        st = Stats.of([r.t for r in reports], seeds)
        summary = {"mean": st.mean, "std": st.std, "min": st.min, "max": st.max,
                   "below_lb": sum(1 for r in reports if r.lb is not None and r.t < r.lb)}
        doc = dict(prov, runs=[r.to_dict() for r in reports], summary=summary)
        _emit(_dumps(doc), args.output)
    return 0


def cmd_bounds(args) -> int:
    try:
        rep = bounds.bounds_report(args.n, args.q, args.L, delta=args.delta, epsilon=args.epsilon)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    doc = dict(_provenance(args, "bounds"), report=rep.to_dict())
    _emit(_dumps(doc), args.output)
    return 0


def cmd_oracle(args) -> int:
    if args.n < 1 or args.q < 2 or args.L < 2:
        raise SpecError("need n >= 1, q >= 2, L >= 2")
    value = optimal_game_value(args.n, args.q, args.L)
    doc = dict(_provenance(args, "oracle"), optimal_t=value,
               ub_trivial=bounds.ub_trivial(args.n, args.q))
    if args.L <= args.n:
        doc["modular_worst_case_t"] = worst_case_t(ModularCode(args.n, args.q, args.L),
                                                   complete_graph(args.L))
    _emit(_dumps(doc), args.output)
    return 0


def cmd_adversary(args) -> int:
    graph = build_graph(args.graph)
    code = build_code(args.code, args.n, args.q, graph, seed=args.seed, t_target=args.t_target)
    t = worst_case_t(code, graph, cap=args.cap)
    lb, ub = code_bounds(code, graph)
    doc = dict(_provenance(args, "adversary"), t=t, lb=lb, ub=ub, code=repr(code))
    _emit(_dumps(doc), args.output)
    return 0


def run_example(tiebreak: str = "lex") -> tuple[bool, list[str]]:
    n, q, L = EXAMPLE_PARAMS
    code = SplitCode(n, q, L, tiebreak=tiebreak)
    graph = complete_graph(L)
    s = code.initial_state()
    states = [s]
    rep = run_sequence(code, graph, EXAMPLE_SEQUENCE, trace=False)
    for v in EXAMPLE_SEQUENCE[:rep.t]:
        s = code.update(s, v)
        states.append(s)
    lines = []
    ok = rep.t == len(EXAMPLE_SEQUENCE) and len(states) == len(EXAMPLE_LEVELS)
    for k, st in enumerate(states):
        groups = tuple(format_levels(st.levels[g * code.M:(g + 1) * code.M]) for g in range(code.b))
        digits = code.digits_of(st)
        good = (k < len(EXAMPLE_LEVELS) and groups == EXAMPLE_LEVELS[k]
                and digits == EXAMPLE_DIGITS[k])
        ok = ok and good
        value = code.decode(st)
        lines.append(f"{k}: value={value:2d} digits={digits} "
                     f"levels=(({groups[0]}),({groups[1]})) {'ok' if good else 'MISMATCH'}")
    return ok, lines


def cmd_example(args) -> int:
    ok, lines = run_example("revlex" if args.tamper_tiebreak else "lex")
    if not args.quiet:
        print("\n".join(lines))
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_robust_eval(args) -> int:
    n, q, L = args.n, args.q, args.L
    if args.trials < 1:
        raise SpecError("--trials must be >= 1")
    if not 2 <= L <= n or q < 2:
        raise SpecError("robust code needs n >= L >= 2 and q >= 2")
    length = args.length if args.length is not None else n * (q - 1) + 1
    seq = cyclic_sequence(L, length)
    trials = robust_eval(n, q, L, seq, args.trials, args.seed, mode=args.mode)
    prov = _provenance(args, "robust-eval")
    if args.out == "csv":
        rows = [[tr.trial, tr.seed, tr.t, "" if tr.first_saturation is None else tr.first_saturation,
                 tr.stop_reason] for tr in trials]
        _emit(_csv(prov, ["trial", "seed", "t", "first_saturation", "stop_reason"], rows), args.output)
        return 0
    ts = [tr.t for tr in trials]
    st = Stats.of(ts, [tr.seed for tr in trials])
    oracle_seed = args.oracle_seed if args.oracle_seed is not None else args.seed + 1
    code_caps = [len(range(i - 1, n, L)) * (q - 1) for i in range(1, L + 1)]
    oracle = balls_in_bins_oracle(L, code_caps, oracle_seed, args.trials)
    summary = {
        "mean": st.mean, "std": st.std, "min": st.min, "max": st.max,
        "ub_trivial": bounds.ub_trivial(n, q),
        "oracle_mean": oracle.mean, "oracle_std": oracle.std,
        "ks_pvalue": compare_to_oracle(ts, oracle),
        "uniformity": choice_uniformity(trials, L),
    }
    doc = dict(prov, summary=summary,
               trials=[{"trial": tr.trial, "seed": tr.seed, "t": tr.t,
                        "first_saturation": tr.first_saturation, "stop_reason": tr.stop_reason}
                       for tr in trials])
    _emit(_dumps(doc), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flashrewrite", description="Rewriting codes for flash-like cells.")
    p.add_argument("--version", action="version", version=f"flashrewrite {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a code on rewrite sequences")
    s.add_argument("--code", required=True, help='e.g. "modular:L=8", "trajectory", "robust:seed=3"')
    s.add_argument("--graph", required=True, help='e.g. "complete:L=8", "hypercube:k=4,l=2"')
    s.add_argument("--seq", default="random", help='"random[:length=..,seed=..]", "cyclic", "list:1,2,3"')
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--t-target", type=int, default=None)
    s.add_argument("--length", type=int, default=None, help="sequence length (default n(q-1)+1)")
    s.add_argument("--trace", action="store_true", help="keep per-write trace rows in JSON")
    s.add_argument("--out", choices=("csv", "json"), default="csv")
    s.add_argument("--output", default=None, help="file to write (default stdout)")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="closed-form bounds as JSON")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--L", type=int, required=True)
    b.add_argument("--delta", type=int, default=None)
    b.add_argument("--epsilon", type=float, default=None)
    b.add_argument("--output", default=None)
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", help="best worst-case t over all codes (tiny parameters)")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--q", type=int, required=True)
    o.add_argument("--L", type=int, required=True)
    o.add_argument("--output", default=None)
    o.set_defaults(func=cmd_oracle)

    a = sub.add_parser("adversary", help="exact worst-case t of one code")
    a.add_argument("--code", required=True)
    a.add_argument("--graph", required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--q", type=int, required=True)
    a.add_argument("--cap", type=int, default=1_000_000, help="max game states explored")
    a.add_argument("--seed", type=int, default=None, help="seed for randomized codes")
    a.add_argument("--t-target", type=int, default=None)
    a.add_argument("--output", default=None)
    a.set_defaults(func=cmd_adversary)

    e = sub.add_parser("example-paper", help="replay the n=16, q=4, L=56 split-code example")
    e.add_argument("--quiet", action="store_true")
    e.add_argument("--tamper-tiebreak", action="store_true", help=argparse.SUPPRESS)
    e.set_defaults(func=cmd_example)

    r = sub.add_parser("robust-eval", help="robust code on the cyclic sequence over many seeds")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--q", type=int, required=True)
    r.add_argument("--L", type=int, required=True)
    r.add_argument("--trials", type=int, default=200)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--mode", choices=("stop", "continue"), default="stop")
    r.add_argument("--oracle-seed", type=int, default=None, help="default: seed + 1")
    r.add_argument("--length", type=int, default=None)
    r.add_argument("--out", choices=("csv", "json"), default="json")
    r.add_argument("--output", default=None)
    r.set_defaults(func=cmd_robust_eval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("n", "q", "trials"):
        val = getattr(args, name, None)
        if val is not None and val < 1:
            print(f"error: --{name} must be positive", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (SpecError, StateSpaceTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FlashRewriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
