"""Command line front end: JSON objects in, CSV or JSON results out.

Exit codes are a stable contract: 0 success, 2 unreadable input (missing
file, invalid JSON, malformed object or flag value), 3 shape mismatch
between otherwise valid inputs, 4 precondition failure reported by the
computation.  Output is byte-deterministic for a fixed command line; the
only wall-clock column (wrp-demo) stays empty unless --times is passed.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import serialize as ser
from .action import (
    InfeasibleError,
    LatticeAction,
    action_dist,
    action_dist_tail,
    conjugate,
    wrp_conjugacy_search,
)
from .equivalence import (
    action_to_sim,
    embed_action,
    factor_defect,
    realize_sim_as_action,
    recover_action,
)
from .rationals import exact_decimal, format_rational, parse_rational
from .sampling import aperiodic_permutation, trial_rng
from .sim import (
    Partition,
    Window,
    convolve_sim,
    fixed_mass_report,
    is_graph_sim,
    sim_dist,
)

__all__ = ["main"]


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- plumbing -----------------------------------------------------------------


def _load(path: str, loader, what: str):
    try:
        return loader(ser.read_json_file(path))
    except (OSError, ValueError) as e:
        raise CliError(2, f"cannot read {what} from {path}: {e}") from e


def _fraction_arg(text: str, what: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise CliError(2, f"bad {what}: {e}") from e


def _cuts_arg(text: str) -> Partition:
    try:
        return Partition(tuple(parse_rational(c) for c in text.split(",")))
    except ValueError as e:
        raise CliError(2, f"bad cuts: {e}") from e


def _emit_text(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    import json

    _emit_text(args, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _csv(rows) -> str:
    return "\n".join(",".join(row) for row in rows) + "\n"


def _pair(value: Fraction) -> list[str]:
    """Decimal rendering plus the exact rational sidecar."""
    return [exact_decimal(value), format_rational(value)]


def _beta_name(beta) -> str:
    return "_".join(str(b) for b in beta)


# -- subcommands ---------------------------------------------------------------


def cmd_dist(args) -> int:
    a = _load(args.action_a, ser.load_action, "action")
    b = _load(args.action_b, ser.load_action, "action")
    if a.d != b.d:
        raise CliError(3, f"rank mismatch: {a.d} vs {b.d}")
    value = action_dist(a, b, args.terms, args.depth)
    tail = action_dist_tail(args.terms)
    if args.format == "json":
        _emit_json(
            args,
            {
                "distance": format_rational(value),
                "distance_decimal": exact_decimal(value),
                "tail": format_rational(tail),
                "tail_decimal": exact_decimal(tail),
            },
        )
    else:
        rows = [
            ["distance", "distance_exact", "tail", "tail_exact"],
            _pair(value) + _pair(tail),
        ]
        _emit_text(args, _csv(rows))
    return 0


def cmd_embed(args) -> int:
    h = _load(args.adaptation, ser.load_adaptation, "adaptation")
    a = _load(args.action, ser.load_action, "action")
    partition = _cuts_arg(args.cuts)
    if args.w < 1:
        raise CliError(2, "window width must be >= 1")
    try:
        table = embed_action(h, a, Window(a.d, args.w), partition)
    except ValueError as e:
        raise CliError(4, str(e)) from e
    _emit_json(args, ser.dump_table(table))
    return 0


def cmd_recover(args) -> int:
    t = _load(args.table, ser.load_table, "table")
    epsilon = _fraction_arg(args.epsilon, "tolerance")
    try:
        action, witness = recover_action(t, epsilon)
    except ValueError as e:
        raise CliError(4, str(e)) from e
    for pw in witness.pairs:
        sys.stdout.write(
            f"pair {pw.alpha}->{pw.beta}: map {','.join(str(m) for m in pw.mapping)}"
            f" defect {format_rational(pw.defect)}\n"
        )
    _emit_json(args, ser.dump_action(action))
    return 0


def cmd_realize(args) -> int:
    t = _load(args.table, ser.load_table, "table")
    if t.window.d != 1:
        raise CliError(3, f"realize handles rank-1 tables, got rank {t.window.d}")
    try:
        action, partition = realize_sim_as_action(t)
    except ValueError as e:
        raise CliError(4, str(e)) from e
    check = action_to_sim(action, t.window, partition)
    if check.masses != t.masses:
        raise AssertionError("realization postcondition failed; refusing to write output")
    payload = ser.dump_action(action)
    payload["cuts"] = [format_rational(c) for c in partition.cuts]
    _emit_json(args, payload)
    return 0


def cmd_smooth(args) -> int:
    t = _load(args.table, ser.load_table, "table")
    delta = _fraction_arg(args.delta, "delta")
    if not 0 < delta < 1:
        raise CliError(4, f"delta must lie in (0, 1), got {delta}")
    if args.steps < 1:
        raise CliError(2, "steps must be >= 1")
    ladder = [Fraction(0)] + [delta / 2 ** (args.steps - 1 - i) for i in range(args.steps)]
    elems = t.window.elements()
    betas = sorted(
        {
            tuple(x - y for x, y in zip(g2, g1))
            for g1 in elems
            for g2 in elems
            if g2 != g1
        }
    )
    betas = [b for b in betas if b > (0,) * t.window.d]
    header = ["delta", "delta_exact", "dist", "dist_exact"]
    for beta in betas:
        header += [f"fixed_{_beta_name(beta)}", f"fixed_{_beta_name(beta)}_exact"]
    rows = [header]
    for step in ladder:
        smoothed = convolve_sim(t, step)
        row = _pair(step) + _pair(sim_dist(smoothed, t))
        for beta in betas:
            bound, _exact = fixed_mass_report(smoothed, beta)
            row += _pair(bound)
        rows.append(row)
    if args.format == "json":
        _emit_json(args, {"rows": [dict(zip(rows[0], r)) for r in rows[1:]]})
    else:
        _emit_text(args, _csv(rows))
    return 0


def cmd_wrp_demo(args) -> int:
    if args.seed is None:
        raise CliError(2, "wrp-demo needs --seed")
    epsilon = _fraction_arg(args.epsilon, "tolerance")
    if epsilon <= 0:
        raise CliError(4, "tolerance must be > 0")
    header = [
        "trial",
        "requested",
        "requested_exact",
        "achieved",
        "achieved_exact",
        "height",
        "status",
        "time_s",
    ]
    rows = [header]
    for trial in range(args.trials):
        rng = trial_rng(args.seed, trial)
        t = aperiodic_permutation(rng, args.n, args.min_cycle)
        r = aperiodic_permutation(rng, args.n, args.min_cycle)
        a, b = LatticeAction(1, (t,)), LatticeAction(1, (r,))
        started = time.perf_counter()
        try:
            res = wrp_conjugacy_search(a, b, epsilon, args.terms, args.depth)
        except InfeasibleError:
            rows.append([str(trial)] + _pair(epsilon) + ["", "", "", "infeasible", ""])
            continue
        except ValueError:
            rows.append([str(trial)] + _pair(epsilon) + ["", "", "", "failed", ""])
            continue
        elapsed = time.perf_counter() - started
        verified = action_dist(conjugate(res.phi, a), b, args.terms, args.depth)
        if verified != res.achieved:
            raise AssertionError("independent distance check disagrees with the search")
        rows.append(
            [str(trial)]
            + _pair(epsilon)
            + _pair(res.achieved)
            + [str(res.height), "ok", f"{elapsed:.3f}" if args.times else ""]
        )
    if args.format == "json":
        _emit_json(args, {"rows": [dict(zip(rows[0], r)) for r in rows[1:]]})
    else:
        _emit_text(args, _csv(rows))
    return 0


def cmd_graph_test(args) -> int:
    t = _load(args.table, ser.load_table, "table")
    epsilon = _fraction_arg(args.epsilon, "tolerance")
    try:
        ok, results = is_graph_sim(t, epsilon)
    except ValueError as e:
        raise CliError(4, str(e)) from e
    p = t.partition.p
    mask = lambda m: "".join("1" if m >> i & 1 else "0" for i in range(p))
    if args.format == "json":
        _emit_json(
            args,
            {
                "ok": ok,
                "pairs": [
                    {
                        "alpha": list(alpha),
                        "beta": list(beta),
                        "ok": res.ok,
                        "diameter": format_rational(res.diameter),
                        "worst_b": mask(res.worst_b),
                        "best_a": mask(res.best_a),
                    }
                    for alpha, beta, res in results
                ],
            },
        )
    else:
        rows = [["alpha", "beta", "ok", "diameter", "diameter_exact", "worst_b", "best_a"]]
        for alpha, beta, res in results:
            rows.append(
                [
                    _beta_name(alpha),
                    _beta_name(beta),
                    "1" if res.ok else "0",
                    *_pair(res.diameter),
                    mask(res.worst_b),
                    mask(res.best_a),
                ]
            )
        _emit_text(args, _csv(rows))
    return 0


def cmd_factor_defect(args) -> int:
    a = _load(args.action, ser.load_action, "action")
    piece = _load(args.piece, ser.load_dyadic, "dyadic set")
    target = _load(args.target, ser.load_dyadic, "dyadic set")
    if args.w < 1:
        raise CliError(2, "window width must be >= 1")
    value = factor_defect(a, piece, target, Window(a.d, args.w))
    if args.format == "json":
        _emit_json(
            args,
            {"defect": format_rational(value), "defect_decimal": exact_decimal(value)},
        )
    else:
        _emit_text(args, _csv([["defect", "defect_exact"], _pair(value)]))
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simact",
        description="exact-arithmetic experiments on interval permutations and cylinder tables",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="PRNG seed (required when randomness is used)")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parents=[common], help="distance between two actions")
    p.add_argument("action_a")
    p.add_argument("action_b")
    p.add_argument("--terms", type=int, default=6, help="group elements in the sum")
    p.add_argument("--depth", type=int, default=6, help="dyadic depth per element")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("embed", parents=[common], help="table of an action seen through an adaptation")
    p.add_argument("adaptation")
    p.add_argument("action")
    p.add_argument("--w", type=int, required=True, help="window width")
    p.add_argument("--cuts", required=True, help="partition cuts, comma separated rationals")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("recover", parents=[common], help="rebuild an action from a graph-like table")
    p.add_argument("table")
    p.add_argument("--epsilon", required=True, help="graph tolerance")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("realize", parents=[common], help="rank-1 action reproducing a table exactly")
    p.add_argument("table")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("smooth", parents=[common], help="blur a table along a delta ladder")
    p.add_argument("table")
    p.add_argument("--delta", required=True, help="largest blur width")
    p.add_argument("--steps", type=int, default=4, help="ladder rungs above zero")
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("wrp-demo", parents=[common], help="tower-matching conjugacy search on random pairs")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--n", type=int, default=1024, help="resolution")
    p.add_argument("--min-cycle", type=int, default=64)
    p.add_argument("--epsilon", default="1/16")
    p.add_argument("--terms", type=int, default=6)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--times", action="store_true", help="fill the wall-clock column (breaks byte determinism)")
    p.set_defaults(func=cmd_wrp_demo)

    p = sub.add_parser("graph-test", parents=[common], help="two-time graph test over all window pairs")
    p.add_argument("table")
    p.add_argument("--epsilon", required=True)
    p.set_defaults(func=cmd_graph_test)

    p = sub.add_parser("factor-defect", parents=[common], help="distance from a target set to an itinerary algebra")
    p.add_argument("action")
    p.add_argument("--piece", required=True, help="dyadic set file generating the algebra")
    p.add_argument("--target", required=True, help="dyadic set file to approximate")
    p.add_argument("--w", type=int, default=2, help="window width")
    p.set_defaults(func=cmd_factor_defect)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.code


if __name__ == "__main__":
    sys.exit(main())
