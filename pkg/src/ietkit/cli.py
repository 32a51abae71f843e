"""Command-line front end.

Exchanges enter as JSON objects {"lambda": ["1/2", ...], "pi": [3, 2, 1]},
inline or as a file path. Delimited results go to stdout; figures are
rendered to files only when a --fig path is given. Exit status 0 means
the requested check or search succeeded, 1 means it ran and failed (a
violated bound, an unreachable target, a length tie), 2 means the input
or usage was malformed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .errors import (
    CapExceededError,
    InconsistentPathError,
    InductionTargetError,
    SaddleConnectionError,
    TowerDisjointnessError,
)
from .iet import DEFAULT_ORBIT_CAP, Iet, Permutation
from .induction3 import SYMMETRIC_3, return_time_identity, veech_step
from .numeric import IntervalSet
from .rauzy import rauzy_class, rv_step
from .sampling import random_reverse_instance
from .whirly import (
    PairSets,
    SelfShift,
    WeakMetricConfig,
    WhirlyWindow,
    construct_window_point,
    find_positive_loop,
    find_window_hits,
    tower_stack,
    verify_overlap_claims,
    whirly_probe,
)

DEFAULT_SEED = 7


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by the subcommands."""

    seed: int = DEFAULT_SEED
    induction_depth: int = 200
    orbit_cap: int = DEFAULT_ORBIT_CAP
    metric_truncation: int = 20


def _load_iet(text: str) -> Iet:
    """Inline JSON when the argument starts with '{', else a file path."""
    if text.lstrip().startswith("{"):
        data = json.loads(text)
    else:
        with open(text, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    return Iet.from_json_dict(data)


def _parse_set(text: str) -> IntervalSet:
    """Parse 'lo:hi[,lo:hi...]' with rational endpoints."""
    pairs = []
    for chunk in text.split(","):
        lo, _, hi = chunk.partition(":")
        if not _:
            raise ValueError(f"interval {chunk!r} is not lo:hi")
        pairs.append((Fraction(lo.strip()), Fraction(hi.strip())))
    return IntervalSet.from_pairs(pairs)


def _join(values) -> str:
    return ";".join(str(v) for v in values)


def _writer():
    return csv.writer(sys.stdout, lineterminator="\n")


# ---------------------------------------------------------------------------
# Handlers.


def _cmd_simulate(args) -> int:
    t = _load_iet(args.iet)
    x = Fraction(args.x)
    cap = args.orbit_cap
    if args.orbit or args.fig:
        if abs(args.n) > 10_000:
            raise ValueError("orbit listing only supported for |n| <= 10000")
        points = t.orbit(x, args.n)
        final = points[-1]
    else:
        points = None
        final = t.apply_power(x, args.n, cap)
    if args.orbit:
        w = _writer()
        w.writerow(["step", "point"])
        for i, p in enumerate(points):
            w.writerow([i, str(p)])
    else:
        print(final)
    if args.fig:
        from .plots import save_orbit

        save_orbit(points, args.fig)
    return 0


def _run_induction_csv(args) -> int:
    t = _load_iet(args.iet)
    w = _writer()
    w.writerow(["step", "move", "lambda", "column_sums"])
    from .rauzy import VisitationMatrix

    cumulative = VisitationMatrix.identity(t.size)
    totals = [t.total]
    current = t
    try:
        for k in range(1, args.steps + 1):
            step = rv_step(current)
            current = step.map
            cumulative = cumulative @ step.matrix
            totals.append(current.total)
            w.writerow(
                [k, str(step.move), _join(current.lengths), _join(cumulative.column_sums())]
            )
    except SaddleConnectionError as exc:
        sys.stdout.flush()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        if args.fig:
            from .plots import save_length_decay

            save_length_decay(totals, args.fig)
    return 0


def _cmd_rauzy_class(args) -> int:
    p = Permutation.from_text(args.pi)
    rc = rauzy_class(p)
    lines = ["digraph rauzy_class {"]
    for i, perm in enumerate(rc.perms):
        lines.append(f'  n{i} [label="{perm}"];')
    for src, move, dst in rc.edges:
        lines.append(f'  n{src} -> n{dst} [label="{move}"];')
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.dot} ({len(rc.perms)} permutations)")
    else:
        sys.stdout.write(text)
    if args.fig:
        from .plots import save_rauzy_diagram

        save_rauzy_diagram(rc, args.fig)
    return 0


def _cmd_verify_lemma2(args) -> int:
    cfg = RunConfig(seed=args.seed)
    rng = Random(cfg.seed)
    print(f"# seed={cfg.seed}")
    w = _writer()
    w.writerow(["lambda", "k0", "a1", "a2", "a3", "identity_ok"])
    failures = 0
    for _ in range(args.samples):
        for _attempt in range(10):
            try:
                _path, _alpha, t = random_reverse_instance(rng, args.max_path_len)
                result = veech_step(t)
                break
            except (SaddleConnectionError, InductionTargetError):
                continue
        else:
            raise CapExceededError("could not draw a connection-free sample")
        ok = return_time_identity(result)
        a1, a2, a3 = result.sums
        w.writerow([_join(t.lengths), result.steps, a1, a2, a3, str(ok).lower()])
        if not ok:
            failures += 1
    if failures:
        print(f"error: identity failed on {failures} samples", file=sys.stderr)
        return 1
    return 0


def _cmd_towers(args) -> int:
    t = _load_iet(args.iet)
    if args.window is not None:
        window = Fraction(args.window)
    elif t.size == 3 and t.perm == SYMMETRIC_3:
        window = max(t.lengths[0], t.lengths[2])
    else:
        inv = t.perm.inverse
        window = t.total - min(t.lengths[-1], t.lengths[inv(t.size) - 1])
    stack = tower_stack(t, window, args.orbit_cap)
    w = _writer()
    w.writerow(["tower", "base_lo", "base_hi", "height", "covered"])
    for i, tower in enumerate(stack.towers, start=1):
        w.writerow(
            [i, str(tower.base.lo), str(tower.base.hi), tower.height,
             str(tower.covered_measure)]
        )
    w.writerow(["remainder", "", "", "", str(stack.remainder_measure)])
    if args.fig:
        from .plots import save_tower_stack

        save_tower_stack(stack, args.fig)
    return 0


def _cmd_whirly_claims(args) -> int:
    alpha = tuple(Fraction(v) for v in args.alpha.split(","))
    window = WhirlyWindow(
        Fraction(args.eps1), Fraction(args.eps2), find_positive_loop()
    )
    t = construct_window_point(alpha, window)
    report = verify_overlap_claims(t, window, args.l)
    w = _writer()
    w.writerow(["quantity", "computed", "bound", "holds"])
    for row in report.to_csv_rows():
        w.writerow(row)
    if args.fig:
        from .plots import save_claims

        save_claims(report, args.fig)
    return 0 if report.all_hold else 1


def _default_probe_subject(t: Iet, eps, l: int) -> IntervalSet:
    """The pullback window when the exchange is a window point, else the
    widest return window, else the first piece."""
    if t.size == 3 and t.perm == SYMMETRIC_3:
        scan = find_window_hits(t, eps, l, 0)
        if scan.hits:
            total = sum(scan.hits[0].gamma, Fraction(0))
        else:
            total = max(t.lengths[0], t.lengths[2])
        return IntervalSet.from_pairs([(Fraction(0), total)])
    return IntervalSet.from_pairs([(Fraction(0), t.lengths[0])])


def _cmd_whirly_probe(args) -> int:
    t = _load_iet(args.iet)
    eps = Fraction(args.eps)
    run = RunConfig(induction_depth=args.depth, metric_truncation=args.metric_n)
    cfg = WeakMetricConfig(truncation=run.metric_truncation)
    if args.set_e:
        subject = _parse_set(args.set_e)
    else:
        subject = _default_probe_subject(t, eps, args.l)
    if args.mode == "selfshift":
        mode = SelfShift(subject, args.l)
    else:
        target = _parse_set(args.set_f) if args.set_f else subject
        mode = PairSets(subject, target)
    cache: dict = {}
    report = whirly_probe(
        t, mode, eps, cfg, search=run.induction_depth, distance_cache=cache
    )
    print(json.dumps(report.to_json_dict(), indent=2))
    if args.fig:
        from .plots import save_probe_scan

        save_probe_scan(report, cache, t.total, args.fig)
    return 0 if report.success else 1


# ---------------------------------------------------------------------------
# Parser assembly.


def _add_iet_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--iet",
        required=True,
        help='exchange as JSON {"lambda": [...], "pi": [...]} inline or a file path',
    )


def _add_fig_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fig", help="also render a figure to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ietkit",
        description="exact interval exchange toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="apply powers of an exchange to a point")
    _add_iet_arg(p)
    p.add_argument("--x", required=True, help="starting point, rational")
    p.add_argument("--n", type=int, default=1, help="power to apply (may be negative)")
    p.add_argument("--orbit", action="store_true", help="print every step as CSV")
    p.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    _add_fig_arg(p)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("induce", help="run length induction, one CSV row per step")
    _add_iet_arg(p)
    p.add_argument("--steps", type=int, required=True)
    _add_fig_arg(p)
    p.set_defaults(handler=_run_induction_csv)

    rz = sub.add_parser("rauzy", help="move graphs and induction runs")
    rz_sub = rz.add_subparsers(dest="rauzy_command", required=True)
    p = rz_sub.add_parser("class", help="closure of a permutation under both moves")
    p.add_argument("--pi", required=True, help="permutation, e.g. 3,2,1")
    p.add_argument("--dot", help="write the graph in DOT format to this file")
    _add_fig_arg(p)
    p.set_defaults(handler=_cmd_rauzy_class)
    p = rz_sub.add_parser("iterate", help="same as induce")
    _add_iet_arg(p)
    p.add_argument("--steps", type=int, required=True)
    _add_fig_arg(p)
    p.set_defaults(handler=_run_induction_csv)

    p = sub.add_parser(
        "verify-lemma2",
        help="sample random exchanges and check the return-time identity",
    )
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--max-path-len", type=int, default=30)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(handler=_cmd_verify_lemma2)

    p = sub.add_parser("towers", help="return towers over a window")
    _add_iet_arg(p)
    p.add_argument("--window", help="window length, rational; defaults to max outer length")
    p.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    _add_fig_arg(p)
    p.set_defaults(handler=_cmd_towers)

    wh = sub.add_parser("whirly", help="window construction, claims, and probes")
    wh_sub = wh.add_subparsers(dest="whirly_command", required=True)
    p = wh_sub.add_parser("claims", help="overlap claims for a window point")
    p.add_argument("--alpha", required=True, help="three rationals, comma separated")
    p.add_argument("--eps1", default="1/100")
    p.add_argument("--eps2", default="1/100")
    p.add_argument("--l", type=int, default=2)
    _add_fig_arg(p)
    p.set_defaults(handler=_cmd_whirly_claims)
    p = wh_sub.add_parser("probe", help="search for a near-identity mixing power")
    _add_iet_arg(p)
    p.add_argument("--eps", default="1/20")
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--depth", type=int, default=200, help="window scan depth")
    p.add_argument("--metric-N", dest="metric_n", type=int, default=20)
    p.add_argument("--mode", choices=("selfshift", "pairsets"), default="selfshift")
    p.add_argument("--set-e", help="subject set, lo:hi[,lo:hi...]")
    p.add_argument("--set-f", help="target set for pairsets mode")
    _add_fig_arg(p)
    p.set_defaults(handler=_cmd_whirly_probe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (
        SaddleConnectionError,
        InductionTargetError,
        InconsistentPathError,
        TowerDisjointnessError,
        CapExceededError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, ZeroDivisionError, OSError) as exc:
        # json.JSONDecodeError is a ValueError, so malformed input lands here.
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
