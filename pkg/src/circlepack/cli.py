"""Command-line interface: solve, check, render, bench, schedule.

Exit codes: 0 success/feasible, 2 infeasible or constraint violations,
1 usage, parse, or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from circlepack.bench import expand_cells, parse_sweep, run_bench, summarize
from circlepack.descent import make_schedule
from circlepack.energy import Instance
from circlepack.layoutfile import LayoutParseError, read_layout, write_layout
from circlepack.radii import UnknownInstanceError, best_known_radius
from circlepack.search import SearchConfig, global_search
from circlepack.svgout import render_svg
from circlepack.verify import DEFAULT_TOLERANCE, check_layout


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; argparse's default of 2 is reserved for
    # "ran fine, layout infeasible"
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_descent_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--time-limit", type=float, default=900.0, help="wall-clock budget in seconds (default 900)"
    )
    p.add_argument("--group-size", type=int, default=100, help="initial descent group size")
    p.add_argument("--group-repeats", type=int, default=10, help="initial passes per group size")
    p.add_argument("--max-iter", type=int, default=1000, help="iteration cap per group descent")


def _config_from(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        alpha=args.alpha,
        beta=args.beta,
        candidates=args.hop_candidates,
        group_size=args.group_size,
        repeats=args.group_repeats,
        seed=args.seed,
        time_limit=args.time_limit,
        max_iter=args.max_iter,
    )


def cmd_solve(args: argparse.Namespace) -> int:
    radius = args.radius if args.radius is not None else best_known_radius(args.n)
    instance = Instance(args.n, radius)
    outcome = global_search(instance, _config_from(args))
    write_layout(args.out, outcome.layout, radius)
    if args.svg:
        render_svg(outcome.layout, radius, args.svg)
    certified = outcome.feasible
    if outcome.feasible and not check_layout(outcome.layout, radius).feasible():
        print("solve: energy threshold met but certificate check failed", file=sys.stderr)
        certified = False
    print(
        f"n={args.n} R={radius!r} seed={args.seed} feasible={'yes' if certified else 'no'} "
        f"energy={outcome.energy!r} elapsed={outcome.elapsed:.3f}s "
        f"hops={outcome.hops_executed} descents={outcome.descent_calls}"
    )
    return 0 if certified else 2


def cmd_check(args: argparse.Namespace) -> int:
    centers, radius = read_layout(args.layout)
    report = check_layout(centers, radius)
    ok = report.feasible(args.tolerance)
    print(f"n={report.n} R={radius!r}")
    print(f"max pair violation: {report.max_pair_violation!r}")
    print(f"max container violation: {report.max_container_violation!r}")
    print(f"energy: {report.energy!r}")
    print(f"feasible within {args.tolerance:g}: {'yes' if ok else 'no'}")
    return 0 if ok else 2


def cmd_render(args: argparse.Namespace) -> int:
    centers, radius = read_layout(args.layout)
    render_svg(centers, radius, args.out)
    return 0


def cmd_schedule(args: argparse.Namespace) -> int:
    for s, k in make_schedule(args.n, args.group_size, args.group_repeats):
        print(f"{s} {k}")
    return 0


def _parse_int_list(text: str) -> list:
    return [int(part) for part in text.split(",") if part.strip()]


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = _parse_int_list(args.n) if args.n else []
    if args.radius:
        radii = [float(part) for part in args.radius.split(",") if part.strip()]
        if len(radii) != len(sizes):
            raise ValueError(f"--radius lists {len(radii)} values for {len(sizes)} instances")
    else:
        radii = [best_known_radius(n) for n in sizes]
    instances = list(zip(sizes, radii))
    seeds = range(args.seed_base, args.seed_base + args.seeds)
    group_sizes = parse_sweep(args.sweep_group_size) if args.sweep_group_size else [args.group_size]
    cells = expand_cells(
        instances,
        seeds,
        time_limit=args.time_limit,
        group_sizes=group_sizes,
        repeats=args.group_repeats,
        max_iter=args.max_iter,
    )
    records = run_bench(
        cells,
        jobs=args.jobs,
        emit=print,
        outdir=Path(args.outdir) if args.outdir else None,
    )
    for summary in summarize(records):
        print(summary.line())
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="circlepack", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="search for a feasible layout and write it out")
    solve.add_argument("--n", type=int, required=True, help="number of unit circles")
    solve.add_argument(
        "--radius", type=float, default=None, help="container radius (default: bundled table)"
    )
    solve.add_argument("--out", required=True, help="layout file to write")
    solve.add_argument("--svg", default=None, help="also render the layout to this SVG path")
    solve.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    solve.add_argument("--alpha", type=float, default=0.4, help="initial container shrink scale")
    solve.add_argument("--beta", type=float, default=0.03, help="shrink growth per hop")
    solve.add_argument("--hop-candidates", type=int, default=10, help="perturbed layouts per hop")
    _add_descent_flags(solve)
    solve.set_defaults(func=cmd_solve)

    check = sub.add_parser("check", help="verify a layout file against the packing constraints")
    check.add_argument("layout", help="layout file to verify")
    check.add_argument(
        "--tolerance",
        type=float,
        default=DEFAULT_TOLERANCE,
        help="largest violation still accepted (default 1e-9)",
    )
    check.set_defaults(func=cmd_check)

    render = sub.add_parser("render", help="render a layout file to SVG")
    render.add_argument("layout", help="layout file to read")
    render.add_argument("--out", required=True, help="SVG file to write")
    render.set_defaults(func=cmd_render)

    bench = sub.add_parser("bench", help="run seeded searches over an instance set")
    bench.add_argument("--n", default="", help="comma-separated circle counts, e.g. 7,50,100")
    bench.add_argument(
        "--radius",
        default="",
        help="comma-separated radii matching --n (default: bundled table)",
    )
    bench.add_argument("--seeds", type=int, default=10, help="seeds per instance (default 10)")
    bench.add_argument("--seed-base", type=int, default=0, help="first seed (default 0)")
    bench.add_argument("--jobs", type=int, default=1, help="concurrent runs (default 1)")
    bench.add_argument(
        "--sweep-group-size",
        default="",
        metavar="A:B:STEP",
        help="repeat the set for each group size in the inclusive range",
    )
    bench.add_argument("--outdir", default="", help="directory for per-run layout files")
    _add_descent_flags(bench)
    bench.set_defaults(func=cmd_bench)

    schedule = sub.add_parser("schedule", help="print the descent round schedule for an n")
    schedule.add_argument("--n", type=int, required=True)
    schedule.add_argument("--group-size", type=int, default=100)
    schedule.add_argument("--group-repeats", type=int, default=10)
    schedule.set_defaults(func=cmd_schedule)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except LayoutParseError as exc:
        print(f"circlepack: layout error: {exc}", file=sys.stderr)
        return 1
    except UnknownInstanceError as exc:
        print(f"circlepack: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, TypeError) as exc:
        print(f"circlepack: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
