"""
Command-line interface: solve, decide, gen, bench, verify and plot.

Results go to stdout as JSON (or CSV for bench); logs go to stderr. Exit
codes: 0 success, 1 bad input or usage, 2 internal contract failure.
"""

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field

from src import config
from src.bench.harness import (
    bench_run,
    fit_loglog_slope,
    load_bench_spec,
    summarize,
    write_csv,
)
from src.constants import DEFAULT_REPEAT_MULTIPLIER
from src.errors import ContractError, InputError, UdgCliqueError
from src.geometry.primitives import CliqueResult, PointSet, clique_violations
from src.grid.index import build_grid
from src.instances.generators import FAMILIES, GenSpec, generate
from src.instances.pointfile import read_clique, read_points, write_clique, write_points
from src.render.svg import render_svg
from src.solvers.convex_randomized import RandomizedConfig, run_convex
from src.solvers.convex_sweep import LOWER_POLICIES, sweep_given_point
from src.solvers.general import decide_clique, max_clique_general
from src.solvers.lens import max_clique_lens_baseline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONTRACT = 2

ALGOS = ("general", "lens", "convex", "convex-given")
FAMILY_ALIASES = {
    "uniform": "uniform_square",
    "clustered": "clustered_bounded_k",
    "convex": "convex_circle",
}

# Set from --debug; drops into the debugger when a command fails
DEBUG_MODE = False


class UsageExitParser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; here 2 means a contract failure."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class SolveReport:
    clique_size: int
    indices: list[int]
    algorithm: str
    elapsed_ms: float
    probe_trace: list[dict] | None = None
    seed: int | None = None
    update_counts: list[dict] | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        data = {k: v for k, v in asdict(self).items() if v is not None}
        extra = data.pop("extra")
        data.update(extra)
        return data


def _emit(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=False))


def _reverified(ps: PointSet, clique: CliqueResult) -> CliqueResult:
    violations = clique_violations(ps, clique.indices)
    if violations:
        logger.error(f"{clique.algorithm} result fails re-verification: {violations}")
        raise ContractError(f"Reported clique has {len(violations)} violating pairs")
    return clique


def cmd_solve(args) -> int:
    ps = read_points(args.points)
    started = time.perf_counter()
    probe_trace = update_counts = None
    extra: dict = {}

    if args.algo == "general":
        clique, trace = max_clique_general(ps)
        probe_trace = trace.as_dicts()
    elif args.algo == "lens":
        clique = max_clique_lens_baseline(ps)
    elif args.algo == "convex":
        cfg = RandomizedConfig(
            c=args.c, seed=args.seed, threshold_override=args.threshold_override
        )
        run = run_convex(ps, cfg)
        clique = run.clique
        extra["randomized"] = run.as_dict()
    else:
        if args.anchor is None:
            raise InputError("--algo convex-given requires --anchor")
        clique, reports = sweep_given_point(
            ps, args.anchor, args.seed, args.lower_policy
        )
        update_counts = [r.counts.as_dict() for r in reports]
    elapsed = (time.perf_counter() - started) * 1000.0

    clique = _reverified(ps, clique)
    report = SolveReport(
        clique_size=clique.size,
        indices=list(clique.indices),
        algorithm=clique.algorithm,
        elapsed_ms=round(elapsed, 3),
        probe_trace=probe_trace,
        seed=args.seed,
        update_counts=update_counts,
        extra=extra,
    )
    if args.out_clique:
        write_clique(args.out_clique, clique.indices)
    _emit(report.as_dict())
    return EXIT_OK


def cmd_decide(args) -> int:
    ps = read_points(args.points)
    outcome = decide_clique(ps, build_grid(ps), args.k)
    witness = None
    if outcome.found:
        witness = list(_reverified(ps, outcome.witness).indices)
    _emit({"found": outcome.found, "witness": witness, "case": outcome.case})
    return EXIT_OK


def cmd_gen(args) -> int:
    family = FAMILY_ALIASES.get(args.family, args.family)
    spec = GenSpec(family, args.n, args.param, args.seed, args.k_max)
    ps = generate(spec)
    if args.out:
        write_points(args.out, ps, header=spec.header())
    else:
        print(f"# {spec.header()}")
        for x, y in ps.coords:
            print(f"{float(x)!r} {float(y)!r}")
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = load_bench_spec(args.spec)
    if args.timeout is not None:
        spec.timeout_s = args.timeout
    settings = config.load_settings(
        threads=args.threads, checks=not args.no_checks, debug=args.debug
    )
    rows = bench_run(spec, settings, isolate=not args.serial)
    if args.summary:
        rows = summarize(rows)

    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            write_csv(rows, f)
    else:
        write_csv(rows, sys.stdout)

    if args.fit:
        slopes = {}
        for pair in args.fit:
            family, _, algo = pair.partition(":")
            slopes[pair] = round(fit_loglog_slope(rows, family, algo), 4)
        print(json.dumps({"loglog_slopes": slopes}), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    ps = read_points(args.points)
    ids = read_clique(args.clique)
    violations = clique_violations(ps, ids)
    _emit(
        {
            "valid": not violations,
            "size": len(set(ids)),
            "violations": [list(v) for v in violations],
        }
    )
    return EXIT_OK if not violations else EXIT_INPUT


def cmd_plot(args) -> int:
    ps = read_points(args.points)
    clique = None
    if args.clique:
        clique = read_clique(args.clique)
    elif args.solve == "general":
        clique = max_clique_general(ps)[0].indices
    elif args.solve == "lens":
        clique = max_clique_lens_baseline(ps).indices
    lens = tuple(args.lens) if args.lens else None
    render_svg(ps, args.out, clique=clique, lens=lens, title=str(args.points))
    return EXIT_OK


def _common_flags() -> argparse.ArgumentParser:
    common = UsageExitParser(add_help=False)
    common.add_argument(
        "--verbose", action="store_true", help="Enable verbose logging (DEBUG level)"
    )
    common.add_argument(
        "--debug", action="store_true", help="Enter breakpoint() on errors"
    )
    common.add_argument("--seed", type=int, default=None, help="RNG seed")
    common.add_argument(
        "--threads", type=int, default=None, help="Parallelism cap (bench)"
    )
    common.add_argument(
        "--no-checks",
        action="store_true",
        help="Skip debug-only invariant checks inside solvers",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """
    Build the udg-clique parser.

    Every subcommand shares the --verbose, --debug, --seed, --threads and
    --no-checks flags and sets a `handler` default that main() dispatches to.

    Returns:
        ArgumentParser whose errors exit with code 1
    """
    parser = UsageExitParser(
        prog="udg-clique", description="Maximum cliques in unit-disk graphs"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()

    solve = sub.add_parser("solve", parents=[common], help="Maximum clique")
    solve.add_argument("points", help="Point file")
    solve.add_argument("--algo", choices=ALGOS, default="general")
    solve.add_argument("--anchor", type=int, help="Anchor id for convex-given")
    solve.add_argument(
        "--c",
        type=float,
        default=DEFAULT_REPEAT_MULTIPLIER,
        help="Repeat multiplier of the randomized convex algorithm",
    )
    solve.add_argument("--threshold-override", type=int, default=None)
    solve.add_argument("--lower-policy", choices=LOWER_POLICIES, default="relaxed")
    solve.add_argument("--out-clique", help="Also write the clique ids to this file")
    solve.set_defaults(handler=cmd_solve)

    decide = sub.add_parser("decide", parents=[common], help="Is there a k-clique?")
    decide.add_argument("points")
    decide.add_argument("--k", type=int, required=True)
    decide.set_defaults(handler=cmd_decide)

    gen = sub.add_parser("gen", parents=[common], help="Generate an instance")
    gen.add_argument(
        "--family", choices=list(FAMILIES) + list(FAMILY_ALIASES), required=True
    )
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument(
        "--param",
        type=float,
        required=True,
        help="Square side, cluster separation or circle radius",
    )
    gen.add_argument("--k-max", type=int, default=8)
    gen.add_argument("--out", help="Output point file (stdout if omitted)")
    gen.set_defaults(handler=cmd_gen)

    bench = sub.add_parser("bench", parents=[common], help="Run a bench matrix")
    bench.add_argument("--spec", required=True, help="Bench spec JSON")
    bench.add_argument("--out", help="CSV output (stdout if omitted)")
    bench.add_argument("--timeout", type=float, default=None, help="Seconds per cell")
    bench.add_argument("--summary", action="store_true", help="Append median rows")
    bench.add_argument(
        "--serial", action="store_true", help="Run cells in-process, no timeouts"
    )
    bench.add_argument(
        "--fit",
        action="append",
        metavar="FAMILY:ALGO",
        help="Print the log-log slope of elapsed time against n",
    )
    bench.set_defaults(handler=cmd_bench)

    verify = sub.add_parser("verify", parents=[common], help="Check a clique file")
    verify.add_argument("points")
    verify.add_argument("--clique", required=True)
    verify.set_defaults(handler=cmd_verify)

    plot = sub.add_parser("plot", parents=[common], help="Render an SVG figure")
    plot.add_argument("points")
    plot.add_argument("--out", required=True)
    plot.add_argument("--clique", help="Clique file to highlight")
    plot.add_argument("--lens", type=int, nargs=2, metavar=("P", "Q"))
    plot.add_argument("--solve", choices=("general", "lens"))
    plot.set_defaults(handler=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Entry point of the udg-clique console script.

    Args:
        argv: Arguments without the program name; sys.argv when None

    Returns:
        Exit code: 0 on success, 1 for bad input or usage, 2 for a broken
        internal contract
    """
    global DEBUG_MODE
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT

    DEBUG_MODE = args.debug
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )

    try:
        settings = config.load_settings(
            threads=args.threads,
            checks=not args.no_checks,
            debug=args.debug,
            verbose=args.verbose,
        )
        config.apply_settings(settings)
        return args.handler(args)
    except ContractError as e:
        logger.error(f"Internal contract failure in {args.command}: {e}")
        if DEBUG_MODE:
            breakpoint()
        return EXIT_CONTRACT
    except (InputError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        if DEBUG_MODE:
            breakpoint()
        return EXIT_INPUT
    except UdgCliqueError as e:
        logger.error(f"{args.command} failed: {e}")
        if DEBUG_MODE:
            breakpoint()
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
