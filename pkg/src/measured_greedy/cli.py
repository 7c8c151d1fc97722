"""Command line entry point.

Exit codes: 0 success, 1 usage, 2 invalid input or configuration,
3 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from .instances import InstanceError, load_instance, random_instance
from .matroids import rank
from .reference import brute_force_opt
from .report import bench_rows, build_report, dumps, rows_to_csv
from .rounding import RoundingConfig
from .solver import BASELINE_MODES, SolverConfig, accelerated_mcg

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2, 3

log = logging.getLogger("measured_greedy")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_solver_flags(p: argparse.ArgumentParser, epsilon_default: float | None = 0.1) -> None:
    if epsilon_default is not None:
        p.add_argument("--epsilon", type=float, default=epsilon_default, help="accuracy parameter (default %(default)s)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-multiplier", type=float, default=1.0, help="scales the Hoeffding sample count")
    p.add_argument("--sample-cap", type=int, default=None, help="upper limit on samples per estimate")
    p.add_argument("--failure-prob", type=float, default=None, help="per-estimate failure probability (default 1/n^2)")
    p.add_argument("--baseline", choices=BASELINE_MODES, default="smooth", help="coordinate update rule")


def _config(args: argparse.Namespace, epsilon: float | None = None) -> SolverConfig:
    return SolverConfig(
        epsilon=args.epsilon if epsilon is None else epsilon,
        seed=args.seed,
        sample_multiplier=args.sample_multiplier,
        sample_cap=args.sample_cap,
        failure_prob=args.failure_prob,
        baseline=args.baseline,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="measured-greedy", description="Matroid-constrained submodular maximization.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="solve one instance and write a JSON report")
    run.add_argument("instance", help="instance JSON file")
    _add_solver_flags(run)
    run.add_argument("--round", action="store_true", help="also round y(1) by sample-and-repair")
    run.add_argument("--round-attempts", type=int, default=100)
    bf = run.add_mutually_exclusive_group()
    bf.add_argument("--brute-force", dest="brute_force", action="store_true", default=None)
    bf.add_argument("--no-brute-force", dest="brute_force", action="store_false")
    run.add_argument("--trace", type=Path, help="write the full run trace (JSON) here")
    run.add_argument("--output", type=Path, help="report path (default: stdout)")
    run.add_argument("--figure", type=Path, help="trajectory figure (PNG/PDF)")

    brute = sub.add_parser("brute-force", help="exhaustive optimum (n <= 20)")
    brute.add_argument("instance")
    brute.add_argument("--output", type=Path)

    val = sub.add_parser("validate", help="check an instance document")
    val.add_argument("instance")

    bench = sub.add_parser("bench", help="sweep epsilon or n and emit CSV rows")
    bench.add_argument("instance", nargs="?", help="instance to sweep epsilon on")
    bench.add_argument("--epsilons", type=_float_list, default=[0.4, 0.2, 0.1])
    bench.add_argument("--sizes", type=_int_list, help="generate random instances of these sizes instead")
    bench.add_argument("--family", choices=("cut", "coverage", "facility"), default="cut")
    bench.add_argument("--k", type=int, default=3, help="matroid rank for generated instances")
    _add_solver_flags(bench, epsilon_default=None)
    bench.add_argument("--output", type=Path, help="CSV path (default: stdout)")
    bench.add_argument("--figure", type=Path, help="figure path (default: next to --output, .png)")
    bench.add_argument("--no-figure", action="store_true")
    return parser


def _write(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def cmd_run(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    cfg = _config(args)
    y, trace = accelerated_mcg(inst.function, inst.matroid, cfg)
    rounding = RoundingConfig(args.round_attempts, args.seed) if args.round else None
    report = build_report(inst, y, trace, rounding=rounding, brute_force=args.brute_force)
    if args.trace:
        args.trace.write_text(dumps(trace.to_dict()), encoding="utf-8")
    _write(dumps(report), args.output)
    if args.figure:
        from .plotting import plot_run

        opt = report["brute_force"]["value"] if report["brute_force"] else None
        plot_run(trace, args.figure, opt)
    return EXIT_OK


def cmd_brute_force(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    res = brute_force_opt(inst.function, inst.matroid)
    _write(dumps({"set": res.opt_set.ids(), "value": res.opt_value, "enumerated": res.enumerated_count}), args.output)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    sys.stdout.write(
        dumps({"valid": True, "n": inst.n, "function": inst.function.kind, "matroid": inst.matroid.kind, "rank": rank(inst.matroid)})
    )
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    if args.sizes:
        instances = [random_instance(args.family, n, args.seed, k=args.k) for n in args.sizes]
    elif args.instance:
        instances = [load_instance(args.instance)]
    else:
        raise UsageError("bench needs an instance file or --sizes")
    cfg = _config(args, epsilon=args.epsilons[0])
    rows = bench_rows(instances, args.epsilons, cfg)
    _write(rows_to_csv(rows), args.output)
    figure = args.figure
    if figure is None and args.output is not None:
        figure = args.output.with_suffix(".png")
    if figure is not None and not args.no_figure:
        from .plotting import plot_bench

        plot_bench(rows, figure)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "brute-force": cmd_brute_force, "validate": cmd_validate, "bench": cmd_bench}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InstanceError, FileNotFoundError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
