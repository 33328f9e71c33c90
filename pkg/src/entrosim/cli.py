"""Unified command-line entry point for all simulations and analyses.

One binary, five simulation subcommands (`macro`, `ca1d`, `schelling`,
`exchange`, `consumer`) plus `replay`.  Every run writes a JSON manifest
next to its outputs holding the fully resolved argument vector; replaying
a manifest regenerates the outputs byte for byte.  Exit codes: 0 on
success, 1 on usage errors, 2 on data errors.

Randomized subcommands take a 64-bit `--seed`; when omitted, one is
generated and printed so the run stays reproducible after the fact.
`--sweep N` runs N consecutive seeds (optionally in parallel with
`--jobs`), each with its own output prefix and manifest.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from entrosim import __version__
from entrosim.ca import (
    Boundary1D,
    Boundary2D,
    evolve_1d,
    random_row,
    rule_table,
    single_seed_row,
)
from entrosim.consumer import ConsumerConfig, run_consumer
from entrosim.exchange import ExchangeConfig, run_exchange, wealth_histogram
from entrosim.io import (
    DataError,
    atomic_write_bytes,
    atomic_write_text,
    format_fit_csv,
    format_histogram_csv,
    format_labeled_trace_csv,
    format_report_csv,
    format_trace_csv,
    grid_to_pgm,
    grid_to_ppm,
    grid_to_text,
    parse_macro_csv,
    render_rows_text,
    rows_to_pgm,
)
from entrosim.macro import analyze_series
from entrosim.rng import Xoshiro256
from entrosim.schelling import SchellingConfig, init, run, sweep

__all__ = ["UsageError", "dispatch", "main"]


class UsageError(Exception):
    """Bad invocation: unknown flags, invalid parameter values."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().rstrip()}")


def _add_common(sub: argparse.ArgumentParser, default_prefix: str) -> None:
    sub.add_argument("--output", default=default_prefix,
                     help="output path prefix (default %(default)s)")
    sub.add_argument("--manifest", default=None,
                     help="manifest path (default <output>-manifest.json)")
    sub.add_argument("--config", default=None,
                     help="key=value file providing flag defaults")


def _add_sweep(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None,
                     help="64-bit seed (generated and printed when omitted)")
    sub.add_argument("--sweep", type=int, default=None,
                     help="run N consecutive seeds, one output set each")
    sub.add_argument("--jobs", type=int, default=1,
                     help="parallel workers for --sweep (default 1)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="entrosim",
                     description="entropy-centric production and agent simulations")
    parser.add_argument("--version", action="version",
                        version=f"entrosim {__version__}")
    subs = parser.add_subparsers(dest="subcommand", metavar="subcommand",
                                 required=True)

    macro = subs.add_parser("macro", help="production-entropy report from a CSV series")
    macro.add_argument("--input", required=True, help="period,E,V,W[,N][,alpha] CSV")
    macro.add_argument("--output", default="macro-report.csv",
                       help="report CSV path (default %(default)s)")
    macro.add_argument("--manifest", default=None,
                       help="manifest path (default <output>.manifest.json)")
    macro.add_argument("--config", default=None,
                       help="key=value file providing flag defaults")

    ca1d = subs.add_parser("ca1d", help="elementary 1D cellular automaton diagram")
    ca1d.add_argument("--rule", type=int, required=True, help="Wolfram rule, 0..255")
    ca1d.add_argument("--width", type=int, default=257)
    ca1d.add_argument("--steps", type=int, default=128)
    ca1d.add_argument("--seed-pattern", choices=("single", "random"),
                      default="single", dest="seed_pattern")
    ca1d.add_argument("--boundary", choices=("toroidal", "fixed-zero"),
                      default="toroidal")
    _add_common(ca1d, "ca1d")
    _add_sweep(ca1d)

    schelling = subs.add_parser("schelling", help="segregation dynamic on a 2D grid")
    schelling.add_argument("--width", type=int, default=20)
    schelling.add_argument("--height", type=int, default=20)
    schelling.add_argument("--tolerance", type=int, default=3,
                           help="max unlike neighbors tolerated")
    schelling.add_argument("--radius", type=int, default=1)
    schelling.add_argument("--density", type=float, default=0.9)
    schelling.add_argument("--split", type=float, default=0.5)
    schelling.add_argument("--max-sweeps", type=int, default=200, dest="max_sweeps")
    schelling.add_argument("--boundary", choices=("toroidal", "bounded"),
                           default="toroidal")
    schelling.add_argument("--snapshot-every", type=int, default=None,
                           dest="snapshot_every",
                           help="write a PGM every N sweeps")
    _add_common(schelling, "schelling")
    _add_sweep(schelling)

    exchange = subs.add_parser("exchange", help="conserved random money-exchange game")
    exchange.add_argument("--players", type=int, required=True)
    exchange.add_argument("--initial", type=float, default=1.0,
                          help="initial money per player")
    exchange.add_argument("--delta-m", type=float, default=1.0, dest="delta_m")
    exchange.add_argument("--steps", type=int, default=10_000)
    exchange.add_argument("--bins", type=int, default=50)
    exchange.add_argument("--trace-stride", type=int, default=None, dest="trace_stride")
    _add_common(exchange, "exchange")
    _add_sweep(exchange)

    consumer = subs.add_parser("consumer",
                               help="consumer model on a prices-by-goods lattice")
    consumer.add_argument("--price-levels", type=int, default=16, dest="price_levels")
    consumer.add_argument("--good-levels", type=int, default=16, dest="good_levels")
    consumer.add_argument("--tolerance", type=int, default=3)
    consumer.add_argument("--radius", type=int, default=1)
    consumer.add_argument("--steps", type=int, default=135)
    consumer.add_argument("--density", type=float, default=0.5)
    consumer.add_argument("--split", type=float, default=0.5)
    consumer.add_argument("--delta-m", type=float, default=1.0, dest="delta_m")
    consumer.add_argument("--initial-money", type=float, default=1.0,
                          dest="initial_money")
    consumer.add_argument("--rent-cell", default="0,0", dest="rent_cell",
                          help="initial rent cell as x,y (default upper-left)")
    consumer.add_argument("--snapshot-steps", default="57,70,91,135",
                          dest="snapshot_steps",
                          help="comma-separated step indices for PPM snapshots")
    consumer.add_argument("--boundary", choices=("bounded", "toroidal"),
                          default="bounded")
    _add_common(consumer, "consumer")
    _add_sweep(consumer)

    replay = subs.add_parser("replay", help="re-run a previously written manifest")
    replay.add_argument("manifest", help="path to a manifest JSON file")

    return parser


# ---------------------------------------------------------------- helpers


def _write_manifest(path: str, subcommand: str, argv: list[str],
                    parameters: dict, outputs: list[str]) -> None:
    payload = {
        "tool": "entrosim",
        "version": __version__,
        "subcommand": subcommand,
        "argv": argv,
        "parameters": parameters,
        "outputs": outputs,
    }
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _emit(path: str, content: str | bytes) -> str:
    if isinstance(content, bytes):
        atomic_write_bytes(path, content)
    else:
        atomic_write_text(path, content)
    print(f"wrote {path}")
    return path


def _check_seed(seed: int) -> int:
    if not 0 <= seed < 2**64:
        raise UsageError(f"entrosim: seed must be in [0, 2^64), got {seed}")
    return seed


def _int_list(raw: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in raw.split(",") if part.strip() != "")
    except ValueError:
        raise UsageError(f"entrosim: {flag} expects comma-separated integers, "
                         f"got {raw!r}") from None


# --------------------------------------------------------------- handlers


def _cmd_macro(args: argparse.Namespace) -> int:
    series = parse_macro_csv(args.input)
    try:
        reports = analyze_series(series)
    except (ValueError, ZeroDivisionError) as exc:
        raise DataError(str(exc)) from exc
    manifest_path = args.manifest or args.output + ".manifest.json"
    outputs = [_emit(args.output, format_report_csv(reports))]
    argv = ["macro", "--input", args.input, "--output", args.output,
            "--manifest", manifest_path]
    _write_manifest(manifest_path, "macro", argv,
                    {"input": args.input, "output": args.output}, outputs)
    return 0


def _cmd_ca1d(args: argparse.Namespace) -> int:
    boundary = Boundary1D(args.boundary)
    table = rule_table(args.rule)
    if args.steps < 0:
        raise UsageError("entrosim: --steps must be nonnegative")
    if args.seed_pattern == "random":
        row = random_row(args.width, Xoshiro256(_check_seed(args.seed)), boundary)
    else:
        row = single_seed_row(args.width, boundary)
    rows = evolve_1d(row, table, args.steps)

    prefix = args.output
    manifest_path = args.manifest or f"{prefix}-manifest.json"
    outputs = [
        _emit(f"{prefix}-diagram.txt", render_rows_text(rows)),
        _emit(f"{prefix}-diagram.pgm", rows_to_pgm(rows)),
    ]
    argv = ["ca1d", "--rule", str(args.rule), "--width", str(args.width),
            "--steps", str(args.steps), "--seed-pattern", args.seed_pattern,
            "--boundary", boundary.value]
    parameters = {"rule": args.rule, "width": args.width, "steps": args.steps,
                  "seed_pattern": args.seed_pattern, "boundary": boundary.value}
    if args.seed_pattern == "random":
        argv += ["--seed", str(args.seed)]
        parameters["seed"] = args.seed
    argv += ["--output", prefix, "--manifest", manifest_path]
    _write_manifest(manifest_path, "ca1d", argv, parameters, outputs)
    return 0


def _cmd_schelling(args: argparse.Namespace) -> int:
    config = SchellingConfig(
        width=args.width,
        height=args.height,
        tolerance_m=args.tolerance,
        radius_r=args.radius,
        density=args.density,
        type_split=args.split,
        seed=_check_seed(args.seed),
        max_sweeps=args.max_sweeps,
        boundary=Boundary2D(args.boundary),
    )
    result = run(config)

    prefix = args.output
    manifest_path = args.manifest or f"{prefix}-manifest.json"
    trace_rows = [
        (step, [u], entropy)
        for (step, entropy), u in zip(result.trace.samples,
                                      result.unsatisfied_per_step)
    ]
    outputs = [
        _emit(f"{prefix}-trace.csv",
              format_labeled_trace_csv(["unsatisfied"], trace_rows)),
        _emit(f"{prefix}-grid.txt", grid_to_text(result.final.grid)),
        _emit(f"{prefix}-grid.pgm", grid_to_pgm(result.final.grid)),
    ]
    if args.snapshot_every is not None:
        if args.snapshot_every < 1:
            raise UsageError("entrosim: --snapshot-every must be positive")
        # replay the identical sweep stream to capture intermediate grids
        state = init(config)
        rng = Xoshiro256(config.seed).jumped()
        outputs.append(_emit(f"{prefix}-sweep0000.pgm", grid_to_pgm(state.grid)))
        for step in range(1, result.final.step + 1):
            state = sweep(state, rng)
            if step % args.snapshot_every == 0 or step == result.final.step:
                outputs.append(
                    _emit(f"{prefix}-sweep{step:04d}.pgm", grid_to_pgm(state.grid))
                )
    if not result.converged:
        print(f"did not converge within {config.max_sweeps} sweeps "
              f"({result.final.unsatisfied_count} agents still unsatisfied)")

    argv = ["schelling", "--width", str(args.width), "--height", str(args.height),
            "--tolerance", str(args.tolerance), "--radius", str(args.radius),
            "--density", repr(args.density), "--split", repr(args.split),
            "--seed", str(args.seed), "--max-sweeps", str(args.max_sweeps),
            "--boundary", args.boundary]
    if args.snapshot_every is not None:
        argv += ["--snapshot-every", str(args.snapshot_every)]
    argv += ["--output", prefix, "--manifest", manifest_path]
    parameters = {
        "width": args.width, "height": args.height, "tolerance_m": args.tolerance,
        "radius_r": args.radius, "density": args.density, "type_split": args.split,
        "seed": args.seed, "max_sweeps": args.max_sweeps,
        "boundary": args.boundary, "snapshot_every": args.snapshot_every,
        "converged": result.converged, "sweeps": result.final.step,
    }
    _write_manifest(manifest_path, "schelling", argv, parameters, outputs)
    return 0


def _cmd_exchange(args: argparse.Namespace) -> int:
    config = ExchangeConfig(
        players_N=args.players,
        initial_money_per_agent=args.initial,
        delta_m=args.delta_m,
        steps=args.steps,
        seed=_check_seed(args.seed),
        histogram_bins=args.bins,
        trace_stride=args.trace_stride,
    )
    result = run_exchange(config)

    prefix = args.output
    manifest_path = args.manifest or f"{prefix}-manifest.json"
    outputs = [
        _emit(f"{prefix}-histogram.csv",
              format_histogram_csv(wealth_histogram(result.final, args.bins))),
        _emit(f"{prefix}-trace.csv", format_trace_csv(result.trace)),
        _emit(f"{prefix}-fit.csv", format_fit_csv(result.fit)),
    ]
    argv = ["exchange", "--players", str(args.players),
            "--initial", repr(args.initial), "--delta-m", repr(args.delta_m),
            "--steps", str(args.steps), "--bins", str(args.bins)]
    if args.trace_stride is not None:
        argv += ["--trace-stride", str(args.trace_stride)]
    argv += ["--seed", str(args.seed), "--output", prefix,
             "--manifest", manifest_path]
    parameters = {
        "players_N": args.players, "initial_money_per_agent": args.initial,
        "delta_m": args.delta_m, "steps": args.steps, "seed": args.seed,
        "histogram_bins": args.bins, "trace_stride": args.trace_stride,
    }
    _write_manifest(manifest_path, "exchange", argv, parameters, outputs)
    return 0


def _cmd_consumer(args: argparse.Namespace) -> int:
    rent = _int_list(args.rent_cell, "--rent-cell")
    if len(rent) != 2:
        raise UsageError("entrosim: --rent-cell expects x,y")
    snapshot_steps = _int_list(args.snapshot_steps, "--snapshot-steps")
    config = ConsumerConfig(
        price_levels=args.price_levels,
        good_levels=args.good_levels,
        tolerance_m=args.tolerance,
        radius_r=args.radius,
        steps=args.steps,
        seed=_check_seed(args.seed),
        initial_rent_cell=rent,
        gibbs_delta_m=args.delta_m,
        gibbs_initial_money=args.initial_money,
        density=args.density,
        type_split=args.split,
        snapshot_steps=snapshot_steps,
        boundary=Boundary2D(args.boundary),
    )
    result = run_consumer(config)

    prefix = args.output
    manifest_path = args.manifest or f"{prefix}-manifest.json"
    trace_rows = [
        (step, [s, u], entropy)
        for (step, entropy), (s, u) in zip(result.trace.samples,
                                           result.counts_per_step)
    ]
    outputs = [
        _emit(f"{prefix}-trace.csv",
              format_labeled_trace_csv(["satisfied", "unsatisfied"], trace_rows)),
    ]
    for step, grid in result.snapshots:
        outputs.append(_emit(f"{prefix}-step{step:04d}.ppm", grid_to_ppm(grid)))

    argv = ["consumer", "--price-levels", str(args.price_levels),
            "--good-levels", str(args.good_levels),
            "--tolerance", str(args.tolerance), "--radius", str(args.radius),
            "--steps", str(args.steps), "--density", repr(args.density),
            "--split", repr(args.split), "--delta-m", repr(args.delta_m),
            "--initial-money", repr(args.initial_money),
            "--rent-cell", ",".join(str(v) for v in rent),
            "--snapshot-steps", ",".join(str(v) for v in snapshot_steps),
            "--boundary", args.boundary, "--seed", str(args.seed),
            "--output", prefix, "--manifest", manifest_path]
    parameters = {
        "price_levels": args.price_levels, "good_levels": args.good_levels,
        "tolerance_m": args.tolerance, "radius_r": args.radius,
        "steps": args.steps, "seed": args.seed,
        "initial_rent_cell": list(rent), "gibbs_delta_m": args.delta_m,
        "gibbs_initial_money": args.initial_money, "density": args.density,
        "type_split": args.split, "snapshot_steps": list(snapshot_steps),
        "boundary": args.boundary,
    }
    _write_manifest(manifest_path, "consumer", argv, parameters, outputs)
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        with open(args.manifest, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise DataError(f"cannot read manifest {args.manifest}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"manifest {args.manifest} is not valid JSON: {exc}") from exc
    argv = payload.get("argv")
    if not isinstance(argv, list) or not all(isinstance(t, str) for t in argv):
        raise DataError(f"manifest {args.manifest} has no usable argv list")
    return dispatch(argv)


_HANDLERS = {
    "macro": _cmd_macro,
    "ca1d": _cmd_ca1d,
    "schelling": _cmd_schelling,
    "exchange": _cmd_exchange,
    "consumer": _cmd_consumer,
    "replay": _cmd_replay,
}


# ------------------------------------------------------------ dispatching


def _expand_config_file(argv: list[str]) -> list[str]:
    """Insert key=value file entries as flags right after the subcommand.

    Explicit command-line flags win because argparse keeps the last
    occurrence of a repeated flag.
    """
    if "--config" not in argv:
        return argv
    position = argv.index("--config")
    if position + 1 >= len(argv):
        raise UsageError("entrosim: --config expects a file path")
    path = argv[position + 1]
    rest = argv[:position] + argv[position + 2:]
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.read().split("\n")
    except OSError as exc:
        raise DataError(f"cannot read config file {path}: {exc}") from exc
    flags: list[str] = []
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise DataError(f"{path}:{number}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        flags += ["--" + key.strip().replace("_", "-"), value.strip()]
    if not rest:
        raise UsageError("entrosim: --config requires a subcommand")
    return [rest[0], *flags, *rest[1:]]


def _fresh_seed() -> int:
    return int.from_bytes(os.urandom(8), "big")


def _sweep_worker(payload: tuple[str, dict]) -> int:
    subcommand, namespace = payload
    return _guarded(subcommand, argparse.Namespace(**namespace))


def _run_sweep(subcommand: str, args: argparse.Namespace) -> int:
    if args.sweep < 1:
        raise UsageError("entrosim: --sweep must be positive")
    if args.jobs < 1:
        raise UsageError("entrosim: --jobs must be positive")
    if subcommand == "ca1d" and args.seed_pattern != "random":
        raise UsageError("entrosim: --sweep on ca1d requires --seed-pattern random")
    base = args.seed if args.seed is not None else _fresh_seed()
    if args.seed is None:
        print(f"seed: {base}")
    children = []
    for i in range(args.sweep):
        child = copy.copy(args)
        child.sweep = None
        child.jobs = 1
        child.seed = (base + i) % 2**64
        child.output = f"{args.output}-s{child.seed}"
        child.manifest = None
        children.append(child)
    if args.jobs == 1:
        codes = [_guarded(subcommand, child) for child in children]
    else:
        payloads = [(subcommand, vars(child)) for child in children]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            codes = list(pool.map(_sweep_worker, payloads))
    return max(codes, default=0)


def _guarded(subcommand: str, args: argparse.Namespace) -> int:
    """Run a handler, mapping stray config ValueErrors to usage errors."""
    try:
        return _HANDLERS[subcommand](args)
    except (UsageError, DataError):
        raise
    except ValueError as exc:
        raise UsageError(f"entrosim {subcommand}: {exc}") from exc


def dispatch(argv: Sequence[str]) -> int:
    """Parse and run one invocation; returns the process exit code."""
    try:
        expanded = _expand_config_file(list(argv))
        args = _build_parser().parse_args(expanded)
        subcommand = args.subcommand
        if getattr(args, "sweep", None) is not None:
            return _run_sweep(subcommand, args)
        if getattr(args, "seed", "absent") is None:
            needs_seed = subcommand != "ca1d" or args.seed_pattern == "random"
            if needs_seed:
                args.seed = _fresh_seed()
                print(f"seed: {args.seed}")
        return _guarded(subcommand, args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"entrosim: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"entrosim: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help / --version
        return int(exc.code) if exc.code else 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
