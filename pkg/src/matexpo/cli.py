"""Command-line interface.

Subcommands: ``bench`` (sweep and emit table/CSV/plot), ``verify`` (oracle
comparison for one grid point), ``simulate`` (traffic report and optional
barrier-race diagnosis for one launch).

Exit codes: 0 success, 1 validation error (including bad usage), 2 runtime
failure, 3 verification above tolerance.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from typing import Optional, Sequence

from .bench import (
    BenchConfig,
    emit_csv,
    emit_plot,
    emit_table,
    make_backend,
    run_benchmark,
)
from .dtypes import DType
from .expo import Strategy, exponentiate, naive_backend, repeated_exponentiate
from .kernelsim import Schedule, detect_barrier_race, simulate_tiled_matmul
from .linalg import compare, random_matrix
from .tiles import TileConfig
from .tolerances import oracle_tol


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated integer list")


def _str_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _tile_from_args(args) -> TileConfig:
    return TileConfig.parse_shape(
        args.tile,
        vector_width=args.vector_width,
        unroll_factor=args.unroll,
        experimental=getattr(args, "experimental_tile", False),
    )


def _add_tile_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tile", default="16x16", help="tile shape RxC (default 16x16)")
    parser.add_argument("--vector-width", type=int, default=1, choices=(1, 4))
    parser.add_argument("--unroll", type=int, default=1, choices=(1, 4, 8, 16))
    parser.add_argument(
        "--experimental-tile", action="store_true",
        help="allow tile shapes outside the supported menu",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matexpo",
        description="Matrix exponentiation benchmarks and work-group kernel simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="sweep sizes x powers x strategies x backends")
    bench.add_argument("--sizes", type=_int_list, required=True)
    bench.add_argument("--powers", type=_int_list, required=True)
    bench.add_argument("--strategies", type=_str_list, default=["repeated", "squared"])
    bench.add_argument(
        "--backend", dest="backends", type=_str_list, default=["naive", "tiled"],
        help="comma-separated backend names (naive, tiled, simulated)",
    )
    _add_tile_args(bench)
    bench.add_argument("--dtype", default="f32", choices=("f32", "f64"))
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--oracle-cap", type=int, default=256)
    bench.add_argument("--parallel-verify", action="store_true")
    bench.add_argument("--csv", help="CSV output path, or - for stdout")
    bench.add_argument("--table", help="text table output path, or - for stdout")
    bench.add_argument("--plot", help="SVG output path (per-size suffix when sweeping)")
    bench.add_argument("--log-time-axis", action="store_true")
    bench.set_defaults(func=cmd_bench)

    verify = sub.add_parser("verify", help="oracle comparison for one grid point")
    verify.add_argument("--size", type=int, required=True)
    verify.add_argument("--power", type=int, required=True)
    verify.add_argument("--strategy", default="squared", choices=("repeated", "squared"))
    verify.add_argument("--backend", default="tiled", choices=("naive", "tiled", "simulated"))
    _add_tile_args(verify)
    verify.add_argument("--dtype", default="f64", choices=("f32", "f64"))
    verify.add_argument("--seed", type=int, default=42)
    verify.set_defaults(func=cmd_verify)

    simulate = sub.add_parser("simulate", help="traffic report for one tiled launch")
    simulate.add_argument("--size", type=int, required=True)
    _add_tile_args(simulate)
    simulate.add_argument("--dtype", default="f32", choices=("f32", "f64"))
    simulate.add_argument("--seed", type=int, default=2024)
    simulate.add_argument(
        "--schedule", default="row_major",
        help="row_major, reversed, or shuffle:SEED (default row_major)",
    )
    simulate.add_argument("--run-width", type=int, default=16)
    simulate.add_argument(
        "--drop-barriers", action="store_true",
        help="also run the barrier-race diagnosis with barriers removed",
    )
    simulate.add_argument("--format", default="kv", choices=("kv", "csv"))
    simulate.set_defaults(func=cmd_simulate)

    return parser


def cmd_bench(args) -> int:
    backends = list(args.backends)
    if args.table and "naive" not in backends:
        # The comparison table needs the sequential baseline row.
        backends.append("naive")
    config = BenchConfig(
        sizes=args.sizes,
        powers=args.powers,
        strategies=[Strategy.parse(s) for s in args.strategies],
        backends=backends,
        tile=_tile_from_args(args),
        dtype=DType.parse(args.dtype),
        seed=args.seed,
        repetitions=args.reps,
        oracle_cap=args.oracle_cap,
        parallel_verify=args.parallel_verify,
    )
    records = run_benchmark(config)
    if args.csv:
        with _open_out(args.csv) as fh:
            emit_csv(records, fh)
    if args.table:
        texts = []
        for size in sorted({r.size for r in records}):
            texts.append(emit_table([r for r in records if r.size == size]))
        with _open_out(args.table) as fh:
            fh.write("\n".join(texts))
    if args.plot:
        sizes = sorted({r.size for r in records})
        for size in sizes:
            path = args.plot
            if len(sizes) > 1:
                stem, dot, ext = args.plot.rpartition(".")
                path = f"{stem}-{size}{dot}{ext}" if dot else f"{args.plot}-{size}"
            emit_plot(
                [r for r in records if r.size == size], path,
                log_time_axis=args.log_time_axis,
            )
    if not (args.csv or args.table or args.plot):
        emit_csv(records, sys.stdout)
    return 0


def cmd_verify(args) -> int:
    dtype = DType.parse(args.dtype)
    base = random_matrix(args.size, dtype, args.seed)
    backend = make_backend(args.backend, _tile_from_args(args))
    strategy = Strategy.parse(args.strategy)
    if strategy is Strategy.REPEATED:
        result = repeated_exponentiate(base, args.power, backend)
    else:
        result = exponentiate(base, args.power, backend)
    oracle = repeated_exponentiate(base.astype(DType.F64), args.power, naive_backend())
    metrics = compare(result.astype(DType.F64), oracle)
    tol = oracle_tol(args.power, args.size, dtype)
    ok = metrics.max_rel <= tol
    print(f"size={args.size}")
    print(f"power={args.power}")
    print(f"strategy={strategy.value}")
    print(f"backend={backend.name}")
    print(f"max_abs_err={metrics.max_abs!r}")
    print(f"max_rel_err={metrics.max_rel!r}")
    print(f"tolerance={tol!r}")
    print(f"verdict={'PASS' if ok else 'FAIL'}")
    return 0 if ok else 3


def cmd_simulate(args) -> int:
    dtype = DType.parse(args.dtype)
    cfg = _tile_from_args(args)
    schedule = Schedule.parse(args.schedule)
    a = random_matrix(args.size, dtype, args.seed)
    b = random_matrix(args.size, dtype, args.seed + 1)
    _, report = simulate_tiled_matmul(a, b, cfg, schedule=schedule, run_width=args.run_width)
    if args.format == "csv":
        print(report.csv_header())
        print(report.to_csv_row())
    else:
        sys.stdout.write(report.to_kv_text())
    if args.drop_barriers:
        verdict = detect_barrier_race(cfg, args.size, drop_barriers=True, dtype=dtype,
                                      seed=args.seed)
        print(f"verdict={verdict.value}")
        return 0
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold that into the validation code.
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
