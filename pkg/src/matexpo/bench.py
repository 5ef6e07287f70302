"""Benchmark harness: sweep sizes x powers x strategies x backends, record
wall time, multiply/transfer counts, and oracle error, and emit tables, CSV,
and SVG bar charts.

Wall-clock values are machine-bound and never asserted against; the stable
outputs are the operation counts and the table/CSV/plot structure.
"""

from __future__ import annotations

import logging
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, TextIO, Union

import numpy as np

from .dtypes import DType
from .errors import ConfigError, PlotError, TableError
from .expo import (
    Backend,
    CountingBackend,
    Strategy,
    count_transfers,
    exponentiate,
    naive_backend,
    plan_exponentiation,
    repeated_exponentiate,
    tiled_backend,
)
from .kernelsim import simulate_tiled_matmul
from .linalg import Matrix, compare, random_matrix
from .tiles import TileConfig, check_budget, check_divisibility

log = logging.getLogger("matexpo.bench")

BACKEND_NAMES = ("naive", "tiled", "simulated")

CSV_HEADER = "size,power,strategy,backend,seconds,multiply_count,transfer_count,max_rel_err,nonfinite"

TABLE_ROW_LABELS = (
    "Naïve GPU (In Sec)",
    "Sequential CPU (In Sec)",
    "Naïve Speed UP",
    "Our Approach (In Sec)",
    "Our Approach vs Naïve GPU",
)


def make_backend(name: str, tile: Optional[TileConfig] = None) -> Backend:
    """Instantiate a registered backend; tiled variants get the tile config
    baked into their recorded name so configurations stay comparable."""
    cfg = tile or TileConfig()
    if name == "naive":
        return naive_backend()
    if name == "tiled":
        return tiled_backend(cfg)
    if name == "simulated":
        return Backend(
            f"simulated-{cfg.label()}",
            lambda a, b: simulate_tiled_matmul(a, b, cfg)[0],
        )
    raise ConfigError(f"unknown backend {name!r}; expected one of {BACKEND_NAMES}")


@dataclass
class BenchConfig:
    sizes: Sequence[int]
    powers: Sequence[int]
    strategies: Sequence[Strategy] = (Strategy.REPEATED, Strategy.SQUARED)
    backends: Sequence[str] = ("naive", "tiled")
    tile: TileConfig = field(default_factory=TileConfig)
    dtype: DType = DType.F32
    seed: int = 42
    repetitions: int = 5
    oracle_cap: int = 256
    parallel_verify: bool = False


@dataclass(frozen=True)
class BenchmarkRecord:
    """One (backend, size, power, strategy) measurement."""

    size: int
    power: int
    strategy: Strategy
    backend: str
    seconds: float
    multiply_count: int
    transfer_count: int
    max_rel_err: Optional[float]  # None when the oracle was skipped
    nonfinite: bool

    def sort_key(self):
        return (self.size, self.power, self.strategy.value, self.backend)


def validate_config(config: BenchConfig) -> None:
    """Collect every configuration problem before any run starts."""
    problems = []
    if not config.sizes:
        problems.append("sizes must be non-empty")
    if not config.powers:
        problems.append("powers must be non-empty")
    if not config.strategies:
        problems.append("strategies must be non-empty")
    if not config.backends:
        problems.append("backends must be non-empty")
    for n in config.sizes:
        if n < 1:
            problems.append(f"size {n} must be >= 1")
    for p in config.powers:
        if p < 1:
            problems.append(f"power {p} must be >= 1")
    if config.repetitions < 1:
        problems.append("repetitions must be >= 1")
    for name in config.backends:
        if name not in BACKEND_NAMES:
            problems.append(f"unknown backend {name!r}")
    needs_tile = any(name in ("tiled", "simulated") for name in config.backends)
    if needs_tile:
        for n in config.sizes:
            if n >= 1:
                try:
                    check_divisibility(n, config.tile)
                    check_budget(config.tile, config.dtype)
                except Exception as exc:  # noqa: BLE001 - collected, not raised
                    problems.append(str(exc))
    if problems:
        raise ConfigError("; ".join(problems))


_granularity_cache: Optional[float] = None


def timer_granularity() -> float:
    """Smallest positive delta the wall-clock timer resolves, measured once."""
    global _granularity_cache
    if _granularity_cache is None:
        best = float("inf")
        for _ in range(2000):
            t0 = time.perf_counter()
            t1 = time.perf_counter()
            if t1 > t0:
                best = min(best, t1 - t0)
        _granularity_cache = best if math.isfinite(best) else 1e-6
    return _granularity_cache


def measure_median_seconds(fn: Callable[[], object], repetitions: int) -> float:
    """Median per-call wall time over ``repetitions`` timed runs.

    Cells below 100x the timer granularity are auto-scaled: the timed region
    loops the call enough times to clear the threshold and the elapsed time
    is divided back down.
    """
    gran = timer_granularity()
    t0 = time.perf_counter()
    fn()
    single = time.perf_counter() - t0
    inner = 1
    floor = 100.0 * gran
    if single < floor:
        inner = min(int(math.ceil(floor / max(single, gran))), 100_000)
    samples = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn()
        elapsed = time.perf_counter() - t0
        samples.append(max(elapsed, gran) / inner)
    return statistics.median(samples)


def _oracle_result(size: int, power: int, base: Matrix) -> Matrix:
    """F64 naive-repeated reference for one grid point."""
    return repeated_exponentiate(base.astype(DType.F64), power, naive_backend())


def run_benchmark(config: BenchConfig) -> list[BenchmarkRecord]:
    """One record per grid point; failures at a point are logged and the
    rest of the grid continues.  Input generation and oracle verification
    stay outside the timed region.
    """
    validate_config(config)
    records: list[BenchmarkRecord] = []
    for size in config.sizes:
        base = random_matrix(size, config.dtype, config.seed)
        oracles: dict[int, Matrix] = {}
        wanted = [p for p in config.powers if size <= config.oracle_cap]
        if config.parallel_verify and wanted:
            with ThreadPoolExecutor() as pool:
                for power, res in zip(
                    wanted, pool.map(lambda p: _oracle_result(size, p, base), wanted)
                ):
                    oracles[power] = res
        else:
            for power in wanted:
                oracles[power] = _oracle_result(size, power, base)
        for power in config.powers:
            for strategy in config.strategies:
                for backend_name in config.backends:
                    try:
                        records.append(
                            _run_point(config, base, size, power, strategy,
                                       backend_name, oracles.get(power))
                        )
                    except Exception as exc:  # noqa: BLE001 - grid continues
                        log.warning(
                            "grid point size=%d power=%d strategy=%s backend=%s failed: %s",
                            size, power, strategy.value, backend_name, exc,
                        )
    return records


def _run_point(
    config: BenchConfig,
    base: Matrix,
    size: int,
    power: int,
    strategy: Strategy,
    backend_name: str,
    oracle: Optional[Matrix],
) -> BenchmarkRecord:
    backend = make_backend(backend_name, config.tile)
    counting = CountingBackend(backend)
    if strategy is Strategy.REPEATED:
        run = lambda: repeated_exponentiate(base, power, counting)
    else:
        run = lambda: exponentiate(base, power, counting)
    # High powers overflow f32 by design; that outcome is reported through
    # the nonfinite flag rather than per-repetition warnings.
    with np.errstate(over="ignore", invalid="ignore"):
        result = run()
        multiply_count = counting.calls
        seconds = measure_median_seconds(run, config.repetitions)
    plan = plan_exponentiation(power)
    transfer_count = backend.transfer_cost_model(plan, strategy)
    nonfinite = not bool(np.isfinite(result.array).all())
    max_rel_err = None
    if oracle is not None:
        max_rel_err = compare(result.astype(DType.F64), oracle).max_rel
    return BenchmarkRecord(
        size=size,
        power=power,
        strategy=strategy,
        backend=backend.name,
        seconds=seconds,
        multiply_count=multiply_count,
        transfer_count=transfer_count,
        max_rel_err=max_rel_err,
        nonfinite=nonfinite,
    )


# --- CSV -----------------------------------------------------------------------

def emit_csv(records: Sequence[BenchmarkRecord], dest: Union[str, TextIO]) -> None:
    """Write records in deterministic (size, power, strategy, backend) order.
    Floats use shortest round-trip precision; a skipped oracle cell is empty.
    """
    if hasattr(dest, "write"):
        _write_csv(records, dest)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            _write_csv(records, fh)


def _write_csv(records: Sequence[BenchmarkRecord], fh: TextIO) -> None:
    fh.write(CSV_HEADER + "\n")
    for rec in sorted(records, key=BenchmarkRecord.sort_key):
        err = "" if rec.max_rel_err is None else repr(float(rec.max_rel_err))
        fh.write(
            f"{rec.size},{rec.power},{rec.strategy.value},{rec.backend},"
            f"{rec.seconds!r},{rec.multiply_count},{rec.transfer_count},"
            f"{err},{'true' if rec.nonfinite else 'false'}\n"
        )


def read_csv(src: Union[str, TextIO]) -> list[BenchmarkRecord]:
    if hasattr(src, "read"):
        return _read_csv(src)
    with open(src, "r", encoding="utf-8") as fh:
        return _read_csv(fh)


def _read_csv(fh: TextIO) -> list[BenchmarkRecord]:
    header = fh.readline().strip()
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    records = []
    for line in fh:
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 9:
            raise ValueError(f"malformed CSV row {line!r}")
        records.append(
            BenchmarkRecord(
                size=int(parts[0]),
                power=int(parts[1]),
                strategy=Strategy.parse(parts[2]),
                backend=parts[3],
                seconds=float(parts[4]),
                multiply_count=int(parts[5]),
                transfer_count=int(parts[6]),
                max_rel_err=None if parts[7] == "" else float(parts[7]),
                nonfinite=parts[8] == "true",
            )
        )
    return records


# --- table ----------------------------------------------------------------------

def _format_ratio(value: float) -> str:
    """Two-decimal ratio with trailing zeros stripped (4.60 -> 4.6, 5.00 -> 5)."""
    text = f"{value:.2f}"
    return text.rstrip("0").rstrip(".") if "." in text else text


def _format_seconds(value: float) -> str:
    return f"{value:.6g}"


def emit_table(records: Sequence[BenchmarkRecord]) -> str:
    """Render the five-row comparison table for one matrix size.

    Rows: repeated-on-naive is the sequential CPU baseline, repeated on the
    accelerated backend is the naive GPU analogue, squared on the same
    backend is our approach; the two speedup rows are time ratios rounded to
    two decimals.  Records must cover every power for each of those three
    roles, otherwise a TableError lists the missing cells.
    """
    if not records:
        raise TableError("no records to tabulate")
    sizes = sorted({r.size for r in records})
    if len(sizes) != 1:
        raise TableError(f"records span sizes {sizes}; tabulate one size at a time")
    size = sizes[0]
    accel = sorted({r.backend for r in records if r.backend != "naive"})
    if not accel:
        raise TableError("need a non-naive backend for the accelerated rows")
    if len(accel) > 1:
        raise TableError(f"ambiguous accelerated backend: {accel}; filter records first")
    gpu_name = accel[0]
    powers = sorted({r.power for r in records})
    roles = {
        "seq": (Strategy.REPEATED, "naive"),
        "gpu": (Strategy.REPEATED, gpu_name),
        "ours": (Strategy.SQUARED, gpu_name),
    }
    cells: dict[str, dict[int, float]] = {role: {} for role in roles}
    for rec in records:
        for role, (strategy, backend) in roles.items():
            if rec.strategy is strategy and rec.backend == backend:
                cells[role][rec.power] = rec.seconds
    missing = [
        f"{roles[role][0].value}/{roles[role][1]} @ power={p}"
        for role in roles
        for p in powers
        if p not in cells[role]
    ]
    if missing:
        raise TableError("missing cells: " + ", ".join(missing))

    rows = [
        (TABLE_ROW_LABELS[0], [_format_seconds(cells["gpu"][p]) for p in powers]),
        (TABLE_ROW_LABELS[1], [_format_seconds(cells["seq"][p]) for p in powers]),
        (TABLE_ROW_LABELS[2],
         [_format_ratio(cells["seq"][p] / cells["gpu"][p]) for p in powers]),
        (TABLE_ROW_LABELS[3], [_format_seconds(cells["ours"][p]) for p in powers]),
        (TABLE_ROW_LABELS[4],
         [_format_ratio(cells["gpu"][p] / cells["ours"][p]) for p in powers]),
    ]
    label_width = max(len(label) for label, _ in rows)
    col_widths = [
        max(len(str(p)), *(len(vals[i]) for _, vals in rows))
        for i, p in enumerate(powers)
    ]
    lines = [f"Matrix size {size} x {size}"]
    header = " " * label_width + "  " + "  ".join(
        str(p).rjust(w) for p, w in zip(powers, col_widths)
    )
    lines.append(header)
    for label, vals in rows:
        lines.append(
            label.ljust(label_width) + "  "
            + "  ".join(v.rjust(w) for v, w in zip(vals, col_widths))
        )
    return "\n".join(lines) + "\n"


# --- plot -----------------------------------------------------------------------

_SERIES_COLORS = (
    "#4472c4", "#ed7d31", "#a5a5a5", "#ffc000", "#5b9bd5", "#70ad47",
)

_PLOT_HEIGHT = 300.0
_BAR_WIDTH = 16.0
_BAR_GAP = 4.0
_GROUP_GAP = 28.0
_MARGIN_LEFT = 70.0
_MARGIN_TOP = 30.0
_MARGIN_BOTTOM = 60.0


def emit_plot(
    records: Sequence[BenchmarkRecord],
    dest: Union[str, TextIO],
    log_time_axis: bool = False,
) -> None:
    """Grouped bar chart (SVG) of the measured times for one matrix size.

    One group per power, one bar per record, one color per (strategy,
    backend) series.  Bar heights are proportional to seconds on the linear
    axis; the log axis scales by decades above the smallest value.
    """
    if not records:
        raise PlotError("no records to plot")
    sizes = sorted({r.size for r in records})
    if len(sizes) != 1:
        raise PlotError(f"records span sizes {sizes}; plot one size at a time")
    values = [r.seconds for r in records]
    if log_time_axis and any(v <= 0 for v in values):
        raise PlotError("log-scale time axis cannot render zero or negative values")
    if any(v < 0 for v in values):
        raise PlotError("negative time values cannot be plotted")

    powers = sorted({r.power for r in records})
    series = sorted({(r.strategy.value, r.backend) for r in records})
    color_of = {s: _SERIES_COLORS[i % len(_SERIES_COLORS)] for i, s in enumerate(series)}
    vmax = max(values)
    vmin = min(v for v in values if v > 0) if any(v > 0 for v in values) else 1.0

    def bar_height(v: float) -> float:
        if v == 0.0:
            return 0.0
        if log_time_axis:
            span = max(math.log10(vmax / vmin), 1e-9)
            return max((math.log10(v / vmin) / span) * _PLOT_HEIGHT, 1.0)
        return (v / vmax) * _PLOT_HEIGHT

    group_width = len(series) * (_BAR_WIDTH + _BAR_GAP) + _GROUP_GAP
    width = _MARGIN_LEFT + len(powers) * group_width + 140.0  # room for the legend
    height = _MARGIN_TOP + _PLOT_HEIGHT + _MARGIN_BOTTOM
    baseline = _MARGIN_TOP + _PLOT_HEIGHT

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f"<title>size {sizes[0]} exponentiation times "
        f"({'log' if log_time_axis else 'linear'} axis)</title>",
        f'<line x1="{_MARGIN_LEFT}" y1="{baseline}" '
        f'x2="{width - 20:.1f}" y2="{baseline}" stroke="black"/>',
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" '
        f'x2="{_MARGIN_LEFT}" y2="{baseline}" stroke="black"/>',
    ]
    by_key = {(r.power, r.strategy.value, r.backend): r for r in records}
    for gi, power in enumerate(powers):
        gx = _MARGIN_LEFT + _GROUP_GAP / 2 + gi * group_width
        for si, skey in enumerate(series):
            rec = by_key.get((power, *skey))
            if rec is None:
                continue
            h = bar_height(rec.seconds)
            x = gx + si * (_BAR_WIDTH + _BAR_GAP)
            parts.append(
                f'<rect class="bar" data-power="{power}" '
                f'data-series="{skey[0]}/{skey[1]}" data-value="{rec.seconds!r}" '
                f'x="{x:.2f}" y="{baseline - h:.4f}" width="{_BAR_WIDTH}" '
                f'height="{h:.4f}" fill="{color_of[skey]}"/>'
            )
        parts.append(
            f'<text x="{gx + (group_width - _GROUP_GAP) / 2:.1f}" '
            f'y="{baseline + 18:.1f}" font-size="11" text-anchor="middle">{power}</text>'
        )
    parts.append(
        f'<text x="{_MARGIN_LEFT + (len(powers) * group_width) / 2:.1f}" '
        f'y="{height - 14:.1f}" font-size="12" text-anchor="middle">power</text>'
    )
    legend_x = _MARGIN_LEFT + len(powers) * group_width + 16.0
    for si, skey in enumerate(series):
        ly = _MARGIN_TOP + si * 18.0
        parts.append(
            f'<rect x="{legend_x:.1f}" y="{ly:.1f}" width="12" height="12" '
            f'fill="{color_of[skey]}"/>'
        )
        parts.append(
            f'<text x="{legend_x + 16:.1f}" y="{ly + 10:.1f}" '
            f'font-size="11">{skey[0]}/{skey[1]}</text>'
        )
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
