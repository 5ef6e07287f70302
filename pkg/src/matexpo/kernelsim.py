"""Deterministic simulator of the work-group execution model.

The device program is the phased tiled multiply: one work-group per output
tile, one work-item per output element.  Each phase stages an A block
(tile_rows x tile_cols) and a B block (tile_cols x tile_cols) into local
memory, synchronizes, accumulates tile_cols partial products per item from
local memory, and synchronizes again.  The B block is staged round-robin by
flattened item id; for square tiles every item stages exactly one element of
each block.

Fidelity contract: work-items interleave only at barrier boundaries (each
item runs a barrier-to-barrier segment to completion).  That is coarser than
real hardware but exposes every local-memory ordering hazard the barriers
guard.  With barriers dropped, each work-item runs its whole kernel before
the next one starts, in schedule order, over local memory initialized to
zero; stale values are read as-is, so races corrupt data visibly and are
also caught structurally by the happens-before check (every local read must
find the value its phase staged, not luck of the schedule).

Traffic is counted per element access while the kernel runs.  The closed
forms live in ``predict_traffic`` and are kept independent of the counters
so the two can check each other:

    groups          = (n / tile_rows) * (n / tile_cols)
    phases          = n / tile_cols
    global_loads    = groups * phases * (tile_rows + tile_cols) * tile_cols
    global_stores   = n^2
    local_stores    = global_loads            (one local store per staged load)
    local_loads     = 2 * n^3                 (two local reads per multiply-add)
    barriers        = 2 * groups * phases     (two per group per phase)

For a square tile of edge T, global_loads reduces to 2 n^3 / T.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .dtypes import DType
from .errors import LocalMemoryError, ShapeError
from .linalg import Matrix, random_matrix, splitmix64
from .tiles import (
    LaunchGeometry,
    TileConfig,
    check_budget,
    check_divisibility,
    staged_footprint_bytes,
)

DEFAULT_RUN_WIDTH = 16  # consecutive work-items considered per coalescing run


# --- schedules ---------------------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    """Order in which work-items of a group run between barriers."""

    kind: str  # "row_major" | "reversed" | "shuffle"
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("row_major", "reversed", "shuffle"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.kind == "shuffle" and self.seed is None:
            raise ValueError("shuffle schedule needs a seed")

    def order(self, size: int) -> np.ndarray:
        ids = np.arange(size)
        if self.kind == "row_major":
            return ids
        if self.kind == "reversed":
            return ids[::-1]
        keys = splitmix64(self.seed, size)
        return np.argsort(keys, kind="stable")

    @classmethod
    def parse(cls, text: str) -> "Schedule":
        t = text.strip().lower()
        if t in ("row_major", "rowmajor"):
            return ROW_MAJOR
        if t == "reversed":
            return REVERSED
        if t.startswith("shuffle:"):
            return cls("shuffle", int(t.split(":", 1)[1]))
        raise ValueError(
            f"unknown schedule {text!r}; expected row_major, reversed, or shuffle:SEED"
        )

    def __str__(self):
        return self.kind if self.seed is None else f"{self.kind}:{self.seed}"


ROW_MAJOR = Schedule("row_major")
REVERSED = Schedule("reversed")


def shuffle_schedule(seed: int) -> Schedule:
    return Schedule("shuffle", seed)


def default_schedules() -> tuple[Schedule, ...]:
    """The seven schedules used for schedule-independence checks."""
    return (ROW_MAJOR, REVERSED) + tuple(shuffle_schedule(s) for s in range(5))


# --- reports -----------------------------------------------------------------

class RaceVerdict(enum.Enum):
    CLEAN = "CLEAN"
    RACE_DETECTED = "RACE_DETECTED"


@dataclass(frozen=True)
class CoalescingReport:
    coalesced: bool
    worst_stride_elements: int
    run_width: int


@dataclass(frozen=True)
class TrafficReport:
    """Access counts and coalescing verdict from one simulated launch.

    Field names are a stable interface (key=value and CSV serialization).
    """

    global_loads: int
    global_stores: int
    local_loads: int
    local_stores: int
    barriers_executed: int
    coalesced: bool
    worst_stride_elements: int

    FIELDS = (
        "global_loads",
        "global_stores",
        "local_loads",
        "local_stores",
        "barriers_executed",
        "coalesced",
        "worst_stride_elements",
    )

    def _values(self):
        for name in self.FIELDS:
            value = getattr(self, name)
            yield name, ("true" if value else "false") if isinstance(value, bool) else str(value)

    def to_kv_text(self) -> str:
        return "\n".join(f"{k}={v}" for k, v in self._values()) + "\n"

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(cls.FIELDS)

    def to_csv_row(self) -> str:
        return ",".join(v for _, v in self._values())

    @classmethod
    def from_kv_text(cls, text: str) -> "TrafficReport":
        pairs = {}
        for line in text.strip().splitlines():
            key, _, value = line.partition("=")
            pairs[key.strip()] = value.strip()
        missing = set(cls.FIELDS) - set(pairs)
        if missing:
            raise ValueError(f"missing TrafficReport fields: {sorted(missing)}")
        return cls(
            global_loads=int(pairs["global_loads"]),
            global_stores=int(pairs["global_stores"]),
            local_loads=int(pairs["local_loads"]),
            local_stores=int(pairs["local_stores"]),
            barriers_executed=int(pairs["barriers_executed"]),
            coalesced=pairs["coalesced"] == "true",
            worst_stride_elements=int(pairs["worst_stride_elements"]),
        )


class _Counts:
    __slots__ = ("global_loads", "global_stores", "local_loads", "local_stores", "barriers")

    def __init__(self):
        self.global_loads = 0
        self.global_stores = 0
        self.local_loads = 0
        self.local_stores = 0
        self.barriers = 0

    def report(self, coal: CoalescingReport) -> TrafficReport:
        return TrafficReport(
            global_loads=self.global_loads,
            global_stores=self.global_stores,
            local_loads=self.local_loads,
            local_stores=self.local_stores,
            barriers_executed=self.barriers,
            coalesced=coal.coalesced,
            worst_stride_elements=coal.worst_stride_elements,
        )


# --- coalescing --------------------------------------------------------------

def _site_addresses(n: int, cfg: TileConfig, staging: str) -> list[tuple[str, np.ndarray]]:
    """Global element addresses per access site, for the group at the origin
    in its first phase, indexed by consecutive participating flat item id.
    The pattern is translation-invariant across groups and phases, so one
    instance characterizes every site.
    """
    rows, cols = cfg.shape
    group = rows * cols
    t = np.arange(group)
    r, c = t // cols, t % cols
    if staging == "row_major":
        a_addrs = r * n + c
    elif staging == "column_strided":
        a_addrs = (t % rows) * n + (t // rows)
    else:
        raise ValueError(f"unknown staging pattern {staging!r}")
    sites = [("a_stage", a_addrs)]
    cells = np.arange(cols * cols)
    for q in range(math.ceil(cells.size / group)):
        chunk = cells[q * group:(q + 1) * group]
        sites.append((f"b_stage_round{q}", (chunk // cols) * n + chunk % cols))
    sites.append(("c_store", r * n + c))
    return sites


def _stride_analysis(
    sites: Sequence[tuple[str, np.ndarray]], run_width: int
) -> tuple[bool, int]:
    worst = 0
    coalesced = True
    for _, addrs in sites:
        for start in range(0, len(addrs), run_width):
            run = addrs[start:start + run_width].astype(np.int64)
            if run.size < 2:
                continue
            stride = int(np.abs(np.diff(run)).max())
            worst = max(worst, stride)
            if stride > 1:
                coalesced = False
    return coalesced, worst


def analyze_coalescing(
    n: int,
    cfg: TileConfig,
    run_width: int = DEFAULT_RUN_WIDTH,
    staging: str = "row_major",
) -> CoalescingReport:
    """Stride analysis of every global access site across runs of
    ``run_width`` consecutive work-items (by flattened local id).

    ``staging="column_strided"`` swaps in a deliberately transposed A-block
    staging pattern, useful as a negative fixture.
    """
    check_divisibility(n, cfg)
    if run_width < 1:
        raise ValueError("run_width must be >= 1")
    coalesced, worst = _stride_analysis(_site_addresses(n, cfg, staging), run_width)
    return CoalescingReport(coalesced, worst, run_width)


# --- closed-form predictions ---------------------------------------------------

def predict_traffic(
    n: int, cfg: TileConfig, run_width: int = DEFAULT_RUN_WIDTH
) -> TrafficReport:
    """Closed-form TrafficReport for the phased tiled kernel (see module
    docstring for the formulas).  Must agree exactly with the counters of
    ``simulate_tiled_matmul``; the counts here come from algebra, never from
    running the kernel.
    """
    check_divisibility(n, cfg)
    rows, cols = cfg.shape
    groups = (n // rows) * (n // cols)
    phases = n // cols
    staged = rows * cols + cols * cols
    coal = analyze_coalescing(n, cfg, run_width)
    return TrafficReport(
        global_loads=groups * phases * staged,
        global_stores=n * n,
        local_loads=2 * n ** 3,
        local_stores=groups * phases * staged,
        barriers_executed=2 * groups * phases,
        coalesced=coal.coalesced,
        worst_stride_elements=coal.worst_stride_elements,
    )


def unblocked_global_loads(n: int) -> int:
    """Global loads of the reference unblocked kernel: 2 n^3."""
    return 2 * n ** 3


# --- simulation --------------------------------------------------------------

def _validate_launch(a: Matrix, b: Matrix, cfg: TileConfig) -> None:
    if a.n != b.n or a.dtype is not b.dtype:
        raise ShapeError("operands must share order and dtype")
    check_divisibility(a.n, cfg)
    check_budget(cfg, a.dtype)
    actual = staged_footprint_bytes(cfg, a.dtype)
    if actual > cfg.local_mem_budget_bytes:
        raise LocalMemoryError(actual, cfg.local_mem_budget_bytes)
    LaunchGeometry.for_matmul(a.n, cfg)


def simulate_tiled_matmul(
    a: Matrix,
    b: Matrix,
    cfg: TileConfig,
    schedule: Schedule = ROW_MAJOR,
    run_width: int = DEFAULT_RUN_WIDTH,
) -> tuple[Matrix, TrafficReport]:
    """Run the tiled device program and count its memory traffic.

    With barriers in place the result is schedule-independent and, at vector
    width 1, bitwise equal to ``matmul_naive``.  The row-major schedule runs
    on a vectorized segment-at-a-time path; any other schedule runs the
    per-work-item interpreter, which produces identical results and counts.
    """
    _validate_launch(a, b, cfg)
    counts = _Counts()
    if schedule == ROW_MAJOR:
        out = _run_fast(a.array, b.array, a.n, cfg, counts)
    else:
        out, violations = _run_ordered(a.array, b.array, a.n, cfg, schedule, True, counts)
        if violations:  # structurally impossible with barriers in place
            raise AssertionError("happens-before violation in a barrier-intact run")
    coal = analyze_coalescing(a.n, cfg, run_width)
    return Matrix(out, copy=False), counts.report(coal)


def _run_fast(av: np.ndarray, bv: np.ndarray, n: int, cfg: TileConfig, counts: _Counts) -> np.ndarray:
    """Vectorized execution, one barrier-to-barrier segment at a time."""
    rows, cols = cfg.shape
    group = rows * cols
    phases = n // cols
    b_cells = cols * cols
    vec = cfg.vector_width
    out = np.empty((n, n), dtype=av.dtype)
    local_a = np.empty((rows, cols), dtype=av.dtype)
    local_b = np.empty((cols, cols), dtype=av.dtype)
    for bi in range(n // rows):
        rslice = slice(bi * rows, (bi + 1) * rows)
        for bj in range(n // cols):
            cslice = slice(bj * cols, (bj + 1) * cols)
            if vec == 1:
                acc = np.zeros((rows, cols), dtype=av.dtype)
            else:
                lanes = np.zeros((rows, cols, 4), dtype=av.dtype)
            for p in range(phases):
                k0 = p * cols
                local_a[:, :] = av[rslice, k0:k0 + cols]
                local_b[:, :] = bv[k0:k0 + cols, cslice]
                counts.global_loads += group + b_cells
                counts.local_stores += group + b_cells
                counts.barriers += 1
                if vec == 1:
                    for kk in range(cols):
                        acc += local_a[:, kk, None] * local_b[None, kk, :]
                else:
                    for kk in range(cols):
                        lanes[:, :, kk & 3] += local_a[:, kk, None] * local_b[None, kk, :]
                counts.local_loads += group * 2 * cols
                counts.barriers += 1
            if vec != 1:
                acc = ((lanes[:, :, 0] + lanes[:, :, 1]) + lanes[:, :, 2]) + lanes[:, :, 3]
            out[rslice, cslice] = acc
            counts.global_stores += group
    return out


def _run_ordered(
    av: np.ndarray,
    bv: np.ndarray,
    n: int,
    cfg: TileConfig,
    schedule: Schedule,
    barriers: bool,
    counts: _Counts,
) -> tuple[np.ndarray, int]:
    """Per-work-item interpreter honoring a schedule.

    With ``barriers`` the group advances one segment at a time, items in
    schedule order within each segment.  Without, each item runs its whole
    kernel before the next starts; local memory starts zeroed and stale
    values are read as-is.  Returns the output plus the number of
    happens-before violations (local reads whose phase staging had not yet
    run).
    """
    rows, cols = cfg.shape
    group = rows * cols
    phases = n // cols
    b_cells = cols * cols
    vec = cfg.vector_width
    dtype = DType.of(av)
    # Python floats are IEEE doubles, so f64 runs on plain floats; f32 runs
    # on numpy scalars to keep per-operation rounding exact.
    if dtype is DType.F64:
        a_rows = av.tolist()
        b_rows = bv.tolist()
        zero = 0.0
    else:
        a_rows = [row for row in av]
        b_rows = [row for row in bv]
        zero = av.dtype.type(0.0)
    order = [int(t) for t in schedule.order(group)]
    out = np.empty((n, n), dtype=av.dtype)
    violations = 0

    for bi in range(n // rows):
        row0 = bi * rows
        for bj in range(n // cols):
            col0 = bj * cols
            local_a = [zero] * group
            local_b = [zero] * b_cells
            ver_a = [-1] * group
            ver_b = [-1] * b_cells
            if vec == 1:
                accs = [zero] * group
            else:
                accs = [[zero] * 4 for _ in range(group)]

            def stage(t: int, p: int, k0: int):
                r, c = divmod(t, cols)
                local_a[t] = a_rows[row0 + r][k0 + c]
                ver_a[t] = p
                counts.global_loads += 1
                counts.local_stores += 1
                s = t
                while s < b_cells:
                    local_b[s] = b_rows[k0 + s // cols][col0 + s % cols]
                    ver_b[s] = p
                    counts.global_loads += 1
                    counts.local_stores += 1
                    s += group

            def accumulate(t: int, p: int):
                nonlocal violations
                r, c = divmod(t, cols)
                base = r * cols
                if vec == 1:
                    acc = accs[t]
                    for kk in range(cols):
                        ia = base + kk
                        ib = kk * cols + c
                        if ver_a[ia] != p:
                            violations += 1
                        if ver_b[ib] != p:
                            violations += 1
                        acc = acc + local_a[ia] * local_b[ib]
                    accs[t] = acc
                else:
                    lanes = accs[t]
                    for kk in range(cols):
                        ia = base + kk
                        ib = kk * cols + c
                        if ver_a[ia] != p:
                            violations += 1
                        if ver_b[ib] != p:
                            violations += 1
                        lane = kk & 3
                        lanes[lane] = lanes[lane] + local_a[ia] * local_b[ib]
                counts.local_loads += 2 * cols

            def store(t: int):
                r, c = divmod(t, cols)
                if vec == 1:
                    out[row0 + r, col0 + c] = accs[t]
                else:
                    lanes = accs[t]
                    out[row0 + r, col0 + c] = ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3]
                counts.global_stores += 1

            if barriers:
                for p in range(phases):
                    k0 = p * cols
                    for t in order:
                        stage(t, p, k0)
                    counts.barriers += 1
                    for t in order:
                        accumulate(t, p)
                    counts.barriers += 1
                for t in order:
                    store(t)
            else:
                for t in order:
                    for p in range(phases):
                        stage(t, p, p * cols)
                        accumulate(t, p)
                    store(t)
    return out, violations


def simulate_naive_matmul(
    a: Matrix, b: Matrix, run_width: int = DEFAULT_RUN_WIDTH
) -> tuple[Matrix, TrafficReport]:
    """Reference unblocked kernel: every work-item reads its full A row and
    B column from global memory.  Serves as the traffic baseline that tiling
    divides by the tile edge.
    """
    if a.n != b.n or a.dtype is not b.dtype:
        raise ShapeError("operands must share order and dtype")
    n = a.n
    av, bv = a.array, b.array
    counts = _Counts()
    c = np.zeros((n, n), dtype=av.dtype)
    for k in range(n):
        c += av[:, k, None] * bv[None, k, :]
        counts.global_loads += 2 * n * n  # every item touches a[i,k] and b[k,j]
    counts.global_stores += n * n
    items = np.arange(n * n)
    i, j = items // n, items % n
    sites = [("a_read", i * n), ("b_read", j), ("c_store", i * n + j)]
    coalesced, worst = _stride_analysis(sites, run_width)
    return Matrix(c, copy=False), counts.report(CoalescingReport(coalesced, worst, run_width))


# --- race detection ------------------------------------------------------------

def detect_barrier_race(
    cfg: TileConfig,
    n: int,
    drop_barriers: bool,
    dtype: DType = DType.F64,
    seed: int = 2024,
    schedules: Optional[Sequence[Schedule]] = None,
    return_details: bool = False,
) -> Union[RaceVerdict, tuple[RaceVerdict, dict]]:
    """Run the kernel under several schedules and audit local-memory ordering.

    CLEAN requires bitwise-identical results across every schedule and zero
    happens-before violations in each of them; either failure mode yields
    RACE_DETECTED.  The default seven schedules include both directions and
    five shuffles, but the happens-before audit flags a dropped barrier on
    any schedule that runs a reader before its writer, so detection never
    depends on shuffle luck.
    """
    a = random_matrix(n, dtype, seed)
    b = random_matrix(n, dtype, seed + 1)
    scheds = tuple(schedules) if schedules is not None else default_schedules()
    if len(scheds) < 2:
        raise ValueError("need at least two schedules")
    results = []
    violation_counts = []
    for sched in scheds:
        counts = _Counts()
        out, violations = _run_ordered(
            a.array, b.array, n, cfg, sched, not drop_barriers, counts
        )
        results.append(out)
        violation_counts.append(violations)
    agree = all(np.array_equal(results[0], r) for r in results[1:])
    clean = agree and not any(violation_counts)
    verdict = RaceVerdict.CLEAN if clean else RaceVerdict.RACE_DETECTED
    if return_details:
        return verdict, {
            "results_agree": agree,
            "violations": violation_counts,
            "schedules": [str(s) for s in scheds],
        }
    return verdict
