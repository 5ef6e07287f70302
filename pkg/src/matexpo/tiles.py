"""Tile configuration, local-memory budget math, and launch geometry.

A tile is the block of the output matrix computed by one work-group, with
one work-item per output element.  The multiply walks the shared dimension
in phases of depth ``tile_cols``; per phase the group stages an A block of
``tile_rows x tile_cols`` and a B block of ``tile_cols x tile_cols`` into
local memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dtypes import DType
from .errors import LaunchError, LocalMemoryError, TilingError

# Tile shapes the engine supports out of the box; anything else must be
# flagged experimental.
TILE_MENU: tuple[tuple[int, int], ...] = (
    (4, 4),
    (4, 8),
    (8, 8),
    (16, 8),
    (8, 16),
    (16, 16),
)

VECTOR_WIDTHS = (1, 4)
UNROLL_FACTORS = (1, 4, 8, 16)

DEFAULT_LOCAL_MEM_BUDGET = 16 * 1024
DEFAULT_MAX_WORK_GROUP = 1024


@dataclass(frozen=True)
class TileConfig:
    """Shape and codegen hints for the tiled multiply.

    ``unroll_factor`` is a hint only: it is carried through to benchmark
    output so configurations stay comparable, but it never changes results
    or access counts.
    """

    tile_rows: int = 16
    tile_cols: int = 16
    vector_width: int = 1
    unroll_factor: int = 1
    local_mem_budget_bytes: int = DEFAULT_LOCAL_MEM_BUDGET
    experimental: bool = False

    def __post_init__(self):
        if self.tile_rows < 1 or self.tile_cols < 1:
            raise TilingError(f"tile dimensions must be positive, got {self.shape}")
        if not self.experimental and self.shape not in TILE_MENU:
            raise TilingError(
                f"tile {self.tile_rows}x{self.tile_cols} is not on the supported menu "
                f"{TILE_MENU}; pass experimental=True to use it anyway"
            )
        if self.vector_width not in VECTOR_WIDTHS:
            raise TilingError(f"vector_width must be one of {VECTOR_WIDTHS}")
        if self.vector_width == 4 and self.tile_cols % 4 != 0:
            raise TilingError("vector_width 4 needs tile_cols divisible by 4")
        if self.unroll_factor not in UNROLL_FACTORS:
            raise TilingError(f"unroll_factor must be one of {UNROLL_FACTORS}")
        if self.local_mem_budget_bytes < 1:
            raise TilingError("local_mem_budget_bytes must be positive")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.tile_rows, self.tile_cols)

    @property
    def group_size(self) -> int:
        return self.tile_rows * self.tile_cols

    def label(self) -> str:
        """Short id used in backend names and benchmark output."""
        return (
            f"{self.tile_rows}x{self.tile_cols}"
            f"-vw{self.vector_width}-u{self.unroll_factor}"
        )

    @classmethod
    def parse_shape(cls, text: str, **kwargs) -> "TileConfig":
        """Build from an ``RxC`` string such as ``16x16``."""
        parts = text.lower().split("x")
        if len(parts) != 2:
            raise TilingError(f"tile spec {text!r} is not of the form RxC")
        try:
            rows, cols = int(parts[0]), int(parts[1])
        except ValueError:
            raise TilingError(f"tile spec {text!r} is not of the form RxC") from None
        return cls(tile_rows=rows, tile_cols=cols, **kwargs)


def check_budget(cfg: TileConfig, dtype: DType) -> int:
    """Return the planning footprint ``2 * tile_rows * tile_cols * itemsize``.

    This is the conventional two-operand-tiles accounting (exact for square
    tiles).  Raises LocalMemoryError when it exceeds the configured budget.
    The simulator additionally validates its true allocation, which for
    rectangular tiles is ``(tile_rows + tile_cols) * tile_cols * itemsize``.
    """
    footprint = 2 * cfg.tile_rows * cfg.tile_cols * dtype.itemsize
    if footprint > cfg.local_mem_budget_bytes:
        raise LocalMemoryError(footprint, cfg.local_mem_budget_bytes)
    return footprint


def staged_footprint_bytes(cfg: TileConfig, dtype: DType) -> int:
    """Bytes the phased kernel actually stages per group: A block plus B block."""
    elems = cfg.tile_rows * cfg.tile_cols + cfg.tile_cols * cfg.tile_cols
    return elems * dtype.itemsize


def check_divisibility(n: int, cfg: TileConfig) -> None:
    if n % cfg.tile_rows != 0 or n % cfg.tile_cols != 0:
        raise TilingError(
            f"matrix order {n} is not divisible by tile {cfg.tile_rows}x{cfg.tile_cols}"
        )


@dataclass(frozen=True)
class LaunchGeometry:
    """One work-item per output element, grouped by tile shape."""

    global_rows: int
    global_cols: int
    group_rows: int
    group_cols: int
    max_work_group: int = field(default=DEFAULT_MAX_WORK_GROUP)

    def __post_init__(self):
        for v in (self.global_rows, self.global_cols, self.group_rows, self.group_cols):
            if v < 1:
                raise LaunchError("launch dimensions must be positive")
        if self.global_rows % self.group_rows or self.global_cols % self.group_cols:
            raise LaunchError(
                f"global size {self.global_rows}x{self.global_cols} not divisible by "
                f"group {self.group_rows}x{self.group_cols}"
            )
        if self.group_rows * self.group_cols > self.max_work_group:
            raise LaunchError(
                f"work-group size {self.group_rows * self.group_cols} exceeds "
                f"limit {self.max_work_group}"
            )

    @classmethod
    def for_matmul(cls, n: int, cfg: TileConfig, max_work_group: int = DEFAULT_MAX_WORK_GROUP):
        return cls(n, n, cfg.tile_rows, cfg.tile_cols, max_work_group)

    @property
    def groups(self) -> tuple[int, int]:
        return (self.global_rows // self.group_rows, self.global_cols // self.group_cols)
