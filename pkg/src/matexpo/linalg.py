"""Dense square matrices and the multiply variants used by the engine.

All multiplies accumulate each output element over the shared dimension in
ascending order, one rounded multiply and one rounded add per term, in the
element dtype.  That makes the naive and tiled (vector width 1) variants
bitwise-identical by construction, which the tests verify.

The vectorized variant (vector width 4) models SIMD accumulation: four lane
partial sums (lane ``l`` takes the terms with ``k % 4 == l``, each lane in
ascending k) added left-to-right at the end.  Reassociation makes it equal
to the naive result only within a roundoff tolerance.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

from .dtypes import DType
from .errors import InvalidDimensionError, InvalidRangeError, ShapeError
from .tiles import TileConfig, check_budget, check_divisibility


class Matrix:
    """Immutable dense square matrix with row-major storage.

    Element (i, j) lives at flat index ``i * n + j``.  The backing array is
    frozen so matrices can be shared freely across threads and backends.
    """

    __slots__ = ("array",)

    def __init__(self, array: np.ndarray, copy: bool = True):
        arr = np.array(array, order="C", copy=True) if copy else array
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ShapeError(f"expected a square 2-D array, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise InvalidDimensionError("matrix order must be >= 1")
        try:
            DType.of(arr)
        except ValueError as exc:
            raise ShapeError(str(exc)) from None
        if not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @property
    def n(self) -> int:
        return self.array.shape[0]

    @property
    def dtype(self) -> DType:
        return DType.of(self.array)

    @property
    def data(self) -> np.ndarray:
        """Row-major flat view of the elements (read-only)."""
        return self.array.reshape(-1)

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[float]], dtype: DType = DType.F64) -> "Matrix":
        return cls(np.array([list(r) for r in rows], dtype=dtype.np))

    def astype(self, dtype: DType) -> "Matrix":
        if dtype is self.dtype:
            return self
        return Matrix(self.array.astype(dtype.np))

    def __repr__(self):
        return f"Matrix(n={self.n}, dtype={self.dtype.value})"


@dataclass(frozen=True)
class ErrorMetrics:
    """Elementwise and Frobenius error of a result against a reference."""

    max_abs: float
    max_rel: float
    frobenius_rel: float

    def __iter__(self):
        return iter((self.max_abs, self.max_rel, self.frobenius_rel))


def _check_pair(a: Matrix, b: Matrix) -> None:
    if a.n != b.n:
        raise ShapeError(f"matrix orders differ: {a.n} vs {b.n}")
    if a.dtype is not b.dtype:
        raise ShapeError(f"matrix dtypes differ: {a.dtype.value} vs {b.dtype.value}")


def identity(n: int, dtype: DType = DType.F64) -> Matrix:
    """The n-by-n multiplicative unit."""
    if n < 1:
        raise InvalidDimensionError(f"matrix order must be >= 1, got {n}")
    return Matrix(np.eye(n, dtype=dtype.np), copy=False)


def zeros(n: int, dtype: DType = DType.F64) -> Matrix:
    if n < 1:
        raise InvalidDimensionError(f"matrix order must be >= 1, got {n}")
    return Matrix(np.zeros((n, n), dtype=dtype.np), copy=False)


# SplitMix64: the fixed, portable generator behind random_matrix.  The k-th
# draw (0-based) mixes the state seed + (k+1) * GOLDEN; each u64 output maps
# to [0, 1) through its top 53 bits.
_SM64_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_SM64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_SM64_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of SplitMix64 seeded with ``seed`` (uint64)."""
    state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = state + idx * _SM64_GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _SM64_MIX1
    z = (z ^ (z >> np.uint64(27))) * _SM64_MIX2
    return z ^ (z >> np.uint64(31))


def random_matrix(
    n: int,
    dtype: DType = DType.F64,
    seed: int = 0,
    lo: float = -0.5,
    hi: float = 0.5,
) -> Matrix:
    """Deterministic uniform matrix in [lo, hi), identical on any platform.

    Elements are drawn row-major from SplitMix64 (see ``splitmix64``), so a
    given (n, dtype, seed, lo, hi) always yields the same matrix.
    """
    if n < 1:
        raise InvalidDimensionError(f"matrix order must be >= 1, got {n}")
    if not (lo < hi):
        raise InvalidRangeError(f"need lo < hi, got [{lo}, {hi})")
    u = (splitmix64(seed, n * n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    vals = (lo + u * (hi - lo)).astype(dtype.np)
    # Narrowing to f32 can round a value up onto hi; pull those back one ulp.
    np_hi = dtype.np(hi)
    vals[vals >= np_hi] = np.nextafter(np_hi, dtype.np(lo))
    return Matrix(vals.reshape(n, n), copy=False)


def matmul_naive(a: Matrix, b: Matrix) -> Matrix:
    """Reference triple-loop product: c[i,j] = sum_k a[i,k] * b[k,j].

    Realized as one rank-1 update per k so every element accumulates in
    ascending k with scalar rounding semantics, bitwise equal to an explicit
    i/j/k loop in the element dtype.
    """
    _check_pair(a, b)
    n = a.n
    av, bv = a.array, b.array
    c = np.zeros((n, n), dtype=av.dtype)
    for k in range(n):
        c += av[:, k, None] * bv[None, k, :]
    return Matrix(c, copy=False)


def matmul_tiled(a: Matrix, b: Matrix, cfg: TileConfig) -> Matrix:
    """Cache-blocked product over ``tile_rows x tile_cols`` output tiles.

    The shared dimension is walked in phases of depth ``tile_cols``; within a
    phase each output element accumulates in ascending k, so the vector-width
    1 result is bitwise equal to ``matmul_naive``.  Vector width 4 uses the
    four-lane accumulation described in the module docstring.
    """
    _check_pair(a, b)
    n = a.n
    check_divisibility(n, cfg)
    check_budget(cfg, a.dtype)
    rows_per_tile, cols_per_tile = cfg.shape
    depth = cfg.tile_cols  # phase depth along k
    av, bv = a.array, b.array
    out = np.empty((n, n), dtype=av.dtype)
    for bi in range(n // rows_per_tile):
        rows = slice(bi * rows_per_tile, (bi + 1) * rows_per_tile)
        for bj in range(n // cols_per_tile):
            cols = slice(bj * cols_per_tile, (bj + 1) * cols_per_tile)
            if cfg.vector_width == 1:
                acc = np.zeros((rows_per_tile, cols_per_tile), dtype=av.dtype)
                for p in range(n // depth):
                    k0 = p * depth
                    a_blk = av[rows, k0:k0 + depth]
                    b_blk = bv[k0:k0 + depth, cols]
                    for kk in range(depth):
                        acc += a_blk[:, kk, None] * b_blk[None, kk, :]
                out[rows, cols] = acc
            else:
                lanes = np.zeros((rows_per_tile, cols_per_tile, 4), dtype=av.dtype)
                for p in range(n // depth):
                    k0 = p * depth
                    a_blk = av[rows, k0:k0 + depth]
                    b_blk = bv[k0:k0 + depth, cols]
                    for kk in range(depth):
                        lanes[:, :, kk & 3] += a_blk[:, kk, None] * b_blk[None, kk, :]
                acc = ((lanes[:, :, 0] + lanes[:, :, 1]) + lanes[:, :, 2]) + lanes[:, :, 3]
                out[rows, cols] = acc
    return Matrix(out, copy=False)


def compare(result: Matrix, reference: Matrix) -> ErrorMetrics:
    """Error metrics of ``result`` against ``reference``.

    ``max_rel`` is max_abs over the largest-magnitude reference element; a
    perfectly matched all-zero reference yields 0, a mismatched one +inf.
    Metrics are computed in float64 regardless of the element dtype.
    """
    _check_pair(result, reference)
    res = result.array.astype(np.float64)
    ref = reference.array.astype(np.float64)
    diff = np.abs(res - ref)
    max_abs = float(diff.max())
    denom = float(np.abs(ref).max())
    if denom == 0.0:
        max_rel = 0.0 if max_abs == 0.0 else float("inf")
    else:
        max_rel = max_abs / denom
    fro_ref = float(np.sqrt(np.sum(ref * ref)))
    fro_diff = float(np.sqrt(np.sum(diff * diff)))
    if fro_ref == 0.0:
        frobenius_rel = 0.0 if fro_diff == 0.0 else float("inf")
    else:
        frobenius_rel = fro_diff / fro_ref
    return ErrorMetrics(max_abs, max_rel, frobenius_rel)


# --- text file format -------------------------------------------------------
#
# Line 1: "<n> <dtype>" with dtype in {f32, f64}; then n lines of n decimal
# values each, row-major, written with shortest round-trip precision.

def write_matrix(m: Matrix, dest: Union[str, os.PathLike, TextIO]) -> None:
    if hasattr(dest, "write"):
        _write_matrix_stream(m, dest)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            _write_matrix_stream(m, fh)


def _write_matrix_stream(m: Matrix, fh: TextIO) -> None:
    fh.write(f"{m.n} {m.dtype.value}\n")
    for row in m.array:
        fh.write(" ".join(str(v) for v in row))
        fh.write("\n")


def read_matrix(src: Union[str, os.PathLike, TextIO]) -> Matrix:
    if hasattr(src, "read"):
        return _read_matrix_stream(src)
    with open(src, "r", encoding="utf-8") as fh:
        return _read_matrix_stream(fh)


def _read_matrix_stream(fh: TextIO) -> Matrix:
    header = fh.readline().split()
    if len(header) != 2:
        raise ShapeError("matrix file header must be '<n> <dtype>'")
    n = int(header[0])
    dtype = DType.parse(header[1])
    if n < 1:
        raise InvalidDimensionError(f"matrix order must be >= 1, got {n}")
    rows = []
    for i in range(n):
        parts = fh.readline().split()
        if len(parts) != n:
            raise ShapeError(f"row {i} has {len(parts)} values, expected {n}")
        rows.append([dtype.np(float(tok)) for tok in parts])
    return Matrix(np.array(rows, dtype=dtype.np), copy=False)
