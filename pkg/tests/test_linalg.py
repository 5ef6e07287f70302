"""Core matrix type, deterministic generation, multiplies, and text I/O."""

import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from matexpo.dtypes import DType
from matexpo.errors import InvalidDimensionError, InvalidRangeError, ShapeError
from matexpo.linalg import (
    Matrix,
    compare,
    identity,
    matmul_naive,
    matmul_tiled,
    random_matrix,
    read_matrix,
    splitmix64,
    write_matrix,
    zeros,
)
from matexpo.tiles import TileConfig
from matexpo.tolerances import vectorized_tol

# Reference stream values computed with an independent integer-only
# implementation of the published SplitMix64 algorithm.
SPLITMIX64_SEED0 = (
    0xE220A8397B1DCDAF,
    0x6E789E6AA1B965F4,
    0x06C45D188009454F,
    0xF88BB8A8724C81EC,
)
SPLITMIX64_SEED42 = (
    0xBDD732262FEB6E95,
    0x28EFE333B266F103,
    0x47526757130F9F52,
    0x581CE1FF0E4AE394,
)
SPLITMIX64_SEED2024 = (
    0x9F6D8FECF88EECD5,
    0x18E430BB1511F2D2,
    0x4C6F7CBF58DBA57F,
    0x1DBE69E0AE9BB859,
)

# lo + (draw >> 11) * 2^-53 * (hi - lo) for seed 42, lo=-0.5, hi=0.5,
# from the same independent implementation.
UNIFORM_F64_SEED42 = (
    0.2415648787718233,
    -0.3400896071230799,
    -0.22139886974486134,
    -0.15580928347636247,
)


class TestMatrix:
    def test_copies_and_freezes_input(self):
        arr = np.zeros((3, 3), dtype=np.float64)
        m = Matrix(arr)
        arr[0, 0] = 7.0
        assert m.array[0, 0] == 0.0
        with pytest.raises(ValueError):
            m.array[0, 0] = 1.0

    def test_rejects_non_square(self):
        with pytest.raises(ShapeError):
            Matrix(np.zeros((2, 3)))
        with pytest.raises(ShapeError):
            Matrix(np.zeros(4))

    def test_rejects_non_float_dtype(self):
        with pytest.raises(ShapeError):
            Matrix(np.zeros((2, 2), dtype=np.int64))

    def test_from_rows_and_properties(self):
        m = Matrix.from_rows([[1, 2], [3, 4]], DType.F32)
        assert m.n == 2
        assert m.dtype is DType.F32
        assert m.data.tolist() == [1.0, 2.0, 3.0, 4.0]

    def test_astype_round_trip(self):
        m = random_matrix(4, DType.F32, 1)
        widened = m.astype(DType.F64)
        assert widened.dtype is DType.F64
        assert np.array_equal(widened.astype(DType.F32).array, m.array)

    def test_identity_and_zeros(self):
        i = identity(3, DType.F32)
        assert i.dtype is DType.F32
        assert np.array_equal(i.array, np.eye(3, dtype=np.float32))
        z = zeros(2)
        assert not z.array.any()
        with pytest.raises(InvalidDimensionError):
            identity(0)
        with pytest.raises(InvalidDimensionError):
            zeros(-1)


class TestSplitmix64:
    def test_reference_streams(self):
        assert tuple(int(v) for v in splitmix64(0, 4)) == SPLITMIX64_SEED0
        assert tuple(int(v) for v in splitmix64(42, 4)) == SPLITMIX64_SEED42
        assert tuple(int(v) for v in splitmix64(2024, 4)) == SPLITMIX64_SEED2024

    def test_dtype_and_empty(self):
        out = splitmix64(1, 3)
        assert out.dtype == np.uint64
        assert splitmix64(1, 0).size == 0

    @given(seed=st.integers(0, 2**64 - 1), short=st.integers(0, 16), extra=st.integers(0, 16))
    def test_prefix_consistency(self, seed, short, extra):
        long_stream = splitmix64(seed, short + extra)
        assert np.array_equal(splitmix64(seed, short), long_stream[:short])


class TestRandomMatrix:
    def test_frozen_values(self):
        m = random_matrix(2, DType.F64, 42)
        assert tuple(float(v) for v in m.data) == UNIFORM_F64_SEED42

    def test_deterministic_and_seed_sensitive(self):
        a = random_matrix(8, DType.F32, 7)
        b = random_matrix(8, DType.F32, 7)
        c = random_matrix(8, DType.F32, 8)
        assert np.array_equal(a.array, b.array)
        assert not np.array_equal(a.array, c.array)

    def test_f32_values_derive_from_f64_mapping(self):
        f32 = random_matrix(4, DType.F32, 3)
        f64 = random_matrix(4, DType.F64, 3)
        assert np.array_equal(f32.array, f64.array.astype(np.float32))

    def test_validation(self):
        with pytest.raises(InvalidDimensionError):
            random_matrix(0, DType.F32, 1)
        with pytest.raises(InvalidRangeError):
            random_matrix(2, DType.F32, 1, lo=1.0, hi=1.0)
        with pytest.raises(InvalidRangeError):
            random_matrix(2, DType.F32, 1, lo=2.0, hi=-2.0)

    @given(
        seed=st.integers(0, 2**32),
        n=st.integers(1, 32),
        dtype=st.sampled_from([DType.F32, DType.F64]),
    )
    def test_half_open_range(self, seed, n, dtype):
        m = random_matrix(n, dtype, seed, lo=-0.5, hi=0.5)
        assert m.dtype is dtype
        assert float(m.array.min()) >= -0.5
        assert float(m.array.max()) < 0.5


class TestMatmulNaive:
    @pytest.mark.parametrize("dtype", [DType.F32, DType.F64])
    def test_matches_blas_within_tolerance(self, dtype):
        a = random_matrix(32, dtype, 10)
        b = random_matrix(32, dtype, 11)
        ours = matmul_naive(a, b)
        ref = Matrix(a.array.astype(np.float64) @ b.array.astype(np.float64))
        assert compare(ours.astype(DType.F64), ref).max_rel <= vectorized_tol(32, dtype)

    def test_shape_and_dtype_mismatch(self):
        with pytest.raises(ShapeError):
            matmul_naive(random_matrix(2, DType.F64, 0), random_matrix(3, DType.F64, 0))
        with pytest.raises(ShapeError):
            matmul_naive(random_matrix(2, DType.F64, 0), random_matrix(2, DType.F32, 0))

    @given(seed=st.integers(0, 2**16), n=st.integers(1, 16))
    def test_identity_is_neutral(self, seed, n):
        a = random_matrix(n, DType.F64, seed)
        assert np.array_equal(matmul_naive(identity(n, DType.F64), a).array, a.array)
        assert np.array_equal(matmul_naive(a, identity(n, DType.F64)).array, a.array)


class TestMatmulTiled:
    def test_bitwise_equals_naive(self):
        a = random_matrix(32, DType.F32, 5)
        b = random_matrix(32, DType.F32, 6)
        tiled = matmul_tiled(a, b, TileConfig(16, 16))
        naive = matmul_naive(a, b)
        assert tiled.array.tobytes() == naive.array.tobytes()

    def test_vectorized_lanes_within_tolerance_and_deterministic(self):
        a = random_matrix(32, DType.F32, 5)
        b = random_matrix(32, DType.F32, 6)
        cfg = TileConfig(16, 16, vector_width=4)
        once = matmul_tiled(a, b, cfg)
        again = matmul_tiled(a, b, cfg)
        assert once.array.tobytes() == again.array.tobytes()
        ref = matmul_naive(a, b).astype(DType.F64)
        assert compare(once.astype(DType.F64), ref).max_rel <= vectorized_tol(32, DType.F32)


class TestCompare:
    def test_zero_reference_semantics(self):
        z = zeros(2)
        assert tuple(compare(z, z)) == (0.0, 0.0, 0.0)
        off = Matrix.from_rows([[0.0, 1.0], [0.0, 0.0]])
        metrics = compare(off, z)
        assert metrics.max_abs == 1.0
        assert metrics.max_rel == float("inf")
        assert metrics.frobenius_rel == float("inf")

    def test_known_deviation(self):
        ref = Matrix.from_rows([[2.0, 0.0], [0.0, 2.0]])
        res = Matrix.from_rows([[2.0, 0.0], [0.0, 2.5]])
        metrics = compare(res, ref)
        assert metrics.max_abs == 0.5
        assert metrics.max_rel == 0.25


class TestTextFormat:
    def test_header_and_round_trip(self):
        m = Matrix.from_rows([[1.5, -2.25], [3.0e-40, 1.0e38]], DType.F32)
        buf = io.StringIO()
        write_matrix(m, buf)
        text = buf.getvalue()
        assert text.splitlines()[0] == "2 f32"
        back = read_matrix(io.StringIO(text))
        assert back.dtype is DType.F32
        assert back.array.tobytes() == m.array.tobytes()

    def test_path_round_trip(self, tmp_path):
        m = random_matrix(5, DType.F64, 9)
        path = tmp_path / "m.txt"
        write_matrix(m, path)
        back = read_matrix(path)
        assert back.array.tobytes() == m.array.tobytes()

    def test_malformed_inputs(self):
        with pytest.raises(ShapeError):
            read_matrix(io.StringIO("2\n1 2\n3 4\n"))
        with pytest.raises(ValueError):
            read_matrix(io.StringIO("2 f16\n1 2\n3 4\n"))
        with pytest.raises(ShapeError):
            read_matrix(io.StringIO("2 f64\n1 2 3\n4 5 6\n"))
        with pytest.raises(InvalidDimensionError):
            read_matrix(io.StringIO("0 f64\n"))

    @given(
        seed=st.integers(0, 2**20),
        n=st.integers(1, 8),
        dtype=st.sampled_from([DType.F32, DType.F64]),
    )
    def test_round_trip_is_bitwise(self, seed, n, dtype):
        m = random_matrix(n, dtype, seed, lo=-100.0, hi=100.0)
        buf = io.StringIO()
        write_matrix(m, buf)
        back = read_matrix(io.StringIO(buf.getvalue()))
        assert back.dtype is dtype
        assert back.array.tobytes() == m.array.tobytes()
