"""Element types supported by the matrix engine."""

from __future__ import annotations

import enum

import numpy as np


class DType(enum.Enum):
    """Element type of a dense matrix: IEEE-754 binary32 or binary64."""

    F32 = "f32"
    F64 = "f64"

    @property
    def np(self) -> type:
        return np.float32 if self is DType.F32 else np.float64

    @property
    def itemsize(self) -> int:
        return 4 if self is DType.F32 else 8

    @property
    def roundoff(self) -> float:
        """Unit roundoff: half the machine epsilon of the type."""
        return 2.0 ** -24 if self is DType.F32 else 2.0 ** -53

    @classmethod
    def parse(cls, name: str) -> "DType":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown dtype {name!r}; expected one of: f32, f64") from None

    @classmethod
    def of(cls, array: np.ndarray) -> "DType":
        if array.dtype == np.float32:
            return cls.F32
        if array.dtype == np.float64:
            return cls.F64
        raise ValueError(f"unsupported element dtype {array.dtype}")
