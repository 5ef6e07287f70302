"""Tolerance families, kept in one place so tests never scatter constants.

All bounds scale with the dtype unit roundoff (half machine epsilon) and a
fixed safety factor over the worst-case reassociation error.
"""

from __future__ import annotations

from .dtypes import DType

# Safety factors over the analytic reassociation bounds.
VECTORIZED_SAFETY = 8
ASSOCIATIVITY_SAFETY = 8
ORACLE_SAFETY = 64
DEVICE_SAFETY = 64


def vectorized_tol(n: int, dtype: DType) -> float:
    """Bound on max_rel of the 4-lane multiply against the naive one."""
    return n * dtype.roundoff * VECTORIZED_SAFETY


def associativity_tol(n: int, dtype: DType) -> float:
    """Bound on max_rel between (AB)C and A(BC) for inputs in [-0.5, 0.5)."""
    return n * n * dtype.roundoff * ASSOCIATIVITY_SAFETY


def oracle_tol(power: int, n: int, dtype: DType) -> float:
    """Bound on max_rel between square-and-multiply and repeated multiply."""
    return power * n * dtype.roundoff * ORACLE_SAFETY


def device_tol(n: int, dtype: DType) -> float:
    """Per-multiply bound for device backends, where FMA and reassociation
    are allowed."""
    return n * dtype.roundoff * DEVICE_SAFETY
