"""Matrix power plans and execution over pluggable multiply backends.

Two strategies: the repeated baseline (N-1 successive multiplies, one kernel
dispatch per multiply) and the square-and-multiply method, which needs only
floor(log2 N) + popcount(N) - 1 multiplies.  The advertised "log N multiplies"
is exact for powers of two; the general law is implemented here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import BackendStepError, UnsupportedPowerError
from .linalg import Matrix, identity, matmul_naive, matmul_tiled
from .tiles import TileConfig


class Step(enum.Enum):
    SQUARE = "S"
    MULTIPLY_BASE = "M"


class Strategy(enum.Enum):
    REPEATED = "repeated"
    SQUARED = "squared"

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(
                f"unknown strategy {name!r}; expected one of: repeated, squared"
            ) from None


@dataclass(frozen=True)
class ExponentPlan:
    """Left-to-right binary plan for raising a matrix to ``power``.

    Executing the steps on an accumulator initialized to A yields A**power;
    ``multiply_count`` is floor(log2 N) + popcount(N) - 1 for N >= 1 and 0
    for N in {0, 1}.
    """

    power: int
    steps: tuple[Step, ...]

    @property
    def multiply_count(self) -> int:
        return len(self.steps)

    @property
    def square_count(self) -> int:
        return sum(1 for s in self.steps if s is Step.SQUARE)


def plan_exponentiation(power: int) -> ExponentPlan:
    """Plan A**power by scanning the bits of ``power`` from high to low.

    After the leading bit, every bit contributes one SQUARE, plus one
    MULTIPLY_BASE when set.
    """
    if power < 0:
        raise ValueError(f"power must be >= 0, got {power}")
    if power <= 1:
        return ExponentPlan(power, ())
    steps: list[Step] = []
    for shift in range(power.bit_length() - 2, -1, -1):
        steps.append(Step.SQUARE)
        if (power >> shift) & 1:
            steps.append(Step.MULTIPLY_BASE)
    return ExponentPlan(power, tuple(steps))


@dataclass(frozen=True)
class Backend:
    """A named multiply routine plus its host-device transfer model."""

    name: str
    multiply: Callable[[Matrix, Matrix], Matrix]
    transfer_cost_model: Callable[["ExponentPlan", Strategy], int] = field(
        default=lambda plan, strategy: count_transfers(plan, strategy)
    )


class CountingBackend:
    """Wrap a backend and count multiply invocations (for tests and bench)."""

    def __init__(self, inner: Backend):
        self.inner = inner
        self.calls = 0

    @property
    def name(self) -> str:
        return self.inner.name

    @property
    def transfer_cost_model(self):
        return self.inner.transfer_cost_model

    def multiply(self, a: Matrix, b: Matrix) -> Matrix:
        self.calls += 1
        return self.inner.multiply(a, b)

    def reset(self) -> None:
        self.calls = 0


def naive_backend() -> Backend:
    return Backend("naive", matmul_naive)


def tiled_backend(cfg: Optional[TileConfig] = None) -> Backend:
    cfg = cfg or TileConfig()
    return Backend(f"tiled-{cfg.label()}", lambda a, b: matmul_tiled(a, b, cfg))


def exponentiate(a: Matrix, power: int, backend) -> Matrix:
    """A**power by square-and-multiply; A**0 is the identity.

    Invokes ``backend.multiply`` exactly ``plan_exponentiation(power)
    .multiply_count`` times and never mutates ``a``.
    """
    plan = plan_exponentiation(power)
    if power == 0:
        return identity(a.n, a.dtype)
    acc = a
    for index, step in enumerate(plan.steps):
        try:
            if step is Step.SQUARE:
                acc = backend.multiply(acc, acc)
            else:
                acc = backend.multiply(acc, a)
        except Exception as exc:  # noqa: BLE001 - annotate and re-raise
            raise BackendStepError(index, step.name, exc) from exc
    return acc


def repeated_exponentiate(a: Matrix, power: int, backend) -> Matrix:
    """A**power by N-1 successive multiplies: the baseline and the oracle
    for ``exponentiate``.  Power 0 is not a baseline notion and is rejected.
    """
    if power < 1:
        raise UnsupportedPowerError(
            f"repeated baseline needs power >= 1, got {power}"
        )
    acc = a
    for index in range(power - 1):
        try:
            acc = backend.multiply(acc, a)
        except Exception as exc:  # noqa: BLE001
            raise BackendStepError(index, "MULTIPLY_BASE", exc) from exc
    return acc


def count_transfers(plan: ExponentPlan, strategy: Strategy) -> int:
    """Modeled host-device matrix transfers for a plan under a strategy.

    REPEATED dispatches one kernel per power step and reads the result back
    each time: ``power`` transfers.  SQUARED uploads once, squares on-device
    through ping-pong buffers, and reads back once: 2 transfers for any
    power.
    """
    if strategy is Strategy.REPEATED:
        return plan.power
    return 2


def multiply_count_for(strategy: Strategy, power: int) -> int:
    """The multiply-count law each strategy obeys."""
    if strategy is Strategy.REPEATED:
        if power < 1:
            raise UnsupportedPowerError(
                f"repeated baseline needs power >= 1, got {power}"
            )
        return power - 1
    return plan_exponentiation(power).multiply_count
