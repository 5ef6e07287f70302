"""Exception types shared across the package."""


class MatexpoError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDimensionError(MatexpoError, ValueError):
    """Matrix order is not a positive integer."""


class InvalidRangeError(MatexpoError, ValueError):
    """Element range [lo, hi) is empty or inverted."""


class ShapeError(MatexpoError, ValueError):
    """Operands disagree in order or element dtype."""


class TilingError(MatexpoError, ValueError):
    """Matrix order is not divisible by the tile dimensions."""


class LocalMemoryError(MatexpoError, ValueError):
    """Tile footprint exceeds the local-memory budget."""

    def __init__(self, footprint_bytes: int, budget_bytes: int):
        self.footprint_bytes = footprint_bytes
        self.budget_bytes = budget_bytes
        super().__init__(
            f"local-memory footprint {footprint_bytes} B exceeds budget {budget_bytes} B"
        )


class LaunchError(MatexpoError, ValueError):
    """Launch geometry violates the execution-model limits."""


class UnsupportedPowerError(MatexpoError, ValueError):
    """The repeated-multiply baseline has no notion of this power."""


class BackendStepError(MatexpoError, RuntimeError):
    """A backend multiply failed; carries the plan step index."""

    def __init__(self, step_index: int, step_name: str, cause: Exception):
        self.step_index = step_index
        self.step_name = step_name
        super().__init__(f"backend multiply failed at step {step_index} ({step_name}): {cause}")


class ConfigError(MatexpoError, ValueError):
    """Benchmark configuration failed validation."""


class TableError(MatexpoError, ValueError):
    """Benchmark records do not cover the rectangular grid a table needs."""


class PlotError(MatexpoError, ValueError):
    """Records cannot be rendered with the requested plot options."""
