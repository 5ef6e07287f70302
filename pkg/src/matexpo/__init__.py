"""Matrix exponentiation in O(log N) multiplies over pluggable backends,
with a deterministic work-group kernel simulator and a benchmark harness.
"""

from .dtypes import DType
from .errors import (
    BackendStepError,
    ConfigError,
    InvalidDimensionError,
    InvalidRangeError,
    LaunchError,
    LocalMemoryError,
    MatexpoError,
    PlotError,
    ShapeError,
    TableError,
    TilingError,
    UnsupportedPowerError,
)
from .linalg import (
    ErrorMetrics,
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
from .tiles import (
    DEFAULT_LOCAL_MEM_BUDGET,
    TILE_MENU,
    UNROLL_FACTORS,
    VECTOR_WIDTHS,
    LaunchGeometry,
    TileConfig,
    check_budget,
    check_divisibility,
    staged_footprint_bytes,
)
from .tolerances import (
    associativity_tol,
    device_tol,
    oracle_tol,
    vectorized_tol,
)
from .expo import (
    Backend,
    CountingBackend,
    ExponentPlan,
    Step,
    Strategy,
    count_transfers,
    exponentiate,
    multiply_count_for,
    naive_backend,
    plan_exponentiation,
    repeated_exponentiate,
    tiled_backend,
)
from .kernelsim import (
    REVERSED,
    ROW_MAJOR,
    CoalescingReport,
    RaceVerdict,
    Schedule,
    TrafficReport,
    analyze_coalescing,
    default_schedules,
    detect_barrier_race,
    predict_traffic,
    shuffle_schedule,
    simulate_naive_matmul,
    simulate_tiled_matmul,
    unblocked_global_loads,
)
from .bench import (
    BenchConfig,
    BenchmarkRecord,
    emit_csv,
    emit_plot,
    emit_table,
    make_backend,
    read_csv,
    run_benchmark,
)

__version__ = "0.1.0"

__all__ = [
    "DType",
    "MatexpoError",
    "InvalidDimensionError",
    "InvalidRangeError",
    "ShapeError",
    "TilingError",
    "LocalMemoryError",
    "LaunchError",
    "UnsupportedPowerError",
    "BackendStepError",
    "ConfigError",
    "TableError",
    "PlotError",
    "Matrix",
    "ErrorMetrics",
    "identity",
    "zeros",
    "splitmix64",
    "random_matrix",
    "matmul_naive",
    "matmul_tiled",
    "compare",
    "write_matrix",
    "read_matrix",
    "TILE_MENU",
    "VECTOR_WIDTHS",
    "UNROLL_FACTORS",
    "DEFAULT_LOCAL_MEM_BUDGET",
    "TileConfig",
    "LaunchGeometry",
    "check_budget",
    "check_divisibility",
    "staged_footprint_bytes",
    "vectorized_tol",
    "associativity_tol",
    "oracle_tol",
    "device_tol",
    "Step",
    "Strategy",
    "ExponentPlan",
    "plan_exponentiation",
    "Backend",
    "CountingBackend",
    "naive_backend",
    "tiled_backend",
    "exponentiate",
    "repeated_exponentiate",
    "count_transfers",
    "multiply_count_for",
    "Schedule",
    "ROW_MAJOR",
    "REVERSED",
    "shuffle_schedule",
    "default_schedules",
    "RaceVerdict",
    "CoalescingReport",
    "TrafficReport",
    "analyze_coalescing",
    "predict_traffic",
    "unblocked_global_loads",
    "simulate_tiled_matmul",
    "simulate_naive_matmul",
    "detect_barrier_race",
    "BenchConfig",
    "BenchmarkRecord",
    "run_benchmark",
    "make_backend",
    "emit_table",
    "emit_csv",
    "read_csv",
    "emit_plot",
    "__version__",
]
