"""
A benchmark sweep, from records to table, CSV, and figure
=========================================================

One sweep produces one record per (size, power, strategy, backend) grid
point.  The text table mirrors the usual five-row comparison layout, the
CSV round-trips exactly, and the figure is a self-contained SVG whose bars
can be parsed back out of the file.
"""

import pathlib
import tempfile

from matexpo import (
    BenchConfig,
    emit_csv,
    emit_plot,
    emit_table,
    read_csv,
    run_benchmark,
)

# Keep the grid small so the demo runs in seconds; only relative structure
# matters here.  The naive backend is the sequential baseline, the tiled
# backend plays the accelerator role.
config = BenchConfig(
    sizes=[32],
    powers=[4, 16, 64],
    backends=["naive", "tiled"],
    repetitions=3,
    seed=42,
)
records = run_benchmark(config)
print(f"{len(records)} records "
      f"(sizes x powers x strategies x backends = 1 x 3 x 2 x 2)\n")

# Multiply counts in the records obey the strategy laws exactly; only the
# seconds column is machine-dependent.
for rec in sorted(records, key=lambda r: r.sort_key()):
    print(f"  power={rec.power:3d} {rec.strategy.value:8s} {rec.backend:18s}"
          f" multiplies={rec.multiply_count:3d} transfers={rec.transfer_count:3d}"
          f" t={rec.seconds:.4f}s")

# The five-row comparison table for this size.
print()
print(emit_table(records))

# CSV and SVG artifacts land wherever the caller points them.
out = pathlib.Path(tempfile.mkdtemp(prefix="matexpo-demo-"))
csv_path = out / "sweep.csv"
svg_path = out / "sweep.svg"
emit_csv(records, str(csv_path))
emit_plot(records, str(svg_path))

parsed = read_csv(str(csv_path))
print("CSV round-trips exactly:", parsed == sorted(records, key=lambda r: r.sort_key()))
print("bars in figure:", svg_path.read_text().count('class="bar"'), "of", len(records))
print("artifacts in", out)
