"""Benchmark harness: sweeps, table/CSV/plot emission, timing guard."""

import io
import re

import pytest
from hypothesis import given, settings, strategies as st

from matexpo.bench import (
    CSV_HEADER,
    TABLE_ROW_LABELS,
    BenchConfig,
    BenchmarkRecord,
    emit_csv,
    emit_plot,
    emit_table,
    make_backend,
    measure_median_seconds,
    read_csv,
    run_benchmark,
    timer_granularity,
    validate_config,
)
from matexpo.dtypes import DType
from matexpo.errors import ConfigError, PlotError, TableError
from matexpo.expo import Strategy, multiply_count_for
from matexpo.tiles import TileConfig


def record(size=64, power=64, strategy=Strategy.REPEATED, backend="naive",
           seconds=0.1, max_rel_err=1e-7, nonfinite=False):
    return BenchmarkRecord(
        size=size,
        power=power,
        strategy=strategy,
        backend=backend,
        seconds=seconds,
        multiply_count=multiply_count_for(strategy, power),
        transfer_count=power if strategy is Strategy.REPEATED else 2,
        max_rel_err=max_rel_err,
        nonfinite=nonfinite,
    )


def table_triple(power, seq, gpu, ours, size=64, backend="tiled-16x16-vw1-u1"):
    return [
        record(size, power, Strategy.REPEATED, "naive", seq),
        record(size, power, Strategy.REPEATED, backend, gpu),
        record(size, power, Strategy.SQUARED, backend, ours),
    ]


class TestRunBenchmark:
    def test_single_point_grid(self):
        config = BenchConfig(sizes=[64], powers=[64], backends=["naive"], repetitions=1)
        records = run_benchmark(config)
        assert len(records) == 2
        by_strategy = {r.strategy: r for r in records}
        assert by_strategy[Strategy.REPEATED].multiply_count == 63
        assert by_strategy[Strategy.SQUARED].multiply_count == 6
        assert by_strategy[Strategy.REPEATED].transfer_count == 64
        assert by_strategy[Strategy.SQUARED].transfer_count == 2

    def test_counts_are_independent_of_repetitions(self):
        base = dict(sizes=[16], powers=[5], backends=["naive"])
        once = run_benchmark(BenchConfig(repetitions=1, **base))
        five = run_benchmark(BenchConfig(repetitions=5, **base))
        assert [(r.sort_key(), r.multiply_count) for r in once] == [
            (r.sort_key(), r.multiply_count) for r in five
        ]

    def test_validation_happens_before_any_run(self):
        config = BenchConfig(sizes=[10], powers=[2], backends=["tiled"])
        with pytest.raises(ConfigError, match="divisible"):
            run_benchmark(config)

    def test_validation_collects_all_problems(self):
        config = BenchConfig(sizes=[], powers=[0], backends=["warp"], repetitions=0)
        with pytest.raises(ConfigError) as exc_info:
            validate_config(config)
        message = str(exc_info.value)
        for fragment in ("sizes", "power 0", "repetitions", "warp"):
            assert fragment in message

    def test_every_record_obeys_the_count_law(self):
        config = BenchConfig(sizes=[16], powers=[1, 7, 13], backends=["naive"], repetitions=1)
        for rec in run_benchmark(config):
            assert rec.multiply_count == multiply_count_for(rec.strategy, rec.power)
            assert rec.seconds > 0

    def test_oracle_cap_skips_verification(self):
        config = BenchConfig(
            sizes=[16], powers=[3], backends=["naive"], repetitions=1, oracle_cap=8
        )
        for rec in run_benchmark(config):
            assert rec.max_rel_err is None
            assert rec.nonfinite is False

    def test_parallel_verify_matches_serial(self):
        base = dict(sizes=[16], powers=[2, 3], backends=["naive"], repetitions=1)
        serial = run_benchmark(BenchConfig(**base))
        parallel = run_benchmark(BenchConfig(parallel_verify=True, **base))
        assert [(r.sort_key(), r.max_rel_err) for r in serial] == [
            (r.sort_key(), r.max_rel_err) for r in parallel
        ]

    def test_simulated_backend_runs(self):
        config = BenchConfig(
            sizes=[16], powers=[2], strategies=[Strategy.SQUARED],
            backends=["simulated"], repetitions=1,
        )
        records = run_benchmark(config)
        assert len(records) == 1
        assert records[0].backend.startswith("simulated-")
        assert records[0].multiply_count == 1

    def test_determinism_modulo_timing(self):
        config = BenchConfig(sizes=[16], powers=[2, 5], backends=["naive"], repetitions=1)
        def stable_fields(records):
            return [
                (r.size, r.power, r.strategy, r.backend, r.multiply_count,
                 r.transfer_count, r.nonfinite)
                for r in sorted(records, key=BenchmarkRecord.sort_key)
            ]
        assert stable_fields(run_benchmark(config)) == stable_fields(run_benchmark(config))


class TestBackendRegistry:
    def test_known_backends(self):
        assert make_backend("naive").name == "naive"
        assert make_backend("tiled", TileConfig(8, 8)).name == "tiled-8x8-vw1-u1"
        assert make_backend("simulated", TileConfig(8, 8)).name == "simulated-8x8-vw1-u1"

    def test_unknown_backend(self):
        with pytest.raises(ConfigError):
            make_backend("warp")


class TestTimer:
    def test_granularity_positive(self):
        assert timer_granularity() > 0.0

    def test_fast_calls_still_time_positive(self):
        assert measure_median_seconds(lambda: None, repetitions=3) > 0.0


class TestTable:
    def test_reference_speedups(self):
        records = table_triple(64, seq=0.23, gpu=0.05, ours=0.01)
        table = emit_table(records)
        lines = table.splitlines()
        assert lines[0] == "Matrix size 64 x 64"
        for label in TABLE_ROW_LABELS:
            assert any(line.startswith(label) for line in lines)
        speedup_row = next(l for l in lines if l.startswith("Naïve Speed UP"))
        assert speedup_row.split()[-1] == "4.6"
        ours_row = next(l for l in lines if l.startswith("Our Approach vs"))
        assert ours_row.split()[-1] == "5"

    def test_equal_times_give_unit_speedup(self):
        records = table_triple(8, seq=0.2, gpu=0.2, ours=0.2)
        lines = emit_table(records).splitlines()
        speedup_row = next(l for l in lines if l.startswith("Naïve Speed UP"))
        assert float(speedup_row.split()[-1]) == 1.0

    def test_columns_are_powers_ascending(self):
        records = (
            table_triple(256, 0.9, 0.3, 0.1)
            + table_triple(4, 0.1, 0.05, 0.04)
            + table_triple(64, 0.4, 0.2, 0.08)
        )
        header = emit_table(records).splitlines()[1]
        assert header.split() == ["4", "64", "256"]

    def test_two_decimal_rounding(self):
        records = table_triple(16, seq=0.4197, gpu=0.03, ours=0.01)
        lines = emit_table(records).splitlines()
        speedup_row = next(l for l in lines if l.startswith("Naïve Speed UP"))
        assert speedup_row.split()[-1] == "13.99"

    def test_missing_cells_are_listed(self):
        records = table_triple(64, 0.2, 0.1, 0.05) + table_triple(128, 0.4, 0.2, 0.1)[:2]
        with pytest.raises(TableError, match="power=128"):
            emit_table(records)

    def test_single_size_required(self):
        records = table_triple(64, 0.2, 0.1, 0.05) + table_triple(
            64, 0.2, 0.1, 0.05, size=128
        )
        with pytest.raises(TableError, match="one size"):
            emit_table(records)

    def test_accelerated_backend_required_and_unambiguous(self):
        with pytest.raises(TableError, match="non-naive"):
            emit_table([record(backend="naive")])
        mixed = table_triple(64, 0.2, 0.1, 0.05) + table_triple(
            64, 0.2, 0.1, 0.05, backend="tiled-8x8-vw1-u1"
        )
        with pytest.raises(TableError, match="ambiguous"):
            emit_table(mixed)

    def test_empty_records(self):
        with pytest.raises(TableError):
            emit_table([])


class TestCsv:
    def test_header_and_row_count(self):
        buf = io.StringIO()
        emit_csv([record(power=2), record(power=3)], buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3

    def test_empty_records_is_header_only(self):
        buf = io.StringIO()
        emit_csv([], buf)
        assert buf.getvalue() == CSV_HEADER + "\n"

    def test_deterministic_order(self):
        records = [
            record(size=128, power=2, strategy=Strategy.SQUARED),
            record(size=64, power=4, strategy=Strategy.REPEATED),
            record(size=64, power=2, strategy=Strategy.SQUARED),
            record(size=64, power=2, strategy=Strategy.REPEATED, backend="tiled-16x16-vw1-u1"),
            record(size=64, power=2, strategy=Strategy.REPEATED),
        ]
        buf = io.StringIO()
        emit_csv(records, buf)
        keys = [tuple(line.split(",")[:4]) for line in buf.getvalue().splitlines()[1:]]
        assert keys == sorted(keys, key=lambda k: (int(k[0]), int(k[1]), k[2], k[3]))

    def test_round_trip_is_exact(self):
        records = [
            record(power=3, seconds=0.12345678901234567, max_rel_err=2.5e-16),
            record(power=5, seconds=1e-7, max_rel_err=None, nonfinite=True),
        ]
        buf = io.StringIO()
        emit_csv(records, buf)
        back = read_csv(io.StringIO(buf.getvalue()))
        assert back == sorted(records, key=BenchmarkRecord.sort_key)

    def test_skipped_oracle_is_empty_cell(self):
        buf = io.StringIO()
        emit_csv([record(max_rel_err=None)], buf)
        row = buf.getvalue().splitlines()[1].split(",")
        assert row[7] == ""

    def test_file_path_round_trip(self, tmp_path):
        path = tmp_path / "bench.csv"
        emit_csv([record()], str(path))
        assert read_csv(str(path)) == [record()]

    def test_reader_rejects_malformed_input(self):
        with pytest.raises(ValueError, match="header"):
            read_csv(io.StringIO("wrong,header\n"))
        with pytest.raises(ValueError, match="malformed"):
            read_csv(io.StringIO(CSV_HEADER + "\n1,2,3\n"))

    @settings(max_examples=30)
    @given(
        seconds=st.floats(min_value=1e-9, max_value=1e3, allow_nan=False),
        err=st.one_of(st.none(), st.floats(min_value=0, max_value=1, allow_nan=False)),
        power=st.integers(1, 4096),
        size=st.integers(1, 4096),
    )
    def test_round_trip_property(self, seconds, err, power, size):
        rec = record(size=size, power=power, seconds=seconds, max_rel_err=err)
        buf = io.StringIO()
        emit_csv([rec], buf)
        assert read_csv(io.StringIO(buf.getvalue())) == [rec]


def bar_rects(svg: str) -> list[dict]:
    rects = []
    for match in re.finditer(r'<rect class="bar"(.*?)/>', svg):
        attrs = dict(re.findall(r'([a-z-]+)="([^"]*)"', match.group(1)))
        rects.append(attrs)
    return rects


class TestPlot:
    def test_bar_count_matches_records(self):
        records = [
            record(power=p, strategy=s, seconds=0.01 * (i + 1))
            for i, (p, s) in enumerate(
                (p, s) for p in (2, 4, 8) for s in (Strategy.REPEATED, Strategy.SQUARED)
            )
        ]
        buf = io.StringIO()
        emit_plot(records, buf)
        assert len(bar_rects(buf.getvalue())) == 6

    def test_linear_heights_proportional(self):
        records = [
            record(power=2, seconds=0.05),
            record(power=4, seconds=0.01),
        ]
        buf = io.StringIO()
        emit_plot(records, buf)
        rects = bar_rects(buf.getvalue())
        heights = {r["data-power"]: float(r["height"]) for r in rects}
        assert heights["2"] / heights["4"] == pytest.approx(5.0, rel=1e-9)

    def test_log_axis_rejects_zero(self):
        with pytest.raises(PlotError, match="log"):
            emit_plot([record(seconds=0.0)], io.StringIO(), log_time_axis=True)

    def test_negative_values_rejected(self):
        with pytest.raises(PlotError):
            emit_plot([record(seconds=-0.1)], io.StringIO())

    def test_log_axis_orders_bars(self):
        records = [
            record(power=2, seconds=0.001),
            record(power=4, seconds=1.0),
        ]
        buf = io.StringIO()
        emit_plot(records, buf, log_time_axis=True)
        heights = {r["data-power"]: float(r["height"]) for r in bar_rects(buf.getvalue())}
        assert heights["4"] > heights["2"] > 0

    def test_single_size_required(self):
        records = [record(size=64), record(size=128)]
        with pytest.raises(PlotError, match="one size"):
            emit_plot(records, io.StringIO())

    def test_empty_records(self):
        with pytest.raises(PlotError):
            emit_plot([], io.StringIO())

    def test_series_identified_and_colored(self):
        records = [
            record(power=2, strategy=Strategy.REPEATED, backend="naive"),
            record(power=2, strategy=Strategy.SQUARED, backend="tiled-16x16-vw1-u1"),
        ]
        buf = io.StringIO()
        emit_plot(records, buf)
        rects = bar_rects(buf.getvalue())
        series = {r["data-series"] for r in rects}
        assert series == {"repeated/naive", "squared/tiled-16x16-vw1-u1"}
        assert len({r["fill"] for r in rects}) == 2

    def test_file_output(self, tmp_path):
        path = tmp_path / "fig.svg"
        emit_plot([record()], str(path))
        text = path.read_text()
        assert text.startswith("<svg ")
        assert text.rstrip().endswith("</svg>")
