from pathlib import Path

import pytest

from circlepack.bench import (
    BenchCell,
    expand_cells,
    parse_sweep,
    run_bench,
    run_cell,
    summarize,
)
from circlepack.layoutfile import read_layout
from circlepack.verify import check_layout


def tiny_cells(seeds=(0, 1), n=7, R=3.0, time_limit=30.0):
    return [BenchCell(n=n, R=R, seed=s, time_limit=time_limit) for s in seeds]


class TestRunCell:
    def test_feasible_run_is_verified(self):
        record, layout = run_cell(BenchCell(n=7, R=3.0, seed=0, time_limit=30.0))
        assert record.feasible
        assert record.error is None
        assert layout is not None
        assert check_layout(layout, 3.0).feasible()

    def test_bad_cell_recorded_not_raised(self):
        record, layout = run_cell(BenchCell(n=0, R=3.0, seed=0, time_limit=1.0))
        assert not record.feasible
        assert record.error is not None
        assert layout is None

    def test_record_line_format(self):
        record, _ = run_cell(BenchCell(n=2, R=3.0, seed=4, time_limit=10.0))
        fields = record.line().split("\t")
        assert len(fields) == 6
        assert fields[0] == "2"
        assert fields[1] == repr(3.0)
        assert fields[2] == "4"
        assert fields[3] in ("0", "1")
        float(fields[4])
        float(fields[5])


class TestRunBench:
    def test_streams_records_and_saves_layouts(self, tmp_path):
        lines = []
        records = run_bench(tiny_cells(), emit=lines.append, outdir=tmp_path)
        assert len(records) == 2
        assert len(lines) == 2
        for record in records:
            saved = tmp_path / f"layout_n7_seed{record.seed}_s100.txt"
            centers, R = read_layout(saved)
            assert R == 3.0
            assert centers.shape == (7, 2)

    def test_empty_cell_set(self):
        lines = []
        records = run_bench([], emit=lines.append)
        assert records == []
        assert lines == []

    def test_parallel_matches_sequential(self):
        cells = tiny_cells(seeds=(0, 1, 2), n=2, R=3.0, time_limit=10.0)
        seq = run_bench(cells, jobs=1)
        par = run_bench(cells, jobs=2)
        # wall time is the only nondeterministic field
        deterministic = lambda r: r.line().rsplit("\t", 1)[0]
        assert [deterministic(r) for r in seq] == [deterministic(r) for r in par]

    def test_jobs_validated(self):
        with pytest.raises(ValueError):
            run_bench([], jobs=0)


class TestSummaries:
    def test_hit_counts(self):
        records = run_bench(tiny_cells(seeds=(0, 1, 2)))
        (summary,) = summarize(records)
        assert summary.runs == 3
        assert summary.hits == 3
        assert summary.mean_success_seconds is not None
        assert summary.line().startswith("# n=7 ")

    def test_sweep_produces_one_row_per_group_size(self):
        cells = expand_cells(
            [(2, 3.0)], seeds=[0], time_limit=10.0, group_sizes=[50, 100, 150]
        )
        records = run_bench(cells)
        rows = summarize(records)
        assert [row.group_size for row in rows] == [50, 100, 150]

    def test_failed_runs_do_not_count_as_hits(self):
        records = run_bench([BenchCell(n=9, R=3.0, seed=0, time_limit=0.5)])
        (summary,) = summarize(records)
        assert summary.hits == 0
        assert summary.mean_success_seconds is None
        assert summary.line().endswith("mean_success_seconds=-")


class TestSweepParsing:
    def test_inclusive_range(self):
        assert parse_sweep("50:150:50") == [50, 100, 150]
        assert parse_sweep("100:100:10") == [100]
        assert parse_sweep("50:150:10") == list(range(50, 151, 10))

    def test_rejects_garbage(self):
        for bad in ("50:150", "0:10:1", "10:5:1", "1:10:0", "a:b:c"):
            with pytest.raises(ValueError):
                parse_sweep(bad)
