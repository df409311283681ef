"""Unit tests for the experiment harness.

Probabilistic verdicts at acceptance scale live in the acceptance suite;
here the runs are small and the focus is report structure, parameter
validation, and byte-level determinism.
"""

import json

import pytest

from arbor.errors import BadParameters, PathDegenerate
from arbor.harness import (CONCENTRATION_CLASSES, CSV_COLUMNS, Cell,
                           ExperimentConfig, ExperimentReport,
                           full_binary_statistics, heavy_tailed_statistics,
                           run_concentration, run_convergence,
                           run_equivalence_suite, run_tail_sweep,
                           thread_count)
from arbor.samplers import OffspringDistribution
from arbor.trees import DegreeStatistics


def strip_clock(report):
    d = report.to_jsonable()
    d.pop("wall_clock_seconds")
    return d


class TestThreadCount:
    def test_default_is_one(self, monkeypatch):
        monkeypatch.delenv("ARBOR_THREADS", raising=False)
        assert thread_count() == 1

    def test_reads_environment(self, monkeypatch):
        monkeypatch.setenv("ARBOR_THREADS", "4")
        assert thread_count() == 4

    def test_clamps_to_one(self, monkeypatch):
        monkeypatch.setenv("ARBOR_THREADS", "-3")
        assert thread_count() == 1

    def test_rejects_garbage(self, monkeypatch):
        monkeypatch.setenv("ARBOR_THREADS", "many")
        with pytest.raises(BadParameters):
            thread_count()


class TestReportPlumbing:
    def cell(self):
        return Cell("tail_sweep", 9, "height>=ell=3", 0.125, 0.1, 0.15,
                    0.5, True)

    def test_csv_row(self):
        row = self.cell().csv_row()
        assert row == ["tail_sweep", "9", "height>=ell=3", "0.125", "0.1",
                       "0.15", "0.5", "pass"]

    def test_csv_row_without_bound(self):
        cell = Cell("convergence", 4, "wid mean", 1.0, 0.9, 1.1, None, False)
        assert cell.csv_row()[6] == ""
        assert cell.csv_row()[7] == "fail"

    def report(self):
        config = ExperimentConfig(kind="demo", seed=7, replications=3,
                                  sizes=(9,))
        return ExperimentReport(config=config, cells=[self.cell()],
                                version="0.0", wall_clock_seconds=1.5)

    def test_json_shape(self):
        doc = json.loads(self.report().to_json())
        assert doc["passed"] is True
        assert doc["config"]["seed"] == 7
        assert doc["cells"][0]["grid_value"] == "height>=ell=3"

    def test_csv_text(self):
        text = self.report().csv_text()
        lines = text.splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2

    def test_write_strips_json_suffix(self, tmp_path):
        base = tmp_path / "report.json"
        json_path, csv_path = self.report().write(str(base))
        assert json_path.endswith("report.json")
        assert csv_path.endswith("report.csv")
        assert (tmp_path / "report.csv").exists()


class TestReferenceStatistics:
    def test_full_binary(self):
        assert full_binary_statistics(1) == DegreeStatistics({0: 1})
        assert full_binary_statistics(7) == DegreeStatistics({0: 4, 2: 3})
        with pytest.raises(BadParameters):
            full_binary_statistics(8)

    def test_heavy_tailed(self):
        for n in (127, 1023):
            stats = heavy_tailed_statistics(n)
            assert stats.n == n
            assert stats.a == 1
            assert stats.count(1) == 0
            assert stats.max_degree >= n // 10
        with pytest.raises(BadParameters):
            heavy_tailed_statistics(3)


class TestEquivalenceSuite:
    def test_small_run_passes(self):
        report = run_equivalence_suite(max_n=5, seed=0)
        assert report.passed
        # four comparison cells per statistics class, twelve classes
        assert len(report.cells) == 48
        kinds = {str(c.grid_value).split()[0] for c in report.cells}
        assert kinds == {"count", "threshold-vs-height", "histogram-vs-height",
                         "spine"}

    def test_size_guard(self):
        with pytest.raises(BadParameters):
            run_equivalence_suite(max_n=11)
        with pytest.raises(BadParameters):
            run_equivalence_suite(max_n=0)


class TestTailSweep:
    def test_small_binary_sweep_passes(self):
        report = run_tail_sweep(full_binary_statistics(15),
                                replications=3000, seed=2)
        assert report.passed
        labels = [str(c.grid_value) for c in report.cells]
        assert any(s.startswith("height>beta=") for s in labels)
        assert any(s.startswith("height>=ell=") for s in labels)
        assert any(s.startswith("sigma>ell=") for s in labels)
        assert any(s.startswith("tau>beta=") for s in labels)
        assert report.config.target == {"0": 8, "2": 7}

    def test_informative_floor_truncates_ell_range(self):
        report = run_tail_sweep(full_binary_statistics(15),
                                replications=3000, seed=2)
        ells = [int(str(c.grid_value).split("=")[-1]) for c in report.cells
                if str(c.grid_value).startswith("height>=ell=")]
        assert ells == list(range(1, max(ells) + 1))
        assert max(ells) < 15  # far tail cells are left to the exact oracle

    def test_path_statistics_rejected(self):
        with pytest.raises(PathDegenerate):
            run_tail_sweep(DegreeStatistics({0: 1, 1: 5}), replications=10)

    def test_parameter_guards(self):
        with pytest.raises(BadParameters):
            run_tail_sweep(DegreeStatistics({0: 2}), replications=10)
        with pytest.raises(BadParameters):
            run_tail_sweep(full_binary_statistics(5), replications=0)

    def test_reports_are_reproducible(self):
        a = run_tail_sweep(full_binary_statistics(9), replications=500, seed=5)
        b = run_tail_sweep(full_binary_statistics(9), replications=500, seed=5)
        assert strip_clock(a) == strip_clock(b)
        assert a.csv_text() == b.csv_text()

    def test_seed_changes_the_draws(self):
        a = run_tail_sweep(full_binary_statistics(9), replications=500, seed=5)
        b = run_tail_sweep(full_binary_statistics(9), replications=500, seed=6)
        assert [c.empirical for c in a.cells] != [c.empirical for c in b.cells]


class TestConvergence:
    def test_cell_structure(self):
        report = run_convergence(family="control", sizes=(21, 41),
                                 replications=8, seed=3)
        labels = [str(c.grid_value) for c in report.cells]
        for name in ("wid/sqrt(n) mean", "wid/sqrt(n) median",
                     "ht/(sqrt(n)log^3n) mean", "depth/sqrt(n) mean"):
            assert sum(name == lab for lab in labels) == 2
        assert labels[-1] == "wid-span-ratio"
        assert report.config.family == "control"

    def test_near_path_structure(self):
        report = run_convergence(family="near-path", sizes=(40,),
                                 replications=6, seed=3, grid=(0.5, 0.2))
        labels = [str(c.grid_value) for c in report.cells]
        assert labels == ["chat eps=0.5", "chat eps=0.2", "chat-spread"]
        assert report.config.grid == (0.5, 0.2)

    def test_heavy_trend_cells(self):
        report = run_convergence(family="heavy", sizes=(30, 60),
                                 replications=6, seed=4)
        labels = [str(c.grid_value) for c in report.cells]
        assert "wid-trend-min-ratio" in labels
        assert "ht-trend-max-ratio" in labels

    def test_parameter_guards(self):
        with pytest.raises(BadParameters):
            run_convergence(replications=1)
        with pytest.raises(BadParameters):
            run_convergence(family="unknown", replications=5)
        with pytest.raises(BadParameters):
            run_convergence(family="heavy", sizes=(100,), replications=5)

    def test_worker_count_does_not_change_the_report(self, monkeypatch):
        monkeypatch.setenv("ARBOR_THREADS", "1")
        serial = run_convergence(family="near-path", sizes=(40,),
                                 replications=6, seed=3, grid=(0.5, 0.2))
        monkeypatch.setenv("ARBOR_THREADS", "2")
        pooled = run_convergence(family="near-path", sizes=(40,),
                                 replications=6, seed=3, grid=(0.5, 0.2))
        assert strip_clock(serial) == strip_clock(pooled)


class TestConcentration:
    def test_class_list_is_closed(self):
        with pytest.raises(BadParameters):
            run_concentration("heavy")

    def test_leaf_class_is_exact_and_passes(self):
        report = run_concentration("leaf", seed=0)
        assert report.passed
        assert report.cells[-1].grid_value == "leaf-trend-min-step"
        assert report.cells[-1].empirical > 0

    def test_census_smoke(self):
        report = run_concentration("census", n=40, replications=4, seed=1,
                                   tolerance=1.0)
        assert report.passed
        assert report.config.target["weights"] == "k^-3"
        assert len(report.config.target["pi"]) == 4

    def test_branching_needs_real_branching(self):
        mu = OffspringDistribution.from_masses({0: 0.3, 1: 0.7})
        with pytest.raises(BadParameters):
            run_concentration("branching", mu=mu, n=30, replications=4)

    def test_supercritical_law_rejected(self):
        mu = OffspringDistribution.from_masses({0: 0.1, 2: 0.9})
        with pytest.raises(BadParameters):
            run_concentration("second-moment", mu=mu, n=30, replications=4)

    def test_replication_guard(self):
        with pytest.raises(BadParameters):
            run_concentration("stretched", replications=0)

    def test_mc_classes_record_the_event(self):
        report = run_concentration("branching", n=60, replications=6, seed=2,
                                   eps=0.1)
        assert "event" in report.config.target
        assert report.cells[-1].bound == 0.99

    def test_class_names_cover_the_cli_choices(self):
        assert CONCENTRATION_CLASSES == ("second-moment", "stretched",
                                         "branching", "census", "leaf")
