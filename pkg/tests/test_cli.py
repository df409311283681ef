"""End-to-end checks of the argparse front end via main(argv)."""

import json

import pytest

from arbor.cli import main
from arbor.harness import CSV_COLUMNS
from arbor.trees import DegreeStatistics, PlaneTree


@pytest.fixture
def stats_file(tmp_path):
    path = tmp_path / "stats.json"
    path.write_text(json.dumps({"0": 4, "2": 3}))
    return str(path)


@pytest.fixture
def binary15_file(tmp_path):
    path = tmp_path / "binary15.json"
    path.write_text(json.dumps({"0": 8, "2": 7}))
    return str(path)


def test_equiv_prints_report_and_exits_zero(capsys):
    code = main(["equiv", "--max-n", "4"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["passed"] is True
    assert doc["config"]["kind"] == "equivalence"


def test_equiv_rejects_oversized_request(capsys):
    code = main(["equiv", "--max-n", "99"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_tails_writes_report_files(tmp_path, binary15_file, capsys):
    base = tmp_path / "sweep"
    code = main(["tails", "--stats", binary15_file, "--reps", "3000",
                 "--seed", "2", "--out", str(base)])
    assert code == 0
    assert capsys.readouterr().out.startswith("PASS ")
    doc = json.loads((tmp_path / "sweep.json").read_text())
    assert doc["config"]["replications"] == 3000
    csv_lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert csv_lines[0] == ",".join(CSV_COLUMNS)
    assert len(csv_lines) == len(doc["cells"]) + 1


def test_tails_accepts_a_beta_grid(binary15_file, capsys):
    code = main(["tails", "--stats", binary15_file, "--reps", "2000",
                 "--grid", "90, 150"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["config"]["grid"] == [90.0, 150.0]


def test_tails_path_statistics_fail_cleanly(tmp_path, capsys):
    path = tmp_path / "path.json"
    path.write_text(json.dumps({"0": 1, "1": 4}))
    code = main(["tails", "--stats", str(path), "--reps", "10"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_missing_input_file_reports_instead_of_crashing(tmp_path, capsys):
    code = main(["tails", "--stats", str(tmp_path / "absent.json")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_malformed_json_reports_instead_of_crashing(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code = main(["tails", "--stats", str(path)])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_converge_near_path_smoke(capsys):
    code = main(["converge", "--family", "near-path", "--sizes", "40",
                 "--grid", "0.5,0.2", "--reps", "6", "--seed", "3"])
    doc = json.loads(capsys.readouterr().out)
    assert code in (0, 1)  # trend verdicts are probabilistic at this scale
    assert doc["config"]["family"] == "near-path"
    assert [c["grid_value"] for c in doc["cells"]][-1] == "chat-spread"


def test_converge_with_explicit_mu(tmp_path, capsys):
    mu_path = tmp_path / "mu.json"
    mu_path.write_text(json.dumps({"0": 0.5, "2": 0.5}))
    code = main(["converge", "--family", "control", "--mu", str(mu_path),
                 "--sizes", "21,41", "--reps", "8", "--seed", "1"])
    doc = json.loads(capsys.readouterr().out)
    assert code in (0, 1)
    assert doc["config"]["target"] == {"0": 0.5, "2": 0.5}


def test_concentrate_leaf_writes_files(tmp_path, capsys):
    base = tmp_path / "leaf_report"
    code = main(["concentrate", "--class", "leaf", "--out", str(base)])
    assert code == 0
    assert capsys.readouterr().out.startswith("PASS ")
    assert (tmp_path / "leaf_report.json").exists()
    assert (tmp_path / "leaf_report.csv").exists()


def test_concentrate_census_smoke(capsys):
    code = main(["concentrate", "--class", "census", "--n", "40",
                 "--reps", "3", "--tolerance", "1.0"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["config"]["family"] == "census"


def test_concentrate_rejects_unknown_class(capsys):
    with pytest.raises(SystemExit):
        main(["concentrate", "--class", "misc"])
    capsys.readouterr()


def test_sample_emits_valid_trees(stats_file, capsys):
    code = main(["sample", "--stats", stats_file, "--count", "5",
                 "--seed", "9"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert len(lines) == 5
    want = DegreeStatistics({0: 4, 2: 3})
    for line in lines:
        tree = PlaneTree.from_line(line)
        assert tree.degree_statistics() == want


def test_sample_to_file_matches_stdout(tmp_path, stats_file, capsys):
    out = tmp_path / "trees.txt"
    assert main(["sample", "--stats", stats_file, "--count", "3",
                 "--seed", "9", "--out", str(out)]) == 0
    assert main(["sample", "--stats", stats_file, "--count", "3",
                 "--seed", "9"]) == 0
    assert out.read_text() == capsys.readouterr().out


def test_zn_prints_integer_counts(tmp_path, capsys):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"weights": [1, 0, 1], "rho": "infinity"}))
    code = main(["zn", "--weights", str(path), "--n", "5"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "2"


def test_zn_prints_exact_rationals(tmp_path, capsys):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"weights": [1, "1/2"], "rho": "infinity"}))
    code = main(["zn", "--weights", str(path), "--n", "3"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "1/4"
