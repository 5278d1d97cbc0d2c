import json

import pytest

import app
from src.goldens import GOLDEN_FILES
from src.reports import validate_report


def test_list(capsys):
    assert app.main(["verify", "--list"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in ("hc", "uea", "shift", "maass", "sturm", "gamma-numeric", "reptables"))


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nope"],
        ["verify"],
        ["verify", "hc", "--suite", "uea"],
        ["verify", "hc", "--jobs", "0"],
        ["verify", "hc", "--tol", "-1"],
    ],
)
def test_usage_errors(argv):
    assert app.main(argv) == 2


def test_verify_writes_valid_json(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert app.main(["verify", "reptables", "--json", str(path)]) == 0
    report = json.loads(path.read_text(encoding="utf-8"))
    validate_report(report)
    assert "reptables" in capsys.readouterr().out


def test_reports_are_byte_identical(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert app.main(["verify", "--suite", "reptables", "--json", str(first)]) == 0
    assert app.main(["verify", "--suite", "reptables", "--json", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.slow
def test_corrupted_golden_fails_shift_suite(golden_copy, tmp_path):
    path = golden_copy / GOLDEN_FILES["shift_tables"]
    data = json.loads(path.read_text(encoding="utf-8"))
    data["C2"]["4,4"] = "0"
    path.write_text(json.dumps(data), encoding="utf-8")
    out = tmp_path / "report.json"
    assert app.main(["verify", "shift", "--golden-dir", str(golden_copy), "--json", str(out)]) == 1
    checks = {c["name"]: c for s in json.loads(out.read_text())["suites"] for c in s["checks"]}
    assert checks["shift.table_golden"]["status"] == "fail"
    assert checks["shift.table_golden"]["details"]["shift"] == [4, 4]


def test_dump_goldens_needs_flag(tmp_path):
    assert app.main(["dump", "goldens", "--path", str(tmp_path)]) == 2
    assert not list(tmp_path.iterdir())


def test_dump_tables(tmp_path):
    assert app.main(["dump", "tables", "--path", str(tmp_path)]) == 0
    tables = json.loads((tmp_path / "tables.json").read_text(encoding="utf-8"))
    assert tables["infinitesimalCharacters"] == [[1, -1], [1, 0], [1, 2], [2, 1]]


def test_dump_into_a_file_path_fails(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x")
    assert app.main(["dump", "tables", "--path", str(blocker / "sub")]) == 1


def test_oracle_rejects_divergent_s():
    assert app.main(["oracle", "--integrand", "base", "--s", "0.4"]) == 2


def test_oracle_rejects_indefinite_t():
    assert app.main(["oracle", "--integrand", "base", "--s", "2", "--t12", "3"]) == 2


@pytest.mark.slow
def test_oracle_agrees(capsys):
    assert app.main(["oracle", "--integrand", "base", "--s", "2.0"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["agree"] is True
