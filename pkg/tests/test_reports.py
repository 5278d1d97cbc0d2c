import json

import pytest

from src.exact import MultiPoly
from src.reports import (
    CheckResult,
    ReportSchemaError,
    SuiteReport,
    apply_findings,
    build_report,
    dumps_report,
    format_summary,
    load_findings_manifest,
    report_exit_code,
    validate_report,
    write_report,
)


def _suite(name="uea"):
    suite = SuiteReport(name)
    suite.add(CheckResult.compare("b.zero", "x - x = 0", "x", "x", MultiPoly.const(0)))
    suite.add(CheckResult.compare("a.nonzero", "u = v", "u", "v", MultiPoly.parse("u - v")))
    return suite


def test_compare_statuses():
    suite = _suite()
    statuses = {c.name: c.status for c in suite.checks}
    assert statuses == {"b.zero": "pass", "a.nonzero": "fail"}
    assert MultiPoly.parse(suite.failed()[0].residual) == MultiPoly.parse("u - v")


def test_numeric_tolerance():
    assert CheckResult.numeric("n", "", 1.0 + 1e-9, 1.0, 1e-6).status == "pass"
    check = CheckResult.numeric("n", "", 1.1, 1.0, 1e-6, bound=1e-3)
    assert check.status == "fail"
    assert check.details["bound"] == 1e-3


def test_from_error_keeps_exception_text():
    check = CheckResult.from_error("x.step", "step", ValueError("boom"))
    assert check.status == "fail"
    assert check.residual == "ValueError: boom"


def test_findings_reclassify_only_whitelisted_failures():
    suite = _suite()
    apply_findings(suite.checks, {"a.nonzero": "known", "b.zero": "ignored"})
    statuses = {c.name: c.status for c in suite.checks}
    assert statuses == {"b.zero": "pass", "a.nonzero": "finding"}
    assert suite.checks[1].details["finding"] == "known"


def test_shipped_manifest():
    manifest = load_findings_manifest()
    assert "shift.c2_table.printed_vs_reconciled" in manifest
    assert "sturm.seed_normalization" in manifest
    assert "uea.casimir.central.C2_printed" in manifest


def test_missing_manifest_is_empty(tmp_path):
    assert load_findings_manifest(str(tmp_path / "absent.json")) == {}


def test_report_is_valid_and_sorted():
    report = build_report([_suite("uea"), _suite("hc")], {"suite": "all"})
    validate_report(report)
    assert [s["suite"] for s in report["suites"]] == ["hc", "uea"]
    assert [c["name"] for c in report["suites"][0]["checks"]] == ["a.nonzero", "b.zero"]
    assert report["counts"]["fail"] == 2
    assert report_exit_code(report) == 1


def test_elapsed_only_with_timings():
    suite = _suite()
    for check in suite.checks:
        check.elapsed_ms = 12.5
    plain = build_report([suite], {})
    timed = build_report([suite], {}, timings=True)
    assert {c["elapsedMs"] for c in plain["suites"][0]["checks"]} == {None}
    assert {c["elapsedMs"] for c in timed["suites"][0]["checks"]} == {12.5}


def test_schema_rejects_unknown_status():
    report = build_report([_suite()], {})
    report["suites"][0]["checks"][0]["status"] = "maybe"
    with pytest.raises(ReportSchemaError):
        validate_report(report)


def test_written_report_round_trips(tmp_path):
    report = build_report([_suite()], {"seed": 1})
    path = tmp_path / "out" / "report.json"
    write_report(report, str(path))
    text = path.read_text(encoding="utf-8")
    assert text == dumps_report(report)
    assert json.loads(text) == report


def test_summary_lists_failures():
    summary = format_summary(build_report([_suite()], {}))
    assert "[fail] a.nonzero" in summary
    assert "b.zero" not in summary
