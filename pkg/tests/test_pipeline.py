import pytest

from src import pipeline
from src.config import SUITES
from src.pipeline import UnknownSuiteError, expand_suites, run_suite, run_suites
from src.reports import validate_report


def test_expand_suites():
    assert expand_suites("all") == list(SUITES)
    assert expand_suites("hc") == ["hc"]
    with pytest.raises(UnknownSuiteError):
        expand_suites("nope")


def test_reptables_suite_report():
    messages = []
    report = run_suites("reptables", {"ktype_bound": 20}, progress_callback=messages.append)
    validate_report(report)
    assert report["counts"]["fail"] == 0
    assert report["config"]["ktypeBound"] == 20
    assert "jobs" not in report["config"]
    assert messages[0]["message"] == "Starting verification: reptables"
    assert messages[1]["message"].startswith("Suite 1/1: reptables")
    names = {c["name"] for c in report["suites"][0]["checks"]}
    assert "goldens.rep_tables" in names


def test_runs_are_identical():
    first = run_suites("reptables", {"ktype_bound": 20})
    second = run_suites("reptables", {"ktype_bound": 20})
    assert first == second


def test_findings_do_not_fail_the_run():
    report = run_suites("maass")
    counts = report["counts"]
    assert counts["fail"] == 0
    assert counts["finding"] == 2
    findings = {c["name"] for c in report["suites"][0]["checks"] if c["status"] == "finding"}
    assert findings == {"maass.seed_coefficient.half_weight_vanishing", "maass.delta_plus_h.middle_constant"}


def test_raising_step_becomes_a_failed_check(monkeypatch):
    def boom():
        raise RuntimeError("step exploded")

    monkeypatch.setattr(pipeline, "suite_steps", lambda name, options: [("boom", boom)])
    suite = run_suite("hc", {}, {})
    [check] = suite.checks
    assert check.name == "hc.boom"
    assert check.status == "fail"
    assert "step exploded" in check.residual


@pytest.mark.slow
def test_parallel_run_matches_serial():
    serial = run_suites("all", {"jobs": 1, "k": [1, 2], "ktype_bound": 10})
    parallel = run_suites("all", {"jobs": 3, "k": [1, 2], "ktype_bound": 10})
    assert serial == parallel
    assert [s["suite"] for s in serial["suites"]] == sorted(SUITES)


@pytest.mark.slow
def test_uea_suite_reports_displayed_c2_as_finding():
    report = run_suites("uea")
    assert report["counts"]["fail"] == 0
    statuses = {c["name"]: c["status"] for c in report["suites"][0]["checks"]}
    assert statuses["uea.casimir.central.C2_printed"] == "finding"
    assert statuses["uea.casimir.central.C2"] == "pass"
    assert statuses["uea.restriction.C2"] == "pass"


@pytest.mark.slow
def test_hc_suite_passes():
    report = run_suites("hc")
    assert report["counts"]["fail"] == 0
    statuses = {c["name"]: c["status"] for c in report["suites"][0]["checks"]}
    assert statuses["uea.hc_image.C2"] == "pass"
    assert statuses["goldens.hc_images"] == "pass"
