"""
Check results, suite reports, the findings manifest and JSON emission.

A check passes iff its residual is exactly zero (or, for numeric checks,
within tolerance). A nonzero residual becomes a 'finding' when its name is
whitelisted in data/findings_manifest.json, and a 'fail' otherwise.
"""

import json
import logging
import os
from dataclasses import dataclass, field

import jsonschema

from .config import ENGINE_VERSION, REPORT_SCHEMA_VERSION, get_data_paths

logger = logging.getLogger(__name__)

STATUSES = ("pass", "fail", "finding", "warning")


class ReportSchemaError(Exception):
    """Raised when a report does not validate against the shipped schema."""


@dataclass
class CheckResult:
    name: str
    citation: str
    lhs: str
    rhs: str
    residual: str = "0"
    status: str = "pass"
    elapsed_ms: float = None
    details: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, name, citation, lhs, rhs, residual, details=None):
        """Symbolic comparison; residual is any exact value with is_zero()."""
        ok = residual.is_zero()
        return cls(
            name=name,
            citation=citation,
            lhs=str(lhs),
            rhs=str(rhs),
            residual="0" if ok else str(residual),
            status="pass" if ok else "fail",
            details=details or {},
        )

    @classmethod
    def predicate(cls, name, citation, lhs, rhs, holds, mismatch=None, details=None):
        return cls(
            name=name,
            citation=citation,
            lhs=str(lhs),
            rhs=str(rhs),
            residual="0" if holds else (mismatch or f"{lhs} != {rhs}"),
            status="pass" if holds else "fail",
            details=details or {},
        )

    @classmethod
    def numeric(cls, name, citation, estimate, reference, tol, bound=None, details=None):
        diff = abs(complex(estimate) - complex(reference))
        scale = max(abs(complex(reference)), 1.0)
        ok = diff <= tol * scale
        info = {"tolerance": tol, "difference": float(diff)}
        if bound is not None:
            info["bound"] = float(bound)
        info.update(details or {})
        return cls(
            name=name,
            citation=citation,
            lhs=_num_text(estimate),
            rhs=_num_text(reference),
            residual="0" if ok else _num_text(diff),
            status="pass" if ok else "fail",
            details=info,
        )

    @classmethod
    def from_error(cls, name, citation, exc):
        return cls(
            name=name,
            citation=citation,
            lhs="error",
            rhs="",
            residual=f"{type(exc).__name__}: {exc}",
            status="fail",
        )

    def to_dict(self, timings=False):
        data = {
            "name": self.name,
            "status": self.status,
            "citation": self.citation,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "elapsedMs": round(self.elapsed_ms, 3) if timings and self.elapsed_ms is not None else None,
        }
        if self.details:
            data["details"] = _jsonable(self.details)
        return data


def _num_text(x):
    x = complex(x)
    if x.imag == 0:
        return repr(float(x.real))
    return f"{x.real!r}{x.imag:+}j"


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def add(self, result):
        if isinstance(result, (list, tuple)):
            self.checks.extend(result)
        else:
            self.checks.append(result)

    @property
    def counts(self):
        counts = {status: 0 for status in STATUSES}
        for check in self.checks:
            counts[check.status] += 1
        return counts

    def failed(self):
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self, timings=False):
        return {
            "suite": self.suite,
            "counts": self.counts,
            "checks": [c.to_dict(timings) for c in sorted(self.checks, key=lambda c: c.name)],
            "notes": _jsonable(self.notes),
        }


# -----------------------------------------------------------------------------
# Findings manifest
# -----------------------------------------------------------------------------
def load_findings_manifest(path=None):
    """Map of whitelisted check name -> explanation."""
    path = path or get_data_paths()["findings"]
    if not os.path.exists(path):
        logger.warning("Findings manifest not found at %s; every residual is a failure", path)
        return {}
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    return dict(data.get("findings", {}))


def apply_findings(checks, manifest):
    """Reclassify whitelisted failures as findings; return the checks."""
    for check in checks:
        if check.status == "fail" and check.name in manifest:
            check.status = "finding"
            check.details.setdefault("finding", manifest[check.name])
    return checks


# -----------------------------------------------------------------------------
# Reports
# -----------------------------------------------------------------------------
def build_report(suites, config, timings=False):
    overall = {status: 0 for status in STATUSES}
    for suite in suites:
        for status, n in suite.counts.items():
            overall[status] += n
    return {
        "schemaVersion": REPORT_SCHEMA_VERSION,
        "engineVersion": ENGINE_VERSION,
        "config": _jsonable(config),
        "counts": overall,
        "suites": [s.to_dict(timings) for s in sorted(suites, key=lambda s: s.suite)],
    }


def report_exit_code(report):
    return 1 if report["counts"]["fail"] else 0


def validate_report(report, schema_path=None):
    schema_path = schema_path or get_data_paths()["schema"]
    with open(schema_path, "r", encoding="utf-8") as f:
        schema = json.load(f)
    try:
        jsonschema.validate(instance=report, schema=schema)
    except jsonschema.ValidationError as e:
        raise ReportSchemaError(f"report does not match schema: {e.message}") from e


def dumps_report(report):
    return json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def write_report(report, path):
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_report(report))
    logger.info("Report written to %s", path)


def format_summary(report):
    """Human-readable summary lines for the console."""
    lines = []
    for suite in report["suites"]:
        c = suite["counts"]
        lines.append(
            f"{suite['suite']:<14} pass={c['pass']:<3} finding={c['finding']:<3} "
            f"warning={c['warning']:<3} fail={c['fail']}"
        )
        for check in suite["checks"]:
            if check["status"] in ("fail", "finding", "warning"):
                lines.append(f"  [{check['status']}] {check['name']}: residual {check['residual']}")
    return "\n".join(lines)
