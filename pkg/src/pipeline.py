"""
Verification pipeline: suite registry → per-check execution → findings → report.

Uses src.config for defaults. Every suite is a list of steps; a step that
raises becomes a failing check carrying the exception text, and the run goes on.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from functools import partial

from . import casimir, halfspace, quadrature, rep_tables, shift_algebra, siegel_integrals, uea
from .config import SUITES, get_verify_defaults
from .goldens import table_golden_check, verify_golden
from .reports import CheckResult, SuiteReport, apply_findings, build_report, load_findings_manifest

logger = logging.getLogger(__name__)

SUITE_DESCRIPTIONS = {
    "hc": "Harish-Chandra images of C1, C2 and the D+/D- factorizations",
    "uea": "structure constants, PBW normal ordering and scalar K-type restrictions",
    "shift": "C1/C2 action tables, D+/D- displays and the line specialization",
    "maass": "Maass operators on the Siegel half-space",
    "sturm": "Siegel Gamma integrals and the Sturm transform limits",
    "gamma-numeric": "cone quadrature against the symbolic Gamma integrals",
    "reptables": "Weyl orbits, Blattner parameters, Langlands candidates and m0",
}


class UnknownSuiteError(Exception):
    """Raised when a suite name is not registered."""


def _create_emit_fn(progress_callback):
    """Factory to create an emit function for progress reporting."""
    def emit(message, **payload):
        logger.info(message)
        if progress_callback:
            data = {"type": "progress", "message": message}
            data.update(payload)
            progress_callback(data)
    return emit


def suite_steps(name, options):
    """(label, callable) pairs for a suite; each callable returns checks."""
    golden_dir = options["golden_dir"]
    seed = options["seed"]
    if name == "hc":
        return [
            ("hc_images", casimir.verify_hc_images),
            ("factorizations", rep_tables.verify_hc_factorizations),
            ("golden", partial(verify_golden, "hc_images", golden_dir)),
        ]
    if name == "uea":
        return [
            ("algebra", partial(uea.run_checks, seed)),
            ("casimir_structure", casimir.verify_casimir_structure),
            ("restriction_c1", partial(casimir.verify_scalar_restriction, "C1")),
            ("restriction_c2", partial(casimir.verify_scalar_restriction, "C2")),
            ("golden", partial(verify_golden, "structure_constants", golden_dir)),
        ]
    if name == "shift":
        return [
            ("table_golden", partial(table_golden_check, golden_dir)),
            ("composition", shift_algebra.verify_composition_example),
            ("d_operators", shift_algebra.verify_d_operators),
            ("consistency", shift_algebra.verify_consistency_identity),
            ("restrict_line", shift_algebra.verify_restrict_line),
            ("dplus_one", shift_algebra.verify_dplus_one_relation),
            ("dminus_divisibility", shift_algebra.verify_dminus_divisibility),
            ("commutators", shift_algebra.verify_commutators),
            ("associativity", partial(shift_algebra.verify_associativity, seed)),
        ]
    if name == "maass":
        return [
            ("calculus", partial(halfspace.run_checks, seed)),
            ("golden", partial(verify_golden, "maass", golden_dir)),
        ]
    if name == "sturm":
        return [
            ("integrals", partial(siegel_integrals.run_checks, tuple(options["k"]))),
            ("golden", partial(verify_golden, "sturm", golden_dir)),
        ]
    if name == "gamma-numeric":
        return [
            ("oracle", partial(
                quadrature.verify_oracle, options["tol"], options["quad_limit"], options["jacobi_nodes"]
            )),
        ]
    if name == "reptables":
        return [
            ("tables", partial(rep_tables.run_checks, options["ktype_bound"])),
            ("golden", partial(verify_golden, "rep_tables", golden_dir)),
        ]
    raise UnknownSuiteError(f"unknown suite {name!r}; expected one of {', '.join(SUITES + ('all',))}")


def expand_suites(name):
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}; expected one of {', '.join(SUITES + ('all',))}")
    return [name]


def run_suite(name, options, manifest):
    report = SuiteReport(name)
    for label, step in suite_steps(name, options):
        started = time.perf_counter()
        try:
            produced = step()
        except Exception as e:
            logger.exception("Step %s/%s raised", name, label)
            produced = CheckResult.from_error(f"{name}.{label}", f"suite step {label}", e)
        elapsed = (time.perf_counter() - started) * 1000.0
        produced = produced if isinstance(produced, list) else [produced]
        for check in produced:
            check.elapsed_ms = elapsed / len(produced)
        report.add(produced)
    apply_findings(report.checks, manifest)
    return report


def run_suites(suite="all", options=None, progress_callback=None):
    """
    Run one suite (or all) and assemble the report.

    Args:
        suite: Suite name or 'all'.
        options: Overrides for config.get_verify_defaults().
        progress_callback: Optional callable(dict) for status messages.

    Returns:
        dict: Report ready for validate_report / write_report.
    """
    emit = _create_emit_fn(progress_callback)
    opts = get_verify_defaults()
    opts.update({k: v for k, v in (options or {}).items() if v is not None})
    names = expand_suites(suite)
    manifest = load_findings_manifest()
    total = len(names)

    emit(f"Starting verification: {', '.join(names)}")
    reports = []
    jobs = max(1, int(opts["jobs"]))
    if jobs == 1 or total == 1:
        for i, name in enumerate(names, 1):
            emit(f"Suite {i}/{total}: {name} ({SUITE_DESCRIPTIONS[name]})...", stage=name)
            reports.append(run_suite(name, opts, manifest))
            emit(f"Suite {name} complete.", stage=name, counts=reports[-1].counts)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {}
            for i, name in enumerate(names, 1):
                emit(f"Suite {i}/{total}: {name} ({SUITE_DESCRIPTIONS[name]})...", stage=name)
                futures[name] = pool.submit(run_suite, name, opts, manifest)
            for name in names:
                reports.append(futures[name].result())
                emit(f"Suite {name} complete.", stage=name, counts=reports[-1].counts)

    config_echo = {
        "suite": suite,
        "tol": opts["tol"],
        "seed": opts["seed"],
        "k": list(opts["k"]),
        "ktypeBound": opts["ktype_bound"],
        "quadLimit": opts["quad_limit"],
        "jacobiNodes": opts["jacobi_nodes"],
    }
    report = build_report(reports, config_echo, timings=bool(opts["timings"]))
    emit("Verification finished.", counts=report["counts"])
    return report
