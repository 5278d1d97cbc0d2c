"""
Central configuration for the Casimir verifier.

All tunable settings (data paths, tolerances, seeds, parallelism) live here.
Override via environment variables where noted.
"""

import os

ENGINE_VERSION = "1.0.0"
REPORT_SCHEMA_VERSION = "1"

# -----------------------------------------------------------------------------
# Paths (relative to project root)
# -----------------------------------------------------------------------------
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

def get_data_paths(base_dir=None):
    """Return dict of data paths. Use base_dir for tests or overrides."""
    root = base_dir if base_dir is not None else BASE_DIR
    goldens = os.environ.get("CASIMIR_GOLDEN_DIR", "").strip() or os.path.join(root, "data", "goldens")
    return {
        "goldens": goldens,
        "schema": os.path.join(root, "data", "report_schema.json"),
        "findings": os.path.join(root, "data", "findings_manifest.json"),
        "reports": os.path.join(root, "data", "reports"),
    }


# -----------------------------------------------------------------------------
# Suites, in the order `verify all` announces them
# -----------------------------------------------------------------------------
SUITES = ("hc", "uea", "shift", "maass", "sturm", "gamma-numeric", "reptables")


# -----------------------------------------------------------------------------
# Numeric checks: relative tolerance and QUADPACK subdivision limit.
# The Gauss-Jacobi order controls the inner direction of the cone quadrature.
# -----------------------------------------------------------------------------
NUMERIC_TOL = float(os.environ.get("CASIMIR_TOL", "1e-6").strip() or "1e-6")
QUAD_LIMIT = int(os.environ.get("CASIMIR_QUAD_LIMIT", "200").strip() or "200")
JACOBI_NODES = 64


# -----------------------------------------------------------------------------
# Randomized property checks (associativity, PBW images, mixed partials)
# -----------------------------------------------------------------------------
SEED = int(os.environ.get("CASIMIR_SEED", "20240229").strip() or "20240229")


# -----------------------------------------------------------------------------
# Parallel suites; 1 keeps everything on the calling thread.
# -----------------------------------------------------------------------------
JOBS = int(os.environ.get("CASIMIR_JOBS", "1").strip() or "1")


# -----------------------------------------------------------------------------
# Sturm limits are taken for these weights; the K-type scan runs up to the bound.
# -----------------------------------------------------------------------------
STURM_WEIGHTS = (1, 2, 3, 4, 5)
KTYPE_SCAN_BOUND = 50


# -----------------------------------------------------------------------------
# Timings: elapsedMs stays null unless enabled, so reports are byte-identical.
# Set CASIMIR_TIMINGS=1 to record them.
# -----------------------------------------------------------------------------
TIMINGS = os.environ.get("CASIMIR_TIMINGS", "").lower() in ("1", "true", "yes")


def get_verify_defaults():
    """Default options for a verification run (read once per call)."""
    return {
        "tol": NUMERIC_TOL,
        "seed": SEED,
        "jobs": JOBS,
        "k": list(STURM_WEIGHTS),
        "ktype_bound": KTYPE_SCAN_BOUND,
        "quad_limit": QUAD_LIMIT,
        "jacobi_nodes": JACOBI_NODES,
        "timings": TIMINGS,
        "golden_dir": get_data_paths()["goldens"],
    }
