"""
Golden files: canonical serializations of engine outputs under data/goldens.

Stored goldens are compared by value (parsed back into exact objects), never
by bytes. `dump_goldens` regenerates them deterministically.
"""

import json
import logging
import os

import sympy as sp

from .casimir import hc_image
from .config import get_data_paths
from .exact import MultiPoly, RatFunc
from .gamma import GammaProduct, LimitResult, format_gamma, parse_gamma
from .halfspace import HalfExpr, delta_minus2, delta_plus2, seed_image
from .rep_tables import dminus_polynomial, dplus_polynomial, hc_casimir_images, tables_payload
from .reports import CheckResult
from .shift_algebra import C1_TABLE, C2_TABLE, DMINUS_DISPLAY, DPLUS_DISPLAY
from .siegel_integrals import (
    HALF,
    S_FORM,
    normalization_constant,
    phantom_image,
    seed_sturm_limit,
    sturm_limit,
    sturm_value,
)
from .uea import LETTERS, format_structure_constants

logger = logging.getLogger(__name__)

GOLDEN_FILES = {
    "structure_constants": "structure_constants.txt",
    "shift_tables": "shift_tables.json",
    "hc_images": "hc_images.json",
    "maass": "maass.json",
    "sturm": "sturm.json",
    "rep_tables": "rep_tables.json",
}

TRANSCRIBED_TABLES = {
    "C1": C1_TABLE,
    "C2": C2_TABLE,
    "Dplus": DPLUS_DISPLAY,
    "Dminus": DMINUS_DISPLAY,
}


class GoldenMismatchError(Exception):
    """Raised when a stored golden disagrees with the engine value."""

    def __init__(self, name, key, stored, computed):
        super().__init__(f"{name}: {key} differs (stored {stored}, engine {computed})")
        self.name = name
        self.key = key
        self.stored = stored
        self.computed = computed


def golden_path(name, golden_dir=None):
    if name not in GOLDEN_FILES:
        raise KeyError(f"unknown golden {name!r}; expected one of {sorted(GOLDEN_FILES)}")
    folder = golden_dir or get_data_paths()["goldens"]
    return os.path.join(folder, GOLDEN_FILES[name])


def load_golden(name, golden_dir=None):
    path = golden_path(name, golden_dir)
    with open(path, "r", encoding="utf-8") as f:
        if path.endswith(".json"):
            return json.load(f)
        return f.read()


# -----------------------------------------------------------------------------
# Engine payloads
# -----------------------------------------------------------------------------
def _shift_key(shift):
    return f"{shift[0]},{shift[1]}"


def shift_tables_payload():
    return {
        table: {_shift_key(shift): str(MultiPoly.parse(text)) for shift, text in rows.items()}
        for table, rows in TRANSCRIBED_TABLES.items()
    }


def hc_images_payload():
    c1, c2 = hc_casimir_images()
    return {
        "C1": str(hc_image("C1")),
        "C2": str(hc_image("C2")),
        "Dplus": str(dplus_polynomial(c1, c2)),
        "Dminus": str(dminus_polynomial(c1, c2)),
    }


def maass_payload():
    h = HalfExpr.jet_h()
    plus = delta_plus2(h, 1)
    return {
        "seedImage": seed_image().to_records(),
        "deltaPlusH": plus.to_records(),
        "deltaMinusDeltaPlusH": delta_minus2(plus).to_records(),
    }


def _limit_text(result):
    if isinstance(result, LimitResult) and result.kind == "finite":
        return format_gamma(result.value)
    return str(result)


def sturm_payload():
    bare = GammaProduct(RatFunc.parse("s*(s - 1/2)"), ((S_FORM + HALF, 1), (S_FORM, 1)))
    return {
        "phantomClosedForm": format_gamma(sturm_value(phantom_image(), normalized=False)),
        "k1Limit": _limit_text(sturm_limit(sturm_value(phantom_image()), k=1)),
        "bareLimit": _limit_text(sturm_limit(bare, k=1)),
        "c3": format_gamma(normalization_constant(3)),
        "seedLimit": _limit_text(seed_sturm_limit()),
    }


def golden_payloads():
    return {name: build() for name, build in _builders().items()}


def render(payload):
    if isinstance(payload, str):
        return payload
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def dump_goldens(path):
    """Write every golden into `path`; returns the written file paths."""
    os.makedirs(path, exist_ok=True)
    written = []
    for name, payload in golden_payloads().items():
        target = os.path.join(path, GOLDEN_FILES[name])
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(render(payload))
        written.append(target)
        logger.info("Golden written: %s", target)
    return written


# -----------------------------------------------------------------------------
# Comparison by value
# -----------------------------------------------------------------------------
def _parse_structure_constants(text):
    symbols = {tag: sp.Symbol(tag) for tag in LETTERS}
    table = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        lhs, _, rhs = line.partition("=")
        table[lhs.strip()] = sp.sympify(rhs.strip(), locals=symbols)
    return table


def _compare_keys(name, stored, computed, same):
    for key in sorted(set(stored) | set(computed)):
        if key not in stored or key not in computed:
            raise GoldenMismatchError(name, key, stored.get(key, "<missing>"), computed.get(key, "<missing>"))
        if not same(stored[key], computed[key]):
            raise GoldenMismatchError(name, key, stored[key], computed[key])


def _same_poly(a, b):
    return MultiPoly.parse(a) == MultiPoly.parse(b)


def _same_limit(a, b):
    if ";" in a and ";" in b:
        return parse_gamma(a) == parse_gamma(b)
    return a == b


def compare_golden(name, stored, computed):
    """Raise GoldenMismatchError on the first key whose values differ."""
    if name == "structure_constants":
        _compare_keys(
            name,
            _parse_structure_constants(stored),
            _parse_structure_constants(computed),
            lambda a, b: sp.expand(a - b) == 0,
        )
    elif name == "shift_tables":
        for table in sorted(set(stored) | set(computed)):
            _compare_keys(f"{name}.{table}", stored.get(table, {}), computed.get(table, {}), _same_poly)
    elif name == "hc_images":
        _compare_keys(name, stored, computed, _same_poly)
    elif name == "maass":
        _compare_keys(name, stored, computed, lambda a, b: HalfExpr.from_records(a) == HalfExpr.from_records(b))
    elif name == "sturm":
        _compare_keys(name, stored, computed, _same_limit)
    else:
        _compare_keys(name, stored, json.loads(render(computed)), lambda a, b: a == b)


def verify_golden(name, golden_dir=None):
    citation = f"engine output matches data/goldens/{GOLDEN_FILES[name]}"
    try:
        stored = load_golden(name, golden_dir)
        compare_golden(name, stored, _builders()[name]())
    except (GoldenMismatchError, OSError, ValueError) as exc:
        details = {}
        if isinstance(exc, GoldenMismatchError):
            details = {"key": exc.key, "stored": exc.stored, "engine": exc.computed}
        check = CheckResult.from_error(f"goldens.{name}", citation, exc)
        check.details.update(details)
        return check
    return CheckResult.predicate(f"goldens.{name}", citation, GOLDEN_FILES[name], "engine value", True)


def _builders():
    return {
        "structure_constants": format_structure_constants,
        "shift_tables": shift_tables_payload,
        "hc_images": hc_images_payload,
        "maass": maass_payload,
        "sturm": sturm_payload,
        "rep_tables": tables_payload,
    }


def table_golden_check(golden_dir=None):
    """Transcribed C1/C2/D+/D- tables against the stored shift_tables golden."""
    name = "shift.table_golden"
    citation = "transcribed action tables agree with data/goldens/shift_tables.json"
    try:
        stored = load_golden("shift_tables", golden_dir)
    except (OSError, ValueError) as exc:
        return CheckResult.from_error(name, citation, exc)
    for table, rows in TRANSCRIBED_TABLES.items():
        stored_rows = stored.get(table, {})
        keys = sorted(set(stored_rows) | {_shift_key(s) for s in rows})
        for key in keys:
            shift = tuple(int(x) for x in key.split(","))
            engine = MultiPoly.parse(rows[shift]) if shift in rows else MultiPoly.const(0)
            golden = MultiPoly.parse(stored_rows[key]) if key in stored_rows else MultiPoly.const(0)
            if engine != golden:
                residual = engine - golden
                return CheckResult.compare(
                    name,
                    citation,
                    engine,
                    golden,
                    residual,
                    details={"table": table, "shift": [shift[0], shift[1]], "offendingCoefficient": str(golden)},
                )
    return CheckResult.predicate(name, citation, "transcribed tables", "golden tables", True)
