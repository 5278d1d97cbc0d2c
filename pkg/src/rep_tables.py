"""
Finite representation-theoretic tables for Sp_2(R): Weyl orbits, Blattner
parameters, K-type cone membership, the Langlands-quotient candidates and the
m0 determinant.
"""

import logging
from fractions import Fraction
from itertools import product

import sympy as sp

from .exact import ExactScalar, MultiPoly
from .reports import CheckResult

logger = logging.getLogger(__name__)

ROOTS = ((0, 2), (0, -2), (1, 1), (1, -1), (-1, 1), (-1, -1), (2, 0), (-2, 0))
POSITIVE_SYSTEMS = {
    "Delta1+": ((0, 2), (1, -1), (1, 1), (2, 0)),
    "Delta2+": ((0, -2), (1, -1), (1, 1), (2, 0)),
}
COMPACT_POSITIVE = ((1, -1),)
# K-type cone generators used in the discrete-series argument
CONE_GENERATORS = {
    "Delta1+": ((0, 2), (1, -1)),
    "Delta2+": ((1, 1), (0, -2)),
}
DELTA = (2, 1)
EISENSTEIN_BOUND = 5


class NotDominantError(Exception):
    """Raised when a Blattner parameter is requested for a non-dominant weight."""


def weight(a, b):
    return (Fraction(a), Fraction(b))


def _fmt(w):
    return [int(x) if Fraction(x).denominator == 1 else str(x) for x in w]


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _neg(a):
    return (-a[0], -a[1])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


# -----------------------------------------------------------------------------
# Weyl group
# -----------------------------------------------------------------------------
def simple_reflections():
    """Reflections in the simple roots (1,-1) (swap) and (0,2) (negate the second entry)."""
    return (
        lambda w: (w[1], w[0]),
        lambda w: (w[0], -w[1]),
    )


def weyl_orbit(lam):
    lam = weight(*lam)
    seen = {lam}
    frontier = [lam]
    while frontier:
        w = frontier.pop()
        for reflect in simple_reflections():
            image = reflect(w)
            if image not in seen:
                seen.add(image)
                frontier.append(image)
    return seen


def dominant_representative(lam):
    a, b = sorted((abs(Fraction(x)) for x in lam), reverse=True)
    return (a, b)


def in_orbit_of_one(lam):
    """True when lam is Weyl conjugate to some (1, s)."""
    return any(abs(Fraction(x)) == 1 for x in lam)


# -----------------------------------------------------------------------------
# Harish-Chandra factorizations
# -----------------------------------------------------------------------------
def hc_casimir_images():
    l1, l2 = MultiPoly.var("Lambda1"), MultiPoly.var("Lambda2")
    c1 = l1**2 + l2**2 - 5
    c2 = l1**4 + l2**4 - 17 + c1 * 3
    return c1, c2


def dplus_polynomial(c1, c2, u=None):
    """1/2 (C1^2 - C2 + 11 C1 - 2(u^2-1) C1 + 2(u^2-1)(u^2-4))."""
    u = MultiPoly.var("u") if u is None else u
    a = u * u - 1
    return (c1 * c1 - c2 + c1 * 11 - c1 * a * 2 + a * (u * u - 4) * 2).scale(Fraction(1, 2))


def dminus_polynomial(c1, c2, v=None):
    """2 C2 - C1^2 - 34 C1 - 2(v^2-9) C1 + (v^2-9)(v^2-1)."""
    v = MultiPoly.var("v") if v is None else v
    b = v * v - 9
    return c2 * 2 - c1 * c1 - c1 * 34 - c1 * b * 2 + b * (v * v - 1)


def hc_factorization_sides():
    c1, c2 = hc_casimir_images()
    l1, l2 = MultiPoly.var("Lambda1"), MultiPoly.var("Lambda2")
    u, v = MultiPoly.var("u"), MultiPoly.var("v")
    return {
        "dplus": (dplus_polynomial(c1, c2), (l1**2 - u**2) * (l2**2 - u**2)),
        "dminus": (dminus_polynomial(c1, c2), ((l1 + l2) ** 2 - v**2) * ((l1 - l2) ** 2 - v**2)),
    }


def verify_hc_factorizations():
    results = []
    citations = {
        "dplus": "D+(u, Lambda) = (Lambda1^2 - u^2)(Lambda2^2 - u^2)",
        "dminus": "D-(v, Lambda) = ((Lambda1+Lambda2)^2 - v^2)((Lambda1-Lambda2)^2 - v^2)",
    }
    for name, (lhs, rhs) in hc_factorization_sides().items():
        results.append(CheckResult.compare(f"reptables.hc_factorization.{name}", citations[name], lhs, rhs, lhs - rhs))
    lhs = hc_factorization_sides()["dplus"][0].subs({"Lambda1": 2, "Lambda2": 1, "u": 1})
    results.append(CheckResult.compare(
        "reptables.hc_factorization.root_point", "Lambda = (2,1), u = 1 is a root of D+", lhs, 0, lhs
    ))
    return results


# -----------------------------------------------------------------------------
# Blattner parameters and K-types
# -----------------------------------------------------------------------------
def beta(system):
    """1/2 sum of the positive roots minus the sum of the compact positive roots."""
    roots = POSITIVE_SYSTEMS[system]
    total = (sum(r[0] for r in roots), sum(r[1] for r in roots))
    compact = (sum(r[0] for r in COMPACT_POSITIVE), sum(r[1] for r in COMPACT_POSITIVE))
    return (Fraction(total[0], 2) - compact[0], Fraction(total[1], 2) - compact[1])


def is_dominant(lam, system):
    return all(_dot(lam, alpha) > 0 for alpha in POSITIVE_SYSTEMS[system])


def blattner(lam, system):
    lam = weight(*lam)
    if not is_dominant(lam, system):
        raise NotDominantError(f"{_fmt(lam)} is not dominant regular for {system}")
    return _add(lam, beta(system))


def cone_coordinates(diff, generators):
    """Solve diff = n1 g1 + n2 g2 exactly; returns (n1, n2) or None if singular."""
    (a, c), (b, d) = generators
    det = Fraction(a * d - b * c)
    if det == 0:
        return None
    x, y = diff
    return ((x * d - b * y) / det, (a * y - c * x) / det)


def in_cone(diff, generators):
    coords = cone_coordinates(diff, generators)
    return coords is not None and all(n >= 0 and n.denominator == 1 for n in coords)


def ktype_occurs(k, target, system):
    """target or -target lies in k + Z>=0 g1 + Z>=0 g2."""
    k, target = weight(*k), weight(*target)
    gens = CONE_GENERATORS[system]
    return in_cone(_sub(target, k), gens) or in_cone(_sub(_neg(target), k), gens)


def ktype_scan(system="Delta1+", bound=50, target=(3, 3), second=1):
    """Lambda1 in [2, bound] with Lambda = (Lambda1, second) whose discrete series carries target."""
    hits = []
    for l1 in range(2, bound + 1):
        lam = weight(l1, second)
        if not is_dominant(lam, system):
            continue
        if ktype_occurs(blattner(lam, system), target, system):
            hits.append(l1)
    return hits


def first_coordinate_candidates(system="Delta2+", bound=50, target=(3, 3), second=-1):
    """Lambda = (Lambda1, second) whose Blattner parameter matches target in the first entry."""
    out = []
    for l1 in range(2, bound + 1):
        lam = weight(l1, second)
        if not is_dominant(lam, system):
            continue
        k = blattner(lam, system)
        if abs(k[0]) == abs(Fraction(target[0])):
            out.append({"lambda": lam, "k": k, "occurs": ktype_occurs(k, target, system)})
    return out


def parity_excludes(kappa, start=2, step=2):
    """An odd scalar K-type kappa cannot occur when every (K cap M)-type lies in start + step Z."""
    return (kappa - start) % step != 0


# -----------------------------------------------------------------------------
# Langlands quotients
# -----------------------------------------------------------------------------
def _half_grid(limit):
    return [Fraction(n, 2) for n in range(0, 2 * limit + 1)]


def _siegel(limit):
    # Lambda = (n + z, -n + z), z integral with 0 <= z <= 1, n odd
    out = []
    for n, z in product(range(1, 2 * limit + 1, 2), (0, 1)):
        lam = weight(n + z, -n + z)
        if in_orbit_of_one(lam):
            out.append({"lambda": lam, "nu": f"{z}(e1-e2)", "sigma": f"sigma_{n + 1}^+"})
    return out


def _klingen(limit):
    # Lambda = (2z, 2n) with 2z = 1 up to Weyl conjugation; Eisenstein bound |Lambda|^2 <= |delta|^2
    out = []
    for n in range(0, limit + 1):
        lam = weight(1, 2 * n)
        if _dot(lam, lam) <= EISENSTEIN_BOUND:
            out.append({"lambda": lam, "nu": "e1/2", "sigma": f"sigma_{n}"})
    return out


def _borel(limit):
    # real nu = (z1, z2) with z1 >= z2 >= 0 and z1 + z2 <= 1, or nu = (2, 1) with sigma = 1
    out = []
    grid = _half_grid(limit)
    for z1, z2 in product(grid, grid):
        lam = (z1, z2)
        unitary = (z1 >= z2 and z1 + z2 <= 1) or lam == weight(2, 1)
        if unitary and in_orbit_of_one(lam):
            out.append({"lambda": lam, "nu": _fmt(lam), "sigma": "1"})
    return out


def langlands_enumerate(limit=4):
    """Candidate Langlands quotients per parabolic with their infinitesimal characters."""
    cases = {"siegel": _siegel(limit), "klingen": _klingen(limit), "borel": _borel(limit)}
    out = []
    for parabolic, entries in cases.items():
        for entry in entries:
            out.append({
                "parabolic": parabolic,
                "lambda": _fmt(entry["lambda"]),
                "dominant": _fmt(dominant_representative(entry["lambda"])),
                "nu": entry["nu"],
                "sigma": entry["sigma"],
            })
    return out


def infinitesimal_characters(candidates):
    return sorted({tuple(c["lambda"]) for c in candidates})


# -----------------------------------------------------------------------------
# m0
# -----------------------------------------------------------------------------
def m0_matrix():
    return sp.Matrix([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]])


def symplectic_form():
    return sp.Matrix([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])


def m0_check():
    """det(Ci + D) and its cube for m0 in block form [[A, B], [C, D]]."""
    m = m0_matrix()
    c, d = m[2:, :2], m[2:, 2:]
    j = sp.expand((c * sp.I + d).det())
    cube = sp.expand(j**3)
    return {
        "detCiD": ExactScalar.of(j),
        "cube": ExactScalar.of(cube),
        "inverseCube": ExactScalar(1) / ExactScalar.of(cube),
        "modulus": ExactScalar.of(j) * ExactScalar.of(j).conjugate(),
        "symplectic": m.T * symplectic_form() * m == symplectic_form(),
    }


def assumptions():
    return [
        {
            "name": "same infinitesimal character",
            "statement": "a K-type shared by two discrete series forces equal infinitesimal characters; used to drop k = (3,-1)",
        },
        {
            "name": "unitarity classification",
            "statement": "the unitary Langlands quotients are those of the classification for Sp_2(R)",
        },
        {
            "name": "Frobenius reciprocity parity",
            "statement": "the (K cap M)-types of the relevant induced representations lie in 2 + 2Z",
        },
    ]


def tables_payload(bound=50):
    candidates = langlands_enumerate()
    m0 = m0_check()
    return {
        "beta": {name: _fmt(beta(name)) for name in POSITIVE_SYSTEMS},
        "ktypeScan": {"system": "Delta1+", "target": [3, 3], "bound": bound, "hits": ktype_scan(bound=bound)},
        "firstCoordinateCandidates": [
            {"lambda": _fmt(c["lambda"]), "k": _fmt(c["k"]), "occurs": c["occurs"]}
            for c in first_coordinate_candidates(bound=bound)
        ],
        "langlands": candidates,
        "infinitesimalCharacters": [list(x) for x in infinitesimal_characters(candidates)],
        "m0": {key: str(value) for key, value in m0.items()},
        "assumptions": assumptions(),
    }


# -----------------------------------------------------------------------------
# Checks
# -----------------------------------------------------------------------------
def verify_root_datum():
    results = []
    closed = all(_neg(r) in ROOTS for r in ROOTS)
    results.append(CheckResult.predicate("reptables.roots.negation", "roots are closed under negation", len(ROOTS), 8, closed))
    for name, system in POSITIVE_SYSTEMS.items():
        one_each = all((r in system) != (_neg(r) in system) for r in ROOTS)
        results.append(CheckResult.predicate(
            f"reptables.roots.{name}", "one root of each pair +-alpha", list(system), "4 roots", one_each
        ))
    for lam, size in (((2, 1), 8), ((0, 0), 1), ((1, 1), 4)):
        orbit = weyl_orbit(lam)
        closed = all(reflect(w) in orbit for w in orbit for reflect in simple_reflections())
        results.append(CheckResult.predicate(
            f"reptables.weyl_orbit.{lam[0]}_{lam[1]}",
            "orbit under signed permutations",
            len(orbit),
            size,
            len(orbit) == size and closed,
        ))
    return results


def verify_blattner(bound=50):
    results = []
    for name, expected in (("Delta1+", (1, 2)), ("Delta2+", (1, 0))):
        b = beta(name)
        results.append(CheckResult.predicate(
            f"reptables.beta.{name}", "beta = 1/2 sum of positive roots - sum of compact ones", _fmt(b), list(expected), b == weight(*expected)
        ))
    k = blattner((2, 1), "Delta1+")
    results.append(CheckResult.predicate(
        "reptables.blattner.2_1", "Lambda = (2,1) has minimal K-type (3,3)", _fmt(k), [3, 3], k == weight(3, 3)
    ))
    k = blattner((5, -1), "Delta2+")
    results.append(CheckResult.predicate(
        "reptables.blattner.delta2", "Lambda = (Lambda1,-1) gives k = (Lambda1+1,-1)", _fmt(k), [6, -1], k == weight(6, -1)
    ))
    hits = ktype_scan(bound=bound)
    results.append(CheckResult.predicate(
        "reptables.ktype_scan", "(3,3) occurs for Lambda = (Lambda1, 1) only at Lambda1 = 2", hits, [2], hits == [2],
        details={"bound": bound},
    ))
    candidates = first_coordinate_candidates(bound=bound)
    found = [(_fmt(c["lambda"]), _fmt(c["k"]), c["occurs"]) for c in candidates]
    results.append(CheckResult.predicate(
        "reptables.ktype.delta2_candidate",
        "Delta2+ can carry (3,3) at most for k = (3,-1)",
        found,
        [([2, -1], [3, -1], False)],
        found == [([2, -1], [3, -1], False)],
        details={"note": "cone membership of (3,3) over k = (3,-1) fails outright"},
    ))
    results.append(CheckResult.predicate(
        "reptables.parity", "odd K-type 3 is excluded when (K cap M)-types lie in 2 + 2Z", 3, "excluded", parity_excludes(3)
    ))
    return results


def verify_langlands():
    candidates = langlands_enumerate()
    chars = [list(x) for x in infinitesimal_characters(candidates)]
    expected = [[1, -1], [1, 0], [1, 2], [2, 1]]
    by_parabolic = {}
    for c in candidates:
        by_parabolic.setdefault(c["parabolic"], []).append(c["lambda"])
    return [CheckResult.predicate(
        "reptables.langlands",
        "Siegel (1,-1); Klingen (1,0), (1,2); Borel (1,0), (2,1)",
        chars,
        expected,
        chars == expected,
        details={"byParabolic": by_parabolic},
    )]


def verify_m0():
    data = m0_check()
    results = [
        CheckResult.predicate("reptables.m0.det", "det(Ci + D) = -i", data["detCiD"], "-I", data["detCiD"] == ExactScalar(0, -1)),
        CheckResult.predicate("reptables.m0.cube", "det^3 = +-i", data["cube"], "+-I", data["cube"] in (ExactScalar(0, 1), ExactScalar(0, -1))),
        CheckResult.predicate("reptables.m0.modulus", "|det(Ci + D)| = 1", data["modulus"], 1, data["modulus"] == 1),
        CheckResult.predicate("reptables.m0.symplectic", "m0 preserves the symplectic form", data["symplectic"], True, data["symplectic"]),
    ]
    return results


def run_checks(bound=50):
    logger.info("Running representation tables with K-type bound %d", bound)
    results = []
    results += verify_root_datum()
    results += verify_hc_factorizations()
    results += verify_blattner(bound)
    results += verify_langlands()
    results += verify_m0()
    return results
