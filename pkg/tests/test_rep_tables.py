from fractions import Fraction

import pytest

from src.exact import ExactScalar
from src.rep_tables import (
    NotDominantError,
    beta,
    blattner,
    dominant_representative,
    first_coordinate_candidates,
    hc_factorization_sides,
    in_cone,
    infinitesimal_characters,
    ktype_occurs,
    ktype_scan,
    langlands_enumerate,
    m0_check,
    parity_excludes,
    run_checks,
    tables_payload,
    weyl_orbit,
)


@pytest.mark.parametrize("lam, size", [((2, 1), 8), ((1, 1), 4), ((0, 0), 1), ((3, 0), 4)])
def test_weyl_orbit_sizes(lam, size):
    assert len(weyl_orbit(lam)) == size


def test_dominant_representative():
    assert dominant_representative((-1, 2)) == (2, 1)
    assert dominant_representative((Fraction(1, 2), -3)) == (3, Fraction(1, 2))


def test_beta():
    assert beta("Delta1+") == (1, 2)
    assert beta("Delta2+") == (1, 0)


def test_blattner_requires_dominance():
    assert blattner((2, 1), "Delta1+") == (3, 3)
    with pytest.raises(NotDominantError):
        blattner((1, 1), "Delta1+")


def test_cone_membership_is_integral():
    gens = ((0, 2), (1, -1))
    assert in_cone((2, 0), gens)
    assert not in_cone((1, 0), gens)
    assert not in_cone((-2, 0), gens)


def test_ktype_scan():
    assert ktype_scan(bound=50) == [2]


def test_candidate_three_minus_one_does_not_reach_target():
    assert not ktype_occurs((3, -1), (3, 3), "Delta2+")
    [candidate] = first_coordinate_candidates()
    assert candidate["lambda"] == (2, -1)
    assert candidate["k"] == (3, -1)
    assert candidate["occurs"] is False


@pytest.mark.parametrize("kappa, excluded", [(3, True), (5, True), (4, False)])
def test_parity(kappa, excluded):
    assert parity_excludes(kappa) is excluded


def test_hc_factorizations():
    for lhs, rhs in hc_factorization_sides().values():
        assert lhs == rhs


def test_langlands_characters():
    candidates = langlands_enumerate()
    assert infinitesimal_characters(candidates) == [(1, -1), (1, 0), (1, 2), (2, 1)]
    assert {c["parabolic"] for c in candidates} == {"siegel", "klingen", "borel"}
    siegel = [c for c in candidates if c["parabolic"] == "siegel"]
    assert [c["sigma"] for c in siegel] == ["sigma_2^+"]


def test_m0():
    check = m0_check()
    assert check["detCiD"] == ExactScalar(0, -1)
    assert check["cube"] == ExactScalar(0, 1)
    assert check["inverseCube"] == ExactScalar(0, -1)
    assert check["modulus"] == ExactScalar(1)
    assert check["symplectic"]


def test_tables_payload_shape():
    payload = tables_payload(bound=10)
    assert payload["ktypeScan"]["hits"] == [2]
    assert payload["m0"]["cube"] == "I"
    assert len(payload["assumptions"]) == 3


def test_run_checks_pass():
    results = run_checks(bound=20)
    assert {r.status for r in results} == {"pass"}
