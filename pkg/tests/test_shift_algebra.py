import pytest

from src.exact import MultiPoly
from src.shift_algebra import (
    LINE_SURVIVOR,
    ShiftOperator,
    casimir_rule,
    commutator,
    compose,
    display_operator,
    dplus_op,
    random_operator,
    reconciled_c2_rule,
    restrict_line,
    verify_associativity,
    verify_commutators,
    verify_composition_example,
    verify_consistency_identity,
    verify_d_operators,
    verify_dminus_divisibility,
    verify_dplus_one_relation,
    verify_restrict_line,
)

U = MultiPoly.var("u")


def _statuses(results):
    return {r.name: r.status for r in results}


def test_shifts_must_be_even_and_nonnegative():
    with pytest.raises(ValueError):
        ShiftOperator({(1, 0): 1})
    with pytest.raises(ValueError):
        ShiftOperator({(0, -2): 1})


def test_zero_coefficients_drop():
    op = ShiftOperator({(0, 2): 0, (2, 0): U})
    assert op.shifts() == [(2, 0)]


def test_composition_is_skew():
    f = ShiftOperator({(0, 2): U})
    g = ShiftOperator({(2, 0): U})
    assert compose(f, g).coefficient((2, 2)) == U * (U + 2)
    assert compose(g, f).coefficient((2, 2)) == U * U
    assert commutator(f, g) == ShiftOperator({(2, 2): U * 2})


def test_identity_is_neutral():
    c1 = casimir_rule("C1")
    assert compose(ShiftOperator.identity(), c1) == c1
    assert compose(c1, ShiftOperator.identity()) == c1


def test_associativity_on_random_operators(rng):
    for _ in range(5):
        f, g, h = (random_operator(rng) for _ in range(3))
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_c1_square_shift04():
    check = verify_composition_example()
    assert check.status == "pass"


def test_unknown_rule():
    with pytest.raises(ValueError):
        casimir_rule("C3")


def test_printed_c2_table_differs_in_three_shifts():
    results = {r.name: r for r in verify_d_operators()}
    mismatch = results["shift.c2_table.printed_vs_reconciled"]
    assert mismatch.status == "fail"
    assert mismatch.details["residualShifts"] == [[0, 0], [2, 0], [2, 2]]
    assert results["shift.dminus.reconciled_table"].status == "pass"
    assert results["shift.dplus.printed_table"].status == "fail"
    assert results["shift.dminus.printed_table"].status == "fail"


def test_reconciled_table_reproduces_dplus_display():
    assert dplus_op(c2=reconciled_c2_rule()) == display_operator("Dplus")


def test_consistency_identity():
    assert verify_consistency_identity().status == "pass"


def test_restrict_line_single_survivor():
    terms = restrict_line(display_operator("Dplus"))
    shift, text = LINE_SURVIVOR
    assert [s for s, _ in terms] == [shift]
    assert terms[0][1] == MultiPoly.parse(text)
    statuses = _statuses(verify_restrict_line())
    assert statuses == {
        "shift.restrict_line.reconciled_table": "pass",
        "shift.restrict_line.display": "pass",
        "shift.restrict_line.printed_table": "fail",
    }


def test_dplus_one_relation_sign():
    assert _statuses(verify_dplus_one_relation()) == {
        "shift.dplus_one.as_printed": "fail",
        "shift.dplus_one.corrected": "pass",
        "shift.dplus_one.at_u1": "pass",
    }


def test_dminus_divisibility():
    assert verify_dminus_divisibility().status == "pass"


def test_commutators():
    assert _statuses(verify_commutators()) == {
        "shift.commutator.printed_table": "fail",
        "shift.commutator.reconciled_table": "pass",
        "shift.commutator.c1c1": "pass",
    }


def test_associativity_check():
    check = verify_associativity(seed=3, samples=5)
    assert check.status == "pass"
