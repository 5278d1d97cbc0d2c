from fractions import Fraction

import pytest

from src.exact import MultiPoly, RatFunc
from src.gamma import AffineForm, GammaProduct, LimitResult, ZERO_FORM
from src.halfspace import HalfExpr
from src.siegel_integrals import (
    S_FORM,
    DivergentIntegralError,
    InvariantIntegrand,
    InvariantTerm,
    NonInvariantIntegrandError,
    base_integral,
    change_of_variables,
    closed_form,
    limit_pattern,
    normalization_constant,
    phantom_image,
    run_checks,
    seed_sturm_limit,
    sturm_limit,
    sturm_value,
    to_invariant_integrand,
    trace_moment,
)

EXPECTED_FAILURES = {
    "sturm.seed_normalization",
    "sturm.alternate_exponent",
    "sturm.offset_stability.minus1",
    "sturm.offset_stability.plus1",
}


def test_base_integral_at_s2():
    assert base_integral(Fraction(1, 2), with_t=False) == GammaProduct(RatFunc.parse("pihat/2"))


def test_base_integral_pole():
    with pytest.raises(DivergentIntegralError):
        base_integral(Fraction(-3, 2))


def test_trace_moment_closed_form():
    s = S_FORM
    expected = GammaProduct(
        RatFunc(MultiPoly.var("sqrtpi") * (MultiPoly.var("s") + Fraction(1, 2)) * 2),
        ((s, 1), (s + Fraction(1, 2), 1)),
    )
    assert trace_moment(s - 1) == expected


def test_normalization_constant_c3():
    assert normalization_constant(3) == GammaProduct(RatFunc.parse("pihat/2"))


def test_change_of_variables_needs_four_pi():
    term = InvariantTerm(MultiPoly.const(1), AffineForm.constant(1), 0, ZERO_FORM, 2)
    with pytest.raises(ValueError):
        change_of_variables(InvariantIntegrand((term,)))


def test_converter_on_phantom_image():
    converted = to_invariant_integrand(phantom_image())
    assert len(converted.terms) == 3
    assert {t.trace_power for t in converted.terms} == {0, 1}


def test_converter_rejects_bare_entry():
    with pytest.raises(NonInvariantIntegrandError) as info:
        to_invariant_integrand(HalfExpr.poly(MultiPoly.var("y11"), exp=True))
    assert info.value.monomial is not None


def test_converter_needs_the_exponential():
    with pytest.raises(NonInvariantIntegrandError):
        to_invariant_integrand(HalfExpr.one())


def test_closed_form():
    assert sturm_value(phantom_image(), normalized=False) == closed_form(0)


@pytest.mark.parametrize("offset", [-1, 1])
def test_offsets_shift_the_closed_form(offset):
    assert sturm_value(phantom_image(), offset=offset, normalized=False) == closed_form(offset)


def test_limit_at_weight_one():
    result = sturm_limit(sturm_value(phantom_image()), k=1)
    assert result == LimitResult("finite", GammaProduct(RatFunc.parse("-aT*tau/(4*pihat)")))


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_limit_vanishes_above_weight_one(k):
    assert sturm_limit(sturm_value(phantom_image()), k=k).kind == "zero"


def test_symbolic_limit_splits_at_weight_one():
    result = sturm_limit(sturm_value(phantom_image()), k_window=(1, 5))
    assert result.generic.kind == "zero"
    assert result.for_k(1).kind == "finite"


def test_offset_patterns():
    assert {k: r.kind for k, r in limit_pattern(-1, (1, 2, 3)).items()} == {1: "pole", 2: "pole", 3: "finite"}
    assert {r.kind for r in limit_pattern(1, (1, 2, 3, 4, 5)).values()} == {"finite"}


def test_divergent_weight_and_offset():
    with pytest.raises(DivergentIntegralError):
        sturm_value(phantom_image(), k=1, offset=-1)


def test_seed_limit_keeps_four_pi_power():
    limit = seed_sturm_limit()
    assert limit.kind == "finite"
    assert limit.value == GammaProduct(RatFunc(MultiPoly.var("aT")), (), AffineForm(0, -1, 0))


def test_run_checks_statuses():
    results = run_checks((1, 2, 3))
    failed = {r.name for r in results if r.status != "pass"}
    assert failed == EXPECTED_FAILURES
    assert {"sturm.limit.k1", "sturm.limit.k3", "sturm.bare_limit"} <= {r.name for r in results}
