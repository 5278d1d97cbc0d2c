from fractions import Fraction

import pytest

from src.exact import (
    I_UNIT,
    ExactScalar,
    MultiPoly,
    RatFunc,
    RegistryMismatchError,
    fold_sqrtpi,
    get_registry,
    minimal_offending_term,
)


def test_gaussian_rationals():
    assert I_UNIT * I_UNIT == ExactScalar(-1)
    assert ExactScalar(1, 2) * ExactScalar(1, -2) == ExactScalar(5)
    assert ExactScalar(3) / ExactScalar(0, 1) == ExactScalar(0, -3)
    assert ExactScalar(Fraction(1, 2)) + Fraction(1, 2) == 1
    assert ExactScalar(2, 1).conjugate() == ExactScalar(2, -1)


def test_scalar_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ExactScalar(1) / ExactScalar(0)


def test_scalars_are_immutable():
    x = ExactScalar(1)
    with pytest.raises(AttributeError):
        x.re = Fraction(2)


def test_parse_aliases():
    s1 = MultiPoly.parse("s1")
    assert s1 == MultiPoly.parse("(v - 2*u - 1)/2")
    assert MultiPoly.parse("s2") * 2 == MultiPoly.var("u") - 1
    assert MultiPoly.parse("pi**2") == MultiPoly.var("pihat") ** 2


@pytest.mark.parametrize(
    "text",
    [
        "3/2*u**2*v - tau + 7",
        "I*pihat*y11 - (1 + I)*aT",
        "-256*pi**2*tau*(s1 + s2)*(4*s1 + 2*s2 + 1)",
        "0",
    ],
)
def test_canonical_text_parses_back(text):
    p = MultiPoly.parse(text)
    assert MultiPoly.parse(str(p)) == p


def test_parse_rejects_unknown_symbols():
    with pytest.raises(ValueError):
        MultiPoly.parse("w + 1")


def test_registry_mismatch():
    other = get_registry(("x", "y"))
    with pytest.raises(RegistryMismatchError):
        MultiPoly.var("x", other) + MultiPoly.var("u")


def test_exact_quotient():
    p = MultiPoly.parse("u**2 - 1")
    assert p.exact_quotient(MultiPoly.parse("u - 1")) == MultiPoly.parse("u + 1")
    assert p.exact_quotient(MultiPoly.parse("u - 2")) is None


def test_homogeneous_parts():
    p = MultiPoly.parse("y11*y22 - y12**2 + 3*y11 + tau")
    parts = p.homogeneous_parts(("y11", "y12", "y22"))
    assert parts[2] == MultiPoly.parse("y11*y22 - y12**2")
    assert parts[1] == MultiPoly.parse("3*y11")
    assert parts[0] == MultiPoly.var("tau")


def test_ratfunc_cancels_exact_denominators():
    r = RatFunc(MultiPoly.parse("u**2 - 1"), MultiPoly.parse("u - 1"))
    assert r.is_polynomial()
    assert r == RatFunc(MultiPoly.parse("u + 1"))


def test_ratfunc_compares_by_cross_multiplication():
    assert RatFunc.parse("1/(2*u)") == RatFunc(MultiPoly.const(1), MultiPoly.parse("2*u"))
    assert RatFunc.parse("u/(u*v)") == RatFunc.parse("1/v")
    assert RatFunc.parse("1/u") + RatFunc.parse("1/v") == RatFunc.parse("(u + v)/(u*v)")


def test_ratfunc_reduces_common_content():
    r = RatFunc(MultiPoly.parse("2*u"), MultiPoly.parse("4*u*v"))
    assert r.num == MultiPoly.parse("1/2")
    assert r.den == MultiPoly.parse("v")
    assert str(r) == str(RatFunc(MultiPoly.const(1), MultiPoly.parse("2*v")))
    s = RatFunc(MultiPoly.parse("u**3 + u**2"), MultiPoly.parse("3*u*v"))
    assert s.num == MultiPoly.parse("(u**2 + u)/3")
    assert s.den == MultiPoly.parse("v")


def test_ratfunc_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RatFunc(MultiPoly.var("u"), MultiPoly.const(0))


@pytest.mark.parametrize(
    "text, order",
    [("s**2/(s + 1)", 2), ("1/s", -1), ("(s + 3)/(s - 1)", 0)],
)
def test_lowest_order(text, order):
    assert RatFunc.parse(text).lowest_order("s")[0] == order


def test_fold_sqrtpi():
    p = MultiPoly.parse("sqrtpi**3*u")
    assert fold_sqrtpi(p) == MultiPoly.parse("pihat*sqrtpi*u")


def test_minimal_offending_term():
    assert minimal_offending_term(MultiPoly.const(0)) == "0"
    p = MultiPoly.parse("u**3 + 5")
    assert MultiPoly.parse(minimal_offending_term(p)) == MultiPoly.const(5)
