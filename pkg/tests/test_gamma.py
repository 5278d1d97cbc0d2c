from fractions import Fraction

import mpmath
import pytest

from src.exact import MultiPoly, RatFunc
from src.gamma import (
    AffineForm,
    CaseSplit,
    GammaPoleError,
    GammaProduct,
    LimitResult,
    exact_gamma,
    format_gamma,
    gamma_limit,
    gamma_normalize,
    parse_gamma,
)

S = AffineForm(1, 0, 0)
S_PLUS_K = AffineForm(1, 1, 0)


@pytest.mark.parametrize(
    "c, rational, sqrtpi",
    [
        (1, 1, 0),
        (4, 6, 0),
        (Fraction(1, 2), 1, 1),
        (Fraction(5, 2), Fraction(3, 4), 1),
        (Fraction(-1, 2), -2, 1),
        (Fraction(-3, 2), Fraction(4, 3), 1),
    ],
)
def test_exact_gamma(c, rational, sqrtpi):
    assert exact_gamma(c) == (Fraction(rational), sqrtpi)


@pytest.mark.parametrize("c", [0, -1, -4])
def test_exact_gamma_poles(c):
    with pytest.raises(GammaPoleError):
        exact_gamma(c)


def test_exact_gamma_outside_half_integers():
    with pytest.raises(ValueError):
        exact_gamma(Fraction(1, 3))


@pytest.mark.parametrize("text", ["s + k - 1/2", "-2*s", "3/2", "k - 1"])
def test_affine_form_text(text):
    form = AffineForm.parse(text)
    assert AffineForm.parse(str(form)) == form


def test_affine_form_parse_values():
    form = AffineForm.parse("s + k - 1/2")
    assert (form.s, form.k, form.const) == (1, 1, Fraction(-1, 2))
    assert form.at(k=2) == AffineForm(1, 0, Fraction(3, 2))


def test_affine_slopes_must_be_integers():
    with pytest.raises(ValueError):
        AffineForm(Fraction(1, 2), 0, 0)


def test_normalize_applies_the_functional_equation():
    shifted = GammaProduct(RatFunc(1), ((S + 1, 1),))
    expected = GammaProduct(RatFunc(MultiPoly.var("s")), ((S, 1),))
    assert shifted == expected
    assert gamma_normalize(shifted).factors == ((S, 1),)


def test_normalize_evaluates_constant_arguments():
    g = GammaProduct(RatFunc(1), ((AffineForm.constant(Fraction(3, 2)), 1),))
    assert g == GammaProduct(RatFunc.parse("sqrtpi/2"))


def test_normalize_folds_four_pi_powers():
    g = GammaProduct(RatFunc(1), (), AffineForm.constant(2))
    assert g == GammaProduct(RatFunc.parse("16*pihat**2"))


def test_inverse_cancels():
    g = GammaProduct(RatFunc(MultiPoly.var("s")), ((S, 1), (S + Fraction(1, 2), 1)), AffineForm(-2, 0, 1))
    assert g / g == GammaProduct(RatFunc(1))


def test_addition_requires_matching_shapes():
    a = GammaProduct(RatFunc(1), ((S, 1),))
    b = GammaProduct(RatFunc(1), ((S + Fraction(1, 2), 1),))
    assert a + a == GammaProduct(RatFunc(2), ((S, 1),))
    with pytest.raises(ValueError):
        a + b


def test_numeric_matches_mpmath():
    g = GammaProduct(RatFunc(MultiPoly.var("sqrtpi")), ((S, 1), (S - Fraction(1, 2), 1)))
    value = g.numeric({"s": 2.5})
    expected = mpmath.sqrt(mpmath.pi) * mpmath.gamma(2.5) * mpmath.gamma(2.0)
    assert abs(value - expected) < 1e-12


def test_limit_of_bare_product():
    bare = GammaProduct(RatFunc.parse("s*(s - 1/2)"), ((S + Fraction(1, 2), 1), (S, 1)))
    result = gamma_limit(bare, k=1)
    assert result == LimitResult("finite", GammaProduct(RatFunc.parse("-sqrtpi/2")))


def test_limit_kinds():
    assert gamma_limit(GammaProduct(RatFunc(1), ((S, 1),)), k=1) == LimitResult("pole", order=1)
    assert gamma_limit(GammaProduct(RatFunc(MultiPoly.var("s") ** 2), ((S, 1),)), k=1).kind == "zero"
    assert gamma_limit(GammaProduct(RatFunc(0)), k=3).kind == "zero"


def test_symbolic_weight_limit_splits_cases():
    # s * Gamma(s + k - 1): zero for k > 1, Gamma(1) = 1 at k = 1
    g = GammaProduct(RatFunc(MultiPoly.var("s")), ((S_PLUS_K - 1, 1),))
    result = gamma_limit(g, k_window=(1, 4))
    assert isinstance(result, CaseSplit)
    assert result.generic.kind == "zero"
    assert result.for_k(1) == LimitResult("finite", GammaProduct(RatFunc(1)))
    assert result.for_k(3).kind == "zero"


def test_gamma_text_parses_back():
    g = GammaProduct(
        RatFunc.parse("aT*tau*sqrtpi*s*(s - 1/2)"),
        ((S_PLUS_K - Fraction(1, 2), 1), (S_PLUS_K - 1, 1)),
        AffineForm(-2, -2, 1),
    )
    text = format_gamma(g)
    assert parse_gamma(text) == g
    assert text.startswith("prefactor: ")


def test_parse_gamma_requires_every_field():
    with pytest.raises(ValueError):
        parse_gamma("prefactor: 1; gamma: -")
