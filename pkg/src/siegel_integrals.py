"""
Exact Gamma integrals over the cone of positive definite 2x2 matrices and the
s-regularized Sturm transform built on them.

Integrands are restricted to the invariants det(TY) and tr(TY). The
substitution W = 4 pi T^(1/2) Y T^(1/2) then removes T completely, because
dY / det(Y)^(3/2) is invariant under Y -> A Y A'.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy as sp

from .exact import MultiPoly, RatFunc, minimal_offending_term
from .gamma import (
    AffineForm,
    GammaPoleError,
    GammaProduct,
    LimitResult,
    ZERO_FORM,
    gamma_limit,
    gamma_sum,
)
from .halfspace import (
    HalfExpr,
    Y_NAMES,
    delta_plus2,
    det_t,
    det_y,
    seed_term,
    trace_ty,
)
from .reports import CheckResult
from .uea import InternalConsistencyError

logger = logging.getLogger(__name__)

S_FORM = AffineForm(1, 0, 0)
K_FORM = AffineForm(0, 1, 0)
HALF = Fraction(1, 2)
OFFSETS = (-1, 0, 1)
ALTERNATE_OFFSET = -1


class NonInvariantIntegrandError(Exception):
    """Raised when an integrand term cannot be written in det(TY) and tr(TY)."""

    def __init__(self, message, monomial=None):
        super().__init__(message)
        self.monomial = monomial


class DivergentIntegralError(Exception):
    """Raised when a cone integral lies outside its convergence region."""


# -----------------------------------------------------------------------------
# Integrands
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class InvariantTerm:
    """coeff * det(TY)^det_exp * tr(TY)^trace_power * tau^tau_power * exp(-c pi tr(TY))."""

    coeff: MultiPoly
    det_exp: AffineForm
    trace_power: int = 0
    tau_power: AffineForm = ZERO_FORM
    c: int = 2

    def __str__(self):
        trace = " * tr(TY)" if self.trace_power else ""
        return f"({self.coeff}) * det(TY)^({self.det_exp}){trace} * tau^({self.tau_power}) * exp(-{self.c} pi tr(TY))"


@dataclass(frozen=True)
class InvariantIntegrand:
    terms: tuple = ()

    def is_zero(self):
        return not self.terms

    def shifted(self, exponent, extra_c=0):
        """Multiply by det(TY)^exponent * exp(-extra_c pi tr(TY))."""
        return InvariantIntegrand(tuple(
            InvariantTerm(t.coeff, t.det_exp + exponent, t.trace_power, t.tau_power, t.c + extra_c)
            for t in self.terms
        ))

    def subs_k(self, k):
        return InvariantIntegrand(tuple(
            InvariantTerm(t.coeff.subs({"k": k}), t.det_exp.at(k=k), t.trace_power, t.tau_power.at(k=k), t.c)
            for t in self.terms
        ))

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) or "0"


@dataclass(frozen=True)
class ConeTerm:
    """prefactor * integral of exp(-tr W) det(W)^det_exp tr(W)^trace_power dW / det(W)^(3/2)."""

    prefactor: GammaProduct
    det_exp: AffineForm
    trace_power: int = 0


def _peel_det_t(q):
    j = 0
    dt = det_t()
    while q.depends_on("t11") or q.depends_on("t12") or q.depends_on("t22"):
        nxt = q.exact_quotient(dt)
        if nxt is None:
            return None, j
        q, j = nxt, j + 1
    return q, j


def to_invariant_integrand(e, c=2):
    """Rewrite the exponential part of a HalfExpr in det(TY), tr(TY) and det(T).

    Every term must carry the exponential factor and no h-jet. Each homogeneous
    y-degree n of the numerator is divided by tr(TY)^(n % 2) det(Y)^(n // 2);
    the quotient must then be a power of det(T) times a y- and t-free coefficient.
    """
    terms = []
    tr, dy = trace_ty(), det_y()
    for exponent, jet, exp, poly in e.sorted_terms():
        if jet or not exp:
            raise NonInvariantIntegrandError(
                f"term det^({exponent}) needs the exponential factor and no h-jet",
                minimal_offending_term(poly),
            )
        for degree, part in poly.homogeneous_parts(Y_NAMES).items():
            b, m = degree % 2, degree // 2
            q = part.exact_quotient(tr**b * dy**m)
            if q is None or any(q.depends_on(name) for name in Y_NAMES):
                raise NonInvariantIntegrandError(
                    f"y-degree {degree} part is not tr(TY)^{b} det(Y)^{m} times a constant",
                    minimal_offending_term(part),
                )
            q, j = _peel_det_t(q)
            if q is None:
                raise NonInvariantIntegrandError(
                    f"y-degree {degree} part depends on T beyond det(T)",
                    minimal_offending_term(part),
                )
            e_y = exponent + m
            terms.append(InvariantTerm(q, e_y, b, -e_y + j, c))
    return InvariantIntegrand(tuple(terms))


def change_of_variables(integrand):
    """W = 4 pi T^(1/2) Y T^(1/2): returns ConeTerms with the (4 pi) and det(T)
    powers moved into the prefactor."""
    out = []
    for term in integrand.terms:
        if term.c != 4:
            raise ValueError(
                f"change of variables supports exp(-4 pi tr(TY)) only, got c = {term.c}"
            )
        fourpi = term.det_exp * -2 - term.trace_power
        prefactor = GammaProduct(RatFunc(term.coeff), (), fourpi, term.tau_power)
        out.append(ConeTerm(prefactor, term.det_exp, term.trace_power))
    return out


# -----------------------------------------------------------------------------
# Gamma integrals
# -----------------------------------------------------------------------------
def _as_form(e):
    return e if isinstance(e, AffineForm) else AffineForm.constant(e)


def base_integral(e, with_t=True):
    """Integral of exp(-tr(TY)) det(Y)^e dY = sqrt(pi) det(T)^(-s) Gamma(s) Gamma(s-1/2), s = e + 3/2."""
    s = _as_form(e) + Fraction(3, 2)
    tau = -s if with_t else ZERO_FORM
    try:
        return GammaProduct(RatFunc(MultiPoly.var("sqrtpi")), ((s, 1), (s - HALF, 1)), ZERO_FORM, tau) * 1
    except GammaPoleError as exc:
        raise DivergentIntegralError(f"base integral diverges at det exponent {e}: {exc}") from exc


@lru_cache(maxsize=None)
def t_derivative_multipliers():
    """Symbolic multipliers from differentiating det(T)^(-s) at T = E.

    Returns (trace multiplier, scaling multiplier, entry matrix), where the
    trace multiplier comes from -(d/dt11 + d/dt22), the scaling one from
    -d/dlam of det(lam E)^(-s) at lam = 1, and the entry matrix from the
    weighted partials -(1/2)(1 + delta_ij) d/dt_ij.
    """
    t11, t12, t22, s = sp.symbols("t11 t12 t22 s")
    lam = sp.Symbol("lam", positive=True)
    base = (t11 * t22 - t12**2) ** (-s)
    at_identity = {t11: 1, t12: 0, t22: 1}
    trace = sp.simplify(-(sp.diff(base, t11) + sp.diff(base, t22)).subs(at_identity))
    scaling = sp.simplify(-sp.diff((lam**2) ** (-s), lam).subs(lam, 1))
    weights = {(1, 1): (t11, 1), (1, 2): (t12, sp.Rational(1, 2)), (2, 2): (t22, 1)}
    entries = {
        key: sp.simplify(-w * sp.diff(base, var).subs(at_identity)) for key, (var, w) in weights.items()
    }
    return trace, scaling, entries


def _multiplier_poly(expr, s):
    return MultiPoly.from_sympy(expr).subs({"s": s.to_poly()})


def trace_moment(e):
    """Integral of exp(-tr Y) tr(Y) det(Y)^e dY (at e = s - 1 gives 2 sqrt(pi)(s+1/2)Gamma(s)Gamma(s+1/2))."""
    trace, scaling, _ = t_derivative_multipliers()
    if sp.simplify(trace - scaling) != 0:
        raise InternalConsistencyError(f"trace derivative {trace} disagrees with scaling law {scaling}")
    s = _as_form(e) + Fraction(3, 2)
    base = base_integral(e, with_t=False)
    return base * GammaProduct(RatFunc(_multiplier_poly(trace, s)))


def entrywise_moment(e):
    """Integral of exp(-tr Y) Y det(Y)^e dY = m(s) E_2; returns (m(s), entry multipliers)."""
    _, _, entries = t_derivative_multipliers()
    s = _as_form(e) + Fraction(3, 2)
    base = base_integral(e, with_t=False)
    diagonal = entries[(1, 1)]
    if sp.simplify(diagonal - entries[(2, 2)]) != 0 or sp.simplify(entries[(1, 2)]) != 0:
        raise InternalConsistencyError(f"entrywise moment is not scalar: {entries}")
    return base * GammaProduct(RatFunc(_multiplier_poly(diagonal, s))), entries


def cone_integral(det_exp, trace_power):
    """Integral of exp(-tr W) det(W)^E tr(W)^b dW / det(W)^(3/2), b in {0, 1}."""
    e = det_exp - Fraction(3, 2)
    if trace_power == 0:
        return base_integral(e, with_t=False)
    if trace_power == 1:
        return trace_moment(e)
    raise ValueError(f"trace power {trace_power} is outside the invariant class")


# -----------------------------------------------------------------------------
# Sturm transform
# -----------------------------------------------------------------------------
def normalization_constant(kappa):
    """c(kappa) = sqrt(pi) (4 pi)^(3 - kappa) Gamma(kappa - 3/2) Gamma(kappa - 2)."""
    kappa = _as_form(kappa)
    return GammaProduct(
        RatFunc(MultiPoly.var("sqrtpi")),
        ((kappa - Fraction(3, 2), 1), (kappa - 2, 1)),
        -kappa + 3,
    ) * 1


def _check_convergence(det_exp):
    if det_exp.k:
        return
    if det_exp.const < HALF:
        raise DivergentIntegralError(
            f"cone integral with det exponent {det_exp} diverges for small s > 0"
        )


def sturm_value(a, weight_shift=2, offset=0, k=None, normalized=True):
    """s-regularized Sturm transform of A(T, Y) exp(-2 pi tr(TY)).

    The weight is kappa = k + weight_shift; the regularizing power is
    det(TY)^(kappa + s - 3/2 + offset). With k given, the transform is
    specialized and checked for convergence.
    """
    integrand = a if isinstance(a, InvariantIntegrand) else to_invariant_integrand(a)
    if integrand.is_zero():
        return GammaProduct(RatFunc(0))
    kappa = K_FORM + weight_shift
    if k is not None:
        integrand = integrand.subs_k(k)
        kappa = kappa.at(k=k)
    exponent = kappa + S_FORM - Fraction(3, 2) + offset
    shifted = integrand.shifted(exponent, extra_c=2)
    pieces = []
    for term in change_of_variables(shifted):
        if k is not None:
            _check_convergence(term.det_exp)
        try:
            pieces.append(term.prefactor * cone_integral(term.det_exp, term.trace_power))
        except GammaPoleError as exc:
            raise DivergentIntegralError(str(exc)) from exc
    value = gamma_sum(pieces)
    if normalized:
        value = value / normalization_constant(kappa)
    return value


def sturm_limit(g, k=None, k_window=(1, 8)):
    """s -> 0 limit of a Sturm transform, as a LimitResult or CaseSplit."""
    return gamma_limit(g, k=k, k_window=k_window)


def phantom_image():
    """Fourier coefficient of Delta+ applied to the seed a_T exp(2 pi i tr TZ) at weight k."""
    return delta_plus2(seed_term(), K_FORM)


def closed_form(offset=0):
    """a_T tau sqrt(pi) (4 pi)^(1-2k-2s-2d) (s+d)(s+d-1/2) Gamma(s+k-1/2+d) Gamma(s+k-1+d)."""
    s = MultiPoly.var("s") + offset
    prefactor = MultiPoly.var("aT") * MultiPoly.var("tau") * MultiPoly.var("sqrtpi") * s * (s - HALF)
    return GammaProduct(
        RatFunc(prefactor),
        ((S_FORM + K_FORM - HALF + offset, 1), (S_FORM + K_FORM - 1 + offset, 1)),
        AffineForm(-2, -2, 1 - 2 * offset),
    ) * 1


def seed_sturm_limit():
    """Limit of the normalized transform of a_T exp(2 pi i tr TZ); k stands for kappa."""
    g = sturm_value(seed_term(), weight_shift=0)
    return sturm_limit(g, k_window=(3, 8))


def limit_pattern(offset, ks):
    g = sturm_value(phantom_image(), offset=offset)
    return {k: sturm_limit(g, k=k) for k in ks}


def _pattern_text(pattern):
    return {str(k): result.kind for k, result in pattern.items()}


# -----------------------------------------------------------------------------
# Checks
# -----------------------------------------------------------------------------
def _equal_check(name, citation, lhs, rhs, details=None):
    holds = lhs == rhs
    return CheckResult.predicate(
        name, citation, lhs, rhs, holds, mismatch=None if holds else f"{lhs} != {rhs}", details=details
    )


def verify_gamma_integrals():
    results = []
    two = base_integral(Fraction(1, 2), with_t=False)
    results.append(_equal_check(
        "sturm.base_integral.s2", "sqrt(pi) Gamma(2) Gamma(3/2) = pi/2", two, GammaProduct(RatFunc.parse("pihat/2"))
    ))
    s = S_FORM
    expected = GammaProduct(
        RatFunc(MultiPoly.var("sqrtpi") * (MultiPoly.var("s") + HALF) * 2), ((s, 1), (s + HALF, 1))
    ) * 1
    results.append(_equal_check(
        "sturm.trace_moment",
        "int exp(-tr Y) tr(Y) det(Y)^(s-1) dY = 2 sqrt(pi)(s+1/2) Gamma(s) Gamma(s+1/2)",
        trace_moment(s - 1),
        expected,
    ))
    trace, scaling, _ = t_derivative_multipliers()
    results.append(CheckResult.predicate(
        "sturm.trace_moment.scaling",
        "-(d/dt11 + d/dt22) det(T)^(-s) = -d/dlam lam^(-2s) at T = E",
        trace,
        scaling,
        sp.simplify(trace - scaling) == 0,
    ))
    moment, entries = entrywise_moment(s - Fraction(3, 2))
    expected = GammaProduct(RatFunc(MultiPoly.var("sqrtpi") * MultiPoly.var("s")), ((s, 1), (s - HALF, 1))) * 1
    results.append(_equal_check(
        "sturm.entrywise_moment",
        "int exp(-tr Y) Y det(Y)^(s-3/2) dY = s E_2 sqrt(pi) Gamma(s) Gamma(s-1/2)",
        moment,
        expected,
        details={"entries": {f"{i}{j}": str(v) for (i, j), v in entries.items()}},
    ))
    try:
        base_integral(Fraction(-3, 2))
        diverged = False
    except DivergentIntegralError:
        diverged = True
    results.append(CheckResult.predicate(
        "sturm.base_integral.pole", "s = 0 hits the pole of Gamma(s)", "e = -3/2", "divergent", diverged
    ))
    return results


def verify_normalization():
    results = []
    c3 = normalization_constant(3)
    results.append(_equal_check("sturm.normalization.c3", "c(3) = pi/2", c3, GammaProduct(RatFunc.parse("pihat/2"))))
    limit = seed_sturm_limit()
    value = limit.value if isinstance(limit, LimitResult) else None
    engine = GammaProduct(RatFunc(MultiPoly.var("aT")), (), AffineForm(0, -1, 0))
    results.append(_equal_check(
        "sturm.seed_normalization.engine",
        "holomorphic seed: limit of c(kappa)^-1 transform = a_T (4 pi)^(-kappa)",
        value,
        engine,
    ))
    results.append(_equal_check(
        "sturm.seed_normalization",
        "holomorphic seed: limit of c(kappa)^-1 transform = a_T",
        value,
        GammaProduct(RatFunc(MultiPoly.var("aT"))),
    ))
    return results


def verify_sturm(ks=(1, 2, 3, 4, 5)):
    results = []
    image = phantom_image()
    raw = sturm_value(image, normalized=False)
    results.append(_equal_check(
        "sturm.closed_form",
        "transform of Delta+ seed = unit * s(s-1/2) Gamma(s+k-1/2) Gamma(s+k-1)",
        raw,
        closed_form(0),
    ))
    factor = GammaProduct(
        RatFunc.parse("s*(s - 1/2)"), ((S_FORM + K_FORM - HALF, 1), (S_FORM + K_FORM - 1, 1))
    )
    quotient = raw / factor
    kinds = {}
    for k in ks:
        kinds[str(k)] = sturm_limit(quotient, k=k).kind
    results.append(CheckResult.predicate(
        "sturm.factorization",
        "quotient by s(s-1/2) Gamma(s+k-1/2) Gamma(s+k-1) is a unit at s = 0",
        str(quotient),
        "finite nonzero for every k",
        all(kind == "finite" for kind in kinds.values()),
        details={"kinds": kinds},
    ))
    normalized = sturm_value(image)
    for k in ks:
        result = sturm_limit(normalized, k=k)
        if k == 1:
            expected = LimitResult("finite", GammaProduct(RatFunc.parse("-aT*tau/(4*pihat)")))
            citation = "k = 1: the limit is -(1/4 pi) a(T) det(T)"
        else:
            expected = LimitResult("zero")
            citation = "k > 1: the limit vanishes"
        results.append(CheckResult.predicate(
            f"sturm.limit.k{k}", citation, result, expected, result == expected
        ))
    bare = GammaProduct(RatFunc.parse("s*(s - 1/2)"), ((S_FORM + HALF, 1), (S_FORM, 1)))
    bare_limit = sturm_limit(bare, k=1)
    expected = LimitResult("finite", GammaProduct(RatFunc.parse("-sqrtpi/2")))
    results.append(CheckResult.predicate(
        "sturm.bare_limit", "lim s(s-1/2) Gamma(s+1/2) Gamma(s) = -1/2 Gamma(1/2)", bare_limit, expected, bare_limit == expected
    ))
    alternate = sturm_value(image, offset=ALTERNATE_OFFSET, normalized=False)
    results.append(_equal_check(
        "sturm.alternate_exponent",
        "alternate exponent det(TY)^(k-1/2+s) reproduces s(s-1/2) Gamma(s+k-1/2) Gamma(s+k-1)",
        alternate,
        closed_form(0),
        details={"engineClosedForm": str(closed_form(ALTERNATE_OFFSET))},
    ))
    results.extend(verify_offset_stability(ks))
    return results


def verify_offset_stability(ks=(1, 2, 3, 4, 5)):
    results = []
    reference = _pattern_text(limit_pattern(0, ks))
    for offset in OFFSETS:
        if offset == 0:
            continue
        raw = sturm_value(phantom_image(), offset=offset, normalized=False)
        label = "minus1" if offset < 0 else "plus1"
        results.append(_equal_check(
            f"sturm.offset_closed_form.{label}",
            f"offset {offset:+d} shifts s by {offset:+d} in the closed form",
            raw,
            closed_form(offset),
        ))
        pattern = _pattern_text(limit_pattern(offset, ks))
        results.append(CheckResult.predicate(
            f"sturm.offset_stability.{label}",
            "vanishing pattern (zero iff k > 1) is stable under exponent offsets",
            pattern,
            reference,
            pattern == reference,
            details={"offset": offset, "pattern": pattern, "reference": reference},
        ))
    return results


def verify_converter():
    results = []
    converted = to_invariant_integrand(phantom_image())
    results.append(CheckResult.predicate(
        "sturm.converter.phantom",
        "Delta+ seed coefficient is a combination of det(TY) and tr(TY)",
        str(converted),
        "three invariant terms",
        len(converted.terms) == 3,
    ))
    bad = HalfExpr.poly(MultiPoly.var("y11"), exp=True)
    try:
        to_invariant_integrand(bad)
        rejected, monomial = False, None
    except NonInvariantIntegrandError as exc:
        rejected, monomial = True, exc.monomial
    results.append(CheckResult.predicate(
        "sturm.converter.rejects",
        "y11 exp(2 pi i tr TZ) is not invariant",
        str(bad),
        "NonInvariantIntegrandError",
        rejected,
        details={"monomial": monomial},
    ))
    try:
        sturm_value(phantom_image(), k=1, offset=ALTERNATE_OFFSET)
        diverged = False
    except DivergentIntegralError:
        diverged = True
    results.append(CheckResult.predicate(
        "sturm.divergence.k1_minus1",
        "k = 1 with offset -1 lies outside the convergence region",
        "k=1, offset=-1",
        "divergent",
        diverged,
    ))
    return results


def run_checks(ks=(1, 2, 3, 4, 5)):
    logger.info("Running Siegel integral checks for k in %s", list(ks))
    results = []
    results += verify_gamma_integrals()
    results += verify_normalization()
    results += verify_converter()
    results += verify_sturm(ks)
    return results
