"""
Skew shift operators on the Poincare family P(g, u, v).

An operator is a sparse map shift (du, dv) -> coefficient polynomial in
u, v, pihat, tau. Composition is skew: in f o g the coefficients of f are
evaluated at parameters already moved by the shift of g.
"""

import logging
import random
from fractions import Fraction

from .exact import MultiPoly, minimal_offending_term
from .reports import CheckResult

logger = logging.getLogger(__name__)

# -----------------------------------------------------------------------------
# Transcribed action tables (s1 = (v-2u-1)/2, s2 = (u-1)/2, pi = pihat, tau = det T)
# -----------------------------------------------------------------------------
C1_TABLE = {
    (0, 0): "4*(s1**2 + 2*s1*s2 + 2*s2**2 + 2*s1 + 3*s2)",
    (0, 2): "-16*pi*(s1 + s2)",
    (2, 0): "-8*tau*s1*(s1 - 1)",
    (2, 2): "32*pi*tau*s1",
}

C2_TABLE = {
    (0, 0): "17*u**4 + 2*v**4 - 12*u*v**3 + 30*u**2*v**2 - 36*u**3*v + 15*u**2 + 6*v**2 - 18*u*v - 32",
    (0, 4): "256*pi**2*(s1 + s2)*(s1 + s2 + 1)",
    (0, 2): "-128*pi*(s1 + s2)*((s1 + s2)**2 + 3*(s1 + s2) + 23/8)",
    (4, 0): "32*tau**2*s1*(s1 - 1)*(s1 - 2)*(s1 - 3)",
    (4, 2): "-256*pi*tau**2*s1*(s1 - 1)*(s1 - 2)",
    (2, 0): "-16*tau*s1*(s1 - 1)*(7*u**2 + 3*v**2 - 9*u*v - u + 7/2)",
    (4, 4): "512*pi**2*tau**2*s1*(s1 - 1)",
    (2, 2): "-64*pi*tau*s1*(4*u**2 - 3*u*v - 10*u + 9*v - 8)",
    (2, 4): "-256*pi**2*tau*(s1 + s2)*(4*s1 + 2*s2 + 1)",
}

DPLUS_DISPLAY = {
    (4, 0): "16*tau**2*s1*(s1 - 1)*(s1 - 2)*(s1 - 3)",
    (4, 2): "-128*pi*tau**2*s1*(s1 - 1)*(s1 - 2)",
    (4, 4): "256*pi**2*tau**2*s1*(s1 - 1)",
    (2, 0): "8*tau*s1*(s1 - 1)*(u + 1)*(v - 2)",
    (2, 2): "-32*pi*tau*s1*(6*s1*s2 + 3*s1 + 8*s2**2 - 8)",
    (2, 4): "64*pi**2*tau*(v - u - 2)*(u - 2)",
}

DMINUS_DISPLAY = {
    (0, 4): "64*pi**2*(v - u)*(v - u - 2)",
    (0, 2): "32*pi*(u - 1)*(v + 1)*(v - u - 2)",
    (2, 2): "128*pi*tau*s1*(s1 - 2)*(v + 1)",
    (2, 4): "-256*pi**2*tau*(v - u - 2)**2",
}

LINE_SURVIVOR = ((2, 4), "64*pi**2*tau*(u - 1)*(u - 2)")


class ShiftOperator:
    """Sparse shift operator; coefficients are MultiPoly values."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for shift, coeff in (terms or {}).items():
            du, dv = shift
            if du < 0 or dv < 0 or du % 2 or dv % 2:
                raise ValueError(f"shifts must be even and nonnegative, got {shift}")
            if not isinstance(coeff, MultiPoly):
                coeff = MultiPoly.const(coeff)
            if not coeff.is_zero():
                clean[(du, dv)] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ShiftOperator is immutable")

    @classmethod
    def identity(cls):
        return cls({(0, 0): 1})

    @classmethod
    def multiplication(cls, coeff):
        return cls({(0, 0): coeff})

    @classmethod
    def from_table(cls, table):
        return cls({shift: MultiPoly.parse(text) for shift, text in table.items()})

    def is_zero(self):
        return not self.terms

    def coefficient(self, shift):
        return self.terms.get(tuple(shift), MultiPoly.const(0))

    def shifts(self):
        return sorted(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for shift, coeff in _as_operator(other).terms.items():
            out[shift] = out.get(shift, MultiPoly.const(0)) + coeff
        return ShiftOperator(out)

    __radd__ = __add__

    def __neg__(self):
        return ShiftOperator({s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_operator(other))

    def __rsub__(self, other):
        return _as_operator(other) - self

    def scale(self, coeff):
        """Right composition with a multiplication operator: coefficients are
        multiplied at the base parameters."""
        return ShiftOperator({s: c * coeff for s, c in self.terms.items()})

    def __mul__(self, coeff):
        if isinstance(coeff, ShiftOperator):
            return compose(self, coeff)
        return self.scale(coeff)

    __rmul__ = scale

    def __matmul__(self, other):
        return compose(self, other)

    def __pow__(self, n):
        result = ShiftOperator.identity()
        for _ in range(n):
            result = compose(self, result)
        return result

    def __eq__(self, other):
        if not isinstance(other, ShiftOperator):
            other = _as_operator(other)
        return self.terms == other.terms

    __hash__ = None

    def subs(self, mapping):
        return ShiftOperator({s: c.subs(mapping) for s, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"[{c}]*P(u+{du},v+{dv})" for (du, dv), c in sorted(self.terms.items()))

    def __repr__(self):
        return f"ShiftOperator({self})"


def _as_operator(value):
    if isinstance(value, ShiftOperator):
        return value
    return ShiftOperator.multiplication(value)


def _shift_params(coeff, shift):
    du, dv = shift
    if not du and not dv:
        return coeff
    u, v = MultiPoly.var("u"), MultiPoly.var("v")
    return coeff.subs({"u": u + du, "v": v + dv})


def compose(f, g):
    """(f o g)_w = sum over s + t = w of g_t(u, v) * f_s(u + t_u, v + t_v)."""
    out = {}
    for t, g_t in g.terms.items():
        for s, f_s in f.terms.items():
            w = (s[0] + t[0], s[1] + t[1])
            out[w] = out.get(w, MultiPoly.const(0)) + g_t * _shift_params(f_s, t)
    return ShiftOperator(out)


def commutator(f, g):
    return compose(f, g) - compose(g, f)


# -----------------------------------------------------------------------------
# Casimir rules and the D operators
# -----------------------------------------------------------------------------
def casimir_rule(which):
    if which == "C1":
        return ShiftOperator.from_table(C1_TABLE)
    if which == "C2":
        return ShiftOperator.from_table(C2_TABLE)
    raise ValueError(f"unknown Casimir {which!r}; expected C1 or C2")


def display_operator(which):
    table = {"Dplus": DPLUS_DISPLAY, "Dminus": DMINUS_DISPLAY}[which]
    return ShiftOperator.from_table(table)


def _param(value, name):
    return MultiPoly.var(name) if value is None else MultiPoly.const(value)


def dplus_op(u=None, c2=None):
    """D+(u) = 1/2 (C1^2 - C2 + 11 C1 - 2(u^2-1) C1 + 2(u^2-1)(u^2-4))."""
    c1 = casimir_rule("C1")
    c2 = casimir_rule("C2") if c2 is None else c2
    uu = _param(u, "u")
    a = uu * uu - 1
    body = compose(c1, c1) - c2 + c1 * 11 - c1.scale(a * 2) + ShiftOperator.multiplication(a * (uu * uu - 4) * 2)
    return body.scale(Fraction(1, 2))


def dminus_op(v=None, c2=None):
    """D-(v) = 2 C2 - C1^2 - 34 C1 - 2(v^2-9) C1 + (v^2-9)(v^2-1)."""
    c1 = casimir_rule("C1")
    c2 = casimir_rule("C2") if c2 is None else c2
    vv = _param(v, "v")
    b = vv * vv - 9
    return c2 * 2 - compose(c1, c1) - c1 * 34 - c1.scale(b * 2) + ShiftOperator.multiplication(b * (vv * vv - 1))


def reconciled_c2_rule():
    """C2 recovered from C1 and the D+ display: C1^2 + (13-2u^2) C1 + 2(u^2-1)(u^2-4) - 2 D+."""
    c1 = casimir_rule("C1")
    u = MultiPoly.var("u")
    return (
        compose(c1, c1)
        + c1.scale(13 - u * u * 2)
        + ShiftOperator.multiplication((u * u - 1) * (u * u - 4) * 2)
        - display_operator("Dplus") * 2
    )


def restrict_line(op):
    """Substitute v = 2u + 1 into every coefficient; zero coefficients drop."""
    u = MultiPoly.var("u")
    restricted = op.subs({"v": u * 2 + 1})
    return [(shift, restricted.terms[shift]) for shift in restricted.shifts()]


def _operator_details(residual):
    if residual.is_zero():
        return {}
    shift = residual.shifts()[0]
    coeff = residual.terms[shift]
    return {
        "offendingShift": list(shift),
        "offendingCoefficient": str(coeff),
        "minimalTerm": minimal_offending_term(coeff),
        "residualShifts": [list(s) for s in residual.shifts()],
    }


def _operator_check(name, citation, lhs, rhs):
    residual = lhs - rhs
    return CheckResult.compare(name, citation, lhs, rhs, residual, details=_operator_details(residual))


# -----------------------------------------------------------------------------
# Verifications
# -----------------------------------------------------------------------------
def verify_composition_example():
    c1 = casimir_rule("C1")
    got = compose(c1, c1).coefficient((0, 4))
    expected = MultiPoly.parse("256*pi**2*(s1 + s2)*(s1 + s2 + 1)")
    return CheckResult.compare(
        "shift.compose.c1c1_shift04",
        "C1 o C1 at shift (0,4) equals the C2 coefficient 256 pi^2 (s1+s2)(s1+s2+1)",
        got,
        expected,
        got - expected,
    )


def verify_d_operators():
    results = []
    printed = casimir_rule("C2")
    reconciled = reconciled_c2_rule()
    for label, c2 in (("printed_table", printed), ("reconciled_table", reconciled)):
        if label == "printed_table":
            results.append(
                _operator_check(
                    "shift.dplus.printed_table",
                    "D+(u) display from the C1 and C2 action tables",
                    dplus_op(c2=c2),
                    display_operator("Dplus"),
                )
            )
        results.append(
            _operator_check(
                f"shift.dminus.{label}",
                "D-(v) display from the C1 and C2 action tables",
                dminus_op(c2=c2),
                display_operator("Dminus"),
            )
        )
    results.append(
        _operator_check(
            "shift.c2_table.printed_vs_reconciled",
            "C2 action table against C2 recovered from C1 and the D+ display",
            printed,
            reconciled,
        )
    )
    return results


def verify_consistency_identity():
    """C1^2 + (10-4u^2-2v^2) C1 + 4(u^2-1)(u^2-4) + (v^2-9)(v^2-1) - 4 D+ = D-."""
    c1 = casimir_rule("C1")
    u, v = MultiPoly.var("u"), MultiPoly.var("v")
    lhs = (
        compose(c1, c1)
        + c1.scale(10 - u * u * 4 - v * v * 2)
        + ShiftOperator.multiplication((u * u - 1) * (u * u - 4) * 4 + (v * v - 9) * (v * v - 1))
        - display_operator("Dplus") * 4
    )
    return _operator_check(
        "shift.consistency_identity",
        "D+ and D- displays tied together through the C1 table alone",
        lhs,
        display_operator("Dminus"),
    )


def _line_check(name, op):
    terms = restrict_line(op)
    shift, text = LINE_SURVIVOR
    expected = ShiftOperator({shift: MultiPoly.parse(text)})
    got = ShiftOperator(dict(terms))
    return _operator_check(
        name,
        "D+(u) P(., u, 2u+1) = 64 pi^2 det(T) (u-1)(u-2) P(g, u+2, 2u+5)",
        got,
        expected,
    )


def verify_restrict_line():
    return [
        _line_check("shift.restrict_line.reconciled_table", dplus_op(c2=reconciled_c2_rule())),
        _line_check("shift.restrict_line.display", display_operator("Dplus")),
        _line_check("shift.restrict_line.printed_table", dplus_op(c2=casimir_rule("C2"))),
    ]


def verify_dplus_one_relation(c2=None):
    c2 = reconciled_c2_rule() if c2 is None else c2
    c1 = casimir_rule("C1")
    u = MultiPoly.var("u")
    a = u * u - 1
    correction = (c1 - ShiftOperator.multiplication(u * u - 4)).scale(a)
    d_u, d_1 = dplus_op(c2=c2), dplus_op(1, c2=c2)
    results = [
        _operator_check(
            "shift.dplus_one.as_printed",
            "D+(1) = D+(u) - (u^2-1)(C1 - (u^2-4))",
            d_1,
            d_u - correction,
        ),
        _operator_check(
            "shift.dplus_one.corrected",
            "D+(1) = D+(u) + (u^2-1)(C1 - (u^2-4))",
            d_1,
            d_u + correction,
        ),
    ]
    at_one = (d_u - correction).subs({"u": 1})
    results.append(
        _operator_check("shift.dplus_one.at_u1", "both sides coincide at u = 1", d_1.subs({"u": 1}), at_one)
    )
    return results


def verify_dminus_divisibility(c2=None):
    c2 = reconciled_c2_rule() if c2 is None else c2
    diff = dminus_op(c2=c2) - dminus_op(3, c2=c2)
    v = MultiPoly.var("v")
    divisor = v * v - 9
    quotients = {}
    bad = []
    for shift, coeff in diff.terms.items():
        q = coeff.exact_quotient(divisor)
        if q is None:
            bad.append(shift)
        else:
            quotients[shift] = q
    expected = (ShiftOperator.multiplication(v * v - 1) - casimir_rule("C1") * 2)
    got = ShiftOperator(quotients)
    holds = not bad and got == expected
    return CheckResult.predicate(
        "shift.dminus_divisibility",
        "D-(v) - D-(3) is divisible by (v^2-9) as an operator polynomial",
        got,
        expected,
        holds,
        mismatch=f"non-divisible shifts {bad}" if bad else str(got - expected),
    )


def verify_commutators():
    c1 = casimir_rule("C1")
    results = []
    for label, c2 in (("printed_table", casimir_rule("C2")), ("reconciled_table", reconciled_c2_rule())):
        results.append(
            _operator_check(
                f"shift.commutator.{label}",
                "C1, C2 are central, so [C1, C2] acts as 0",
                commutator(c1, c2),
                ShiftOperator(),
            )
        )
    results.append(
        _operator_check("shift.commutator.c1c1", "[C1, C1] = 0", commutator(c1, c1), ShiftOperator())
    )
    return results


def random_operator(rng, n_terms=3, max_shift=4):
    u, v = MultiPoly.var("u"), MultiPoly.var("v")
    terms = {}
    for _ in range(n_terms):
        shift = (2 * rng.randint(0, max_shift // 2), 2 * rng.randint(0, max_shift // 2))
        coeff = u * rng.randint(-3, 3) + v * rng.randint(-3, 3) + rng.randint(-5, 5)
        terms[shift] = terms.get(shift, MultiPoly.const(0)) + coeff
    return ShiftOperator(terms)


def verify_associativity(seed, samples=20):
    rng = random.Random(seed)
    failures = []
    for i in range(samples):
        f, g, h = (random_operator(rng) for _ in range(3))
        if compose(compose(f, g), h) != compose(f, compose(g, h)):
            failures.append(i)
    return CheckResult.predicate(
        "shift.compose.associativity",
        "skew composition is associative",
        f"{samples - len(failures)}/{samples} associative",
        f"{samples}/{samples} associative",
        not failures,
        mismatch=f"non-associative samples {failures}",
    )
