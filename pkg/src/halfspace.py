"""
Symbolic calculus on the genus-2 Siegel upper half-space.

A HalfExpr is a sum of terms det(Y)^e * N(y, t, k, s, ...) * [exp(2 pi i tr TZ)] * h^(jet),
where e is affine in k and s, N is a polynomial and h is a formal holomorphic
function whose weighted Z-derivatives are recorded as a jet of index pairs.
Terms whose exponents differ by integers are merged and then reduced so that
N is never divisible by det(Y) = y11*y22 - y12**2.
"""

import logging
import random
from fractions import Fraction

from .exact import I_UNIT, ExactScalar, MultiPoly
from .gamma import AffineForm, ZERO_FORM
from .reports import CheckResult

logger = logging.getLogger(__name__)

INDICES = ((1, 1), (1, 2), (2, 2))
Y_NAMES = ("y11", "y12", "y22")
T_NAMES = ("t11", "t12", "t22")
OPS = ("dZ", "dZbar", "dY")


def det_y():
    y11, y12, y22 = (MultiPoly.var(n) for n in Y_NAMES)
    return y11 * y22 - y12 * y12


def det_t():
    t11, t12, t22 = (MultiPoly.var(n) for n in T_NAMES)
    return t11 * t22 - t12 * t12


def trace_ty():
    y11, y12, y22 = (MultiPoly.var(n) for n in Y_NAMES)
    t11, t12, t22 = (MultiPoly.var(n) for n in T_NAMES)
    return t11 * y11 + t12 * y12 * 2 + t22 * y22


def _y(i, j):
    return MultiPoly.var(f"y{i}{j}")


def _t(i, j):
    return MultiPoly.var(f"t{i}{j}")


def _weight(i, j):
    return Fraction(1) if i == j else Fraction(1, 2)


def _norm_jet(jet):
    return tuple(sorted(tuple(sorted(p)) for p in jet))


class HalfExpr:
    """Canonical sum of half-space terms keyed by (det exponent, jet, exp flag)."""

    __slots__ = ("terms",)

    def __init__(self, raw=None):
        object.__setattr__(self, "terms", _canonical(raw or []))

    def __setattr__(self, name, value):
        raise AttributeError("HalfExpr is immutable")

    # construction ----------------------------------------------------------
    @classmethod
    def poly(cls, p, det_exp=ZERO_FORM, jet=(), exp=False):
        if not isinstance(p, MultiPoly):
            p = MultiPoly.const(p)
        return cls([(det_exp, _norm_jet(jet), exp, p)])

    @classmethod
    def one(cls):
        return cls.poly(1)

    @classmethod
    def det_power(cls, e):
        return cls.poly(1, det_exp=e)

    @classmethod
    def exp_term(cls, coeff=1):
        return cls.poly(coeff, exp=True)

    @classmethod
    def jet_h(cls, jet=(), coeff=1):
        return cls.poly(coeff, jet=jet)

    def raw_terms(self):
        return [(e, jet, exp, p) for (e, jet, exp), p in self.terms.items()]

    def sorted_terms(self):
        return sorted(self.raw_terms(), key=lambda t: (t[2], t[1], t[0]))

    # arithmetic ------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        other = _as_half(other)
        return HalfExpr(self.raw_terms() + other.raw_terms())

    __radd__ = __add__

    def __neg__(self):
        return HalfExpr([(e, j, x, -p) for e, j, x, p in self.raw_terms()])

    def __sub__(self, other):
        return self + (-_as_half(other))

    def __rsub__(self, other):
        return _as_half(other) - self

    def __mul__(self, other):
        if isinstance(other, (MultiPoly, int, Fraction, ExactScalar)):
            return HalfExpr([(e, j, x, p * other) for e, j, x, p in self.raw_terms()])
        other = _as_half(other)
        out = []
        for e1, j1, x1, p1 in self.raw_terms():
            for e2, j2, x2, p2 in other.raw_terms():
                if j1 and j2:
                    raise ValueError("product of two h-jets is outside the linear calculus")
                if x1 and x2:
                    raise ValueError("product of two exponential factors is not supported")
                out.append((e1 + e2, _norm_jet(j1 + j2), x1 or x2, p1 * p2))
        return HalfExpr(out)

    __rmul__ = __mul__

    def mul_det(self, e):
        """Multiply by det(Y)^e."""
        return HalfExpr([(d + e, j, x, p) for d, j, x, p in self.raw_terms()])

    def subs(self, mapping):
        """Substitute numeric k and/or s (in exponents and polynomials)."""
        k, s = mapping.get("k"), mapping.get("s")
        poly_map = {name: value for name, value in mapping.items()}
        return HalfExpr([
            (e.at(s=s, k=k), j, x, p.subs(poly_map)) for e, j, x, p in self.raw_terms()
        ])

    def __eq__(self, other):
        other = _as_half(other)
        return (self - other).is_zero()

    __hash__ = None

    def fourier_coefficient(self):
        """Part carrying the exponential, with the exponential removed."""
        return HalfExpr([(e, j, False, p) for e, j, x, p in self.raw_terms() if x])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, jet, x, p in self.sorted_terms():
            label = f"det^({e})"
            if jet:
                label += "*h_" + ".".join(f"{a}{b}" for a, b in jet)
            if x:
                label += "*exp"
            parts.append(f"({p})*{label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"HalfExpr({self})"

    def to_records(self):
        """JSON-friendly canonical records."""
        return [
            {
                "det": str(e),
                "jet": ",".join(f"{a}{b}" for a, b in jet),
                "exp": bool(x),
                "poly": str(p),
            }
            for e, jet, x, p in self.sorted_terms()
        ]

    @classmethod
    def from_records(cls, records):
        raw = []
        for rec in records:
            jet = tuple((int(c[0]), int(c[1])) for c in rec["jet"].split(",") if c) if rec.get("jet") else ()
            raw.append((AffineForm.parse(rec["det"]), _norm_jet(jet), bool(rec.get("exp")), MultiPoly.parse(rec["poly"])))
        return cls(raw)


def _as_half(value):
    if isinstance(value, HalfExpr):
        return value
    return HalfExpr.poly(value)


def _canonical(raw):
    """Merge terms in the same exponent class and strip det(Y) factors."""
    groups = {}
    for e, jet, exp, p in raw:
        if p.is_zero():
            continue
        key = (e.klass(), _norm_jet(jet), bool(exp))
        groups.setdefault(key, []).append((e, p))
    d = det_y()
    out = {}
    for (klass, jet, exp), items in groups.items():
        low = min(items, key=lambda item: item[0].const)[0]
        total = MultiPoly.const(0)
        for e, p in items:
            n = int(e.const - low.const)
            total = total + p * d**n
        if total.is_zero():
            continue
        exponent = low
        while True:
            q = total.exact_quotient(d)
            if q is None:
                break
            total = q
            exponent = exponent + 1
        out[(exponent, jet, exp)] = total
    return out


# -----------------------------------------------------------------------------
# Derivatives
# -----------------------------------------------------------------------------
_OP_FACTOR = {
    "dZ": ExactScalar(0, Fraction(-1, 2)),
    "dZbar": ExactScalar(0, Fraction(1, 2)),
    "dY": ExactScalar(1),
}


def _apply(op, e, i, j):
    if op not in OPS:
        raise ValueError(f"unknown operator {op!r}; expected one of {OPS}")
    i, j = min(i, j), max(i, j)
    factor = _OP_FACTOR[op]
    w = _weight(i, j)
    d = det_y()
    dd = d.diff(f"y{i}{j}")
    pihat = MultiPoly.var("pihat")
    out = []
    for exponent, jet, exp, p in e.raw_terms():
        # Y-dependence: d/dy (det^e N) = det^(e-1) (e * dd * N + det * dN)
        y_part = (exponent.to_poly() * dd * p + d * p.diff(f"y{i}{j}")).scale(factor * w)
        out.append((exponent - 1, jet, exp, y_part))
        if exp:
            if op == "dZ":
                out.append((exponent, jet, exp, p * _t(i, j) * pihat.scale(ExactScalar(0, 2))))
            elif op == "dY":
                out.append((exponent, jet, exp, p * _t(i, j) * pihat * -2))
        if op == "dZ":
            out.append((exponent, _norm_jet(jet + ((i, j),)), exp, p))
        elif op == "dY":
            out.append((exponent, _norm_jet(jet + ((i, j),)), exp, p.scale(I_UNIT)))
    return HalfExpr(out)


def dZ(e, i, j):
    return _apply("dZ", e, i, j)


def dZbar(e, i, j):
    return _apply("dZbar", e, i, j)


def dY(e, i, j):
    return _apply("dY", e, i, j)


def derivative_matrix(op, e):
    """Symmetric 2x2 matrix of weighted first derivatives."""
    m = {(i, j): _apply(op, e, i, j) for i, j in INDICES}
    return ((m[(1, 1)], m[(1, 2)]), (m[(1, 2)], m[(2, 2)]))


def det2(op, e):
    """op_11 op_22 - op_12 op_12 applied to e."""
    return _apply(op, _apply(op, e, 2, 2), 1, 1) - _apply(op, _apply(op, e, 1, 2), 1, 2)


def cap2(a, b):
    """A11 B22 + A22 B11 - A12 B21 - A21 B12 for 2x2 matrices of ring elements."""
    return a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1]


def inverse_y_entries():
    """Y^-1 as a matrix of HalfExpr with det exponent -1."""
    minus_one = AffineForm.constant(-1)
    return (
        (HalfExpr.poly(_y(2, 2), minus_one), HalfExpr.poly(-_y(1, 2), minus_one)),
        (HalfExpr.poly(-_y(1, 2), minus_one), HalfExpr.poly(_y(1, 1), minus_one)),
    )


def t_matrix():
    return (
        (HalfExpr.poly(_t(1, 1)), HalfExpr.poly(_t(1, 2))),
        (HalfExpr.poly(_t(1, 2)), HalfExpr.poly(_t(2, 2))),
    )


# -----------------------------------------------------------------------------
# Maass operators
# -----------------------------------------------------------------------------
def delta_plus2(e, k):
    """-4 det(Y)^-(k-1/2) det(dZ) (det(Y)^(k-1/2) e) at scalar weight k."""
    shift = _weight_form(k) - Fraction(1, 2)
    return det2("dZ", e.mul_det(shift)).mul_det(-shift) * -4


def delta_minus2(e):
    """(-4) det(Y)^(5/2) det(dZbar) (det(Y)^(-1/2) e)."""
    half = AffineForm.constant(Fraction(1, 2))
    return det2("dZbar", e.mul_det(-half)).mul_det(AffineForm.constant(Fraction(5, 2))) * -4


def _weight_form(k):
    if isinstance(k, AffineForm):
        return k
    if k is None or k == "k":
        return AffineForm(0, 1, 0)
    return AffineForm.constant(k)


def seed_term():
    """a_T exp(2 pi i tr TZ)."""
    return HalfExpr.exp_term(MultiPoly.var("aT"))


def seed_image_expected():
    """a_T [k(k-1/2) det^-1 - 4 pi (k-1/2) det^-1 tr(YT) + 16 pi^2 det T] exp."""
    k = MultiPoly.var("k")
    a = MultiPoly.var("aT")
    pihat = MultiPoly.var("pihat")
    half = Fraction(1, 2)
    minus_one = AffineForm.constant(-1)
    return (
        HalfExpr.poly(a * k * (k - half), minus_one, exp=True)
        - HalfExpr.poly(a * pihat * (k - half) * trace_ty() * 4, minus_one, exp=True)
        + HalfExpr.poly(a * pihat * pihat * det_t() * 16, exp=True)
    )


def delta_plus_h_expected(middle):
    """1/2 det^-1 h + middle * det^-1 tr(Y dZ h) - 4 det(dZ) h at weight 1."""
    minus_one = AffineForm.constant(-1)
    m = ExactScalar.of(middle)
    trace_part = (
        HalfExpr.poly(_y(1, 1).scale(m), minus_one, jet=((1, 1),))
        + HalfExpr.poly(_y(1, 2).scale(m * 2), minus_one, jet=((1, 2),))
        + HalfExpr.poly(_y(2, 2).scale(m), minus_one, jet=((2, 2),))
    )
    return (
        HalfExpr.poly(Fraction(1, 2), minus_one)
        + trace_part
        - HalfExpr.jet_h(((1, 1), (2, 2)), 4)
        + HalfExpr.jet_h(((1, 2), (1, 2)), 4)
    )


def random_y_poly(rng, degree=2):
    """Random polynomial in y11, y12, y22 with small integer coefficients."""
    names = Y_NAMES
    total = MultiPoly.const(rng.randint(-3, 3))
    for _ in range(4):
        term = MultiPoly.const(rng.randint(-3, 3))
        for _ in range(rng.randint(1, degree)):
            term = term * MultiPoly.var(rng.choice(names))
        total = total + term
    return total


def default_rng(seed):
    return random.Random(seed)


# -----------------------------------------------------------------------------
# Checks
# -----------------------------------------------------------------------------
K_FORM = AffineForm(0, 1, 0)
MINUS_ONE = AffineForm.constant(-1)


def _identity_matrix():
    one, zero = HalfExpr.one(), HalfExpr()
    return ((one, zero), (zero, one))


def verify_cap2():
    y_inv, t = inverse_y_entries(), t_matrix()
    results = []
    lhs = cap2(y_inv, t)
    rhs = HalfExpr.poly(trace_ty(), MINUS_ONE)
    results.append(CheckResult.compare(
        "maass.cap2.inverse_y_t", "2(Y^-1 cap T) = det(Y)^-1 tr(YT)", lhs, rhs, lhs - rhs
    ))
    lhs = cap2(t, t)
    rhs = HalfExpr.poly(det_t() * 2)
    results.append(CheckResult.compare("maass.cap2.polarization", "cap2(A, A) = 2 det A", lhs, rhs, lhs - rhs))
    lhs = cap2(_identity_matrix(), _identity_matrix())
    results.append(CheckResult.compare("maass.cap2.identity", "cap2(E, E) = 2", lhs, 2, lhs - 2))
    return results


def det_power_rule_sides(order, alpha=K_FORM):
    """(computed, expected) for d_Y^[h] det(Y)^alpha with h = order."""
    power = HalfExpr.det_power(alpha)
    a = alpha.to_poly()
    if order == 1:
        y_inv = inverse_y_entries()
        computed = [dY(power, i, j) for i, j in INDICES]
        expected = [y_inv[i - 1][j - 1].mul_det(alpha) * a for i, j in INDICES]
        return computed, expected
    if order == 2:
        coeff = a * (a + Fraction(1, 2))
        return det2("dY", power), HalfExpr.poly(coeff, alpha - 1)
    raise ValueError("the det power rule is checked for h = 1 and h = 2 only")


def verify_det_power_rule():
    results = []
    computed, expected = det_power_rule_sides(1)
    residual = sum((c - e for c, e in zip(computed, expected)), HalfExpr())
    results.append(CheckResult.compare(
        "maass.det_power_rule.h1",
        "d_Y det(Y)^a = a det(Y)^a Y^-1",
        "; ".join(str(c) for c in computed),
        "; ".join(str(e) for e in expected),
        residual,
    ))
    computed, expected = det_power_rule_sides(2)
    results.append(CheckResult.compare(
        "maass.det_power_rule.h2",
        "d_Y^[2] det(Y)^a = a(a+1/2) det(Y)^(a-1)",
        computed,
        expected,
        computed - expected,
    ))
    lhs = dZ(HalfExpr.det_power(K_FORM), 1, 2)
    rhs = HalfExpr.poly(-_y(1, 2) * K_FORM.to_poly(), K_FORM - 1) * ExactScalar(0, Fraction(-1, 2))
    results.append(CheckResult.compare(
        "maass.det_power_rule.dz_entry",
        "d_Z det(Y)^a = -(i/2) a det(Y)^a (Y^-1)_12",
        lhs,
        rhs,
        lhs - rhs,
    ))
    return results


def freitag_product_sides(f, g, op="dZ"):
    lhs = det2(op, f * g)
    rhs = det2(op, f) * g + cap2(derivative_matrix(op, f), derivative_matrix(op, g)) + f * det2(op, g)
    return lhs, rhs


def verify_freitag_product(seed=0, samples=10):
    results = []
    f = HalfExpr.det_power(K_FORM - Fraction(1, 2))
    lhs, rhs = freitag_product_sides(f, seed_term())
    results.append(CheckResult.compare(
        "maass.freitag_product.sturm_instance",
        "d^[2](fg) = d^[2]f g + 2(df cap dg) + f d^[2]g",
        lhs,
        rhs,
        lhs - rhs,
    ))
    rng = default_rng(seed)
    worst = HalfExpr()
    for _ in range(samples):
        a = HalfExpr.poly(random_y_poly(rng))
        b = HalfExpr.poly(random_y_poly(rng))
        lhs, rhs = freitag_product_sides(a, b)
        if not (lhs - rhs).is_zero():
            worst = lhs - rhs
            break
    results.append(CheckResult.compare(
        "maass.freitag_product.random",
        "product rule on random polynomial pairs",
        f"{samples} samples",
        "residual 0",
        worst,
        details={"seed": seed, "samples": samples},
    ))
    return results


def seed_image(k=K_FORM):
    return delta_plus2(seed_term(), k)


def verify_seed_coefficient():
    computed = seed_image().fourier_coefficient()
    expected = seed_image_expected().fourier_coefficient()
    results = [CheckResult.compare(
        "maass.seed_coefficient.symbolic_k",
        "Delta+ of a_T exp(2 pi i tr TZ): (4pi)^2 a_T det T [k(k-1/2)/(4pi)^2 det(TY)^-1 - (k-1/2)/(4pi) det(TY)^-1 tr(YT) + 1]",
        computed,
        expected,
        computed - expected,
    )]
    at_half = computed.subs({"k": Fraction(1, 2)})
    results.append(CheckResult.compare(
        "maass.seed_coefficient.half_weight_vanishing",
        "the coefficient vanishes at k = 1/2",
        at_half,
        0,
        at_half,
        details={"survivor": "16*pihat**2*aT*det(T)"},
    ))
    return results


def delta_plus_h():
    return delta_plus2(HalfExpr.jet_h(), 1)


def verify_delta_plus_h():
    computed = delta_plus_h()
    results = []
    for name, middle, citation in (
        ("maass.delta_plus_h.middle_constant", ExactScalar(0, 2), "middle term 2i det(Y)^-1 tr(Y d_Z h)"),
        ("maass.delta_plus_h.engine_constant", ExactScalar(0, 1), "middle term i det(Y)^-1 tr(Y d_Z h)"),
    ):
        expected = delta_plus_h_expected(middle)
        results.append(CheckResult.compare(
            name,
            f"Delta+ h = 1/2 det(Y)^-1 h + {citation} - 4 det(d_Z) h",
            computed,
            expected,
            computed - expected,
        ))
    return results


def verify_delta_minus_holomorphic():
    results = []
    for name, expr in (("jet", HalfExpr.jet_h()), ("exp", seed_term())):
        image = delta_minus2(expr)
        results.append(CheckResult.compare(
            f"maass.delta_minus.holomorphic_{name}",
            "Delta- annihilates holomorphic input",
            image,
            0,
            image,
        ))
    image = delta_minus2(HalfExpr.poly(Fraction(1, 2), MINUS_ONE, jet=()))
    results.append(CheckResult.compare(
        "maass.delta_minus.half_det_inverse",
        "Delta-(1/2 det(Y)^-1 h) = 3/4 h",
        image,
        HalfExpr.jet_h((), Fraction(3, 4)),
        image - HalfExpr.jet_h((), Fraction(3, 4)),
    ))
    return results


def three_quarters_sides(c=1):
    h = HalfExpr.jet_h((), c)
    return delta_minus2(delta_plus2(h, 1)), h * Fraction(3, 4)


def verify_three_quarters():
    lhs, rhs = three_quarters_sides()
    results = [CheckResult.compare(
        "maass.three_quarters",
        "Delta- Delta+ h = 3/4 h",
        lhs,
        rhs,
        lhs - rhs,
    )]
    c = ExactScalar(3, 2)
    lhs, rhs = three_quarters_sides(MultiPoly.const(c))
    results.append(CheckResult.compare(
        "maass.three_quarters.linearity",
        "Delta- Delta+ (c h) = 3/4 c h",
        lhs,
        rhs,
        lhs - rhs,
    ))
    return results


def random_half_expr(rng):
    """det(Y)^k-weighted polynomial times the exponential plus a jet term."""
    return (
        HalfExpr.poly(random_y_poly(rng), K_FORM, exp=True)
        + HalfExpr.poly(random_y_poly(rng, degree=1), MINUS_ONE, jet=(rng.choice(INDICES),))
    )


def verify_mixed_partials(seed=0, samples=5):
    rng = default_rng(seed)
    offending = None
    for _ in range(samples):
        e = random_half_expr(rng)
        a, b = rng.choice(INDICES), rng.choice(INDICES)
        for first, second in (("dZ", "dZbar"), ("dZ", "dZ"), ("dZbar", "dZbar")):
            one = _apply(first, _apply(second, e, *b), *a)
            two = _apply(second, _apply(first, e, *a), *b)
            if not (one - two).is_zero():
                offending = (first, a, second, b, one - two)
                break
        if offending:
            break
    details = {"seed": seed, "samples": samples}
    residual = HalfExpr()
    if offending:
        details["offendingPair"] = f"{offending[0]}{offending[1]} / {offending[2]}{offending[3]}"
        residual = offending[4]
    return [CheckResult.compare(
        "maass.mixed_partials",
        "weighted d_Z and d_Zbar commute",
        f"{samples} random expressions",
        "residual 0",
        residual,
        details=details,
    )]


def run_checks(seed=0):
    logger.info("Running half-space calculus checks")
    results = []
    results += verify_cap2()
    results += verify_det_power_rule()
    results += verify_freitag_product(seed)
    results += verify_seed_coefficient()
    results += verify_delta_plus_h()
    results += verify_delta_minus_holomorphic()
    results += verify_three_quarters()
    results += verify_mixed_partials(seed)
    return results
