"""
Gamma products with affine arguments and their exact s -> 0 limits.

A GammaProduct is prefactor * prod Gamma(arg)^mult * (4*pi)^fourPiPower * tau^tauPower,
where every argument and exponent is affine in s and k with integer
slopes and a half-integer constant.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .exact import (
    REGISTRY,
    ExactScalar,
    MultiPoly,
    RatFunc,
    fold_sqrtpi_rat,
    to_fraction,
)

logger = logging.getLogger(__name__)

DEFAULT_K_WINDOW = (1, 8)


class GammaPoleError(Exception):
    """Raised when Gamma is evaluated exactly at a nonpositive integer."""


# -----------------------------------------------------------------------------
# Affine forms alpha*s + beta*k + gamma
# -----------------------------------------------------------------------------
@dataclass(frozen=True, order=True)
class AffineForm:
    s: int = 0
    k: int = 0
    const: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "const", to_fraction(self.const))
        if not isinstance(self.s, int) or not isinstance(self.k, int):
            raise ValueError("affine slopes must be integers")

    @classmethod
    def constant(cls, value):
        return cls(0, 0, to_fraction(value))

    @classmethod
    def parse(cls, text):
        """Parse forms such as 's + k - 1/2', '-2*s', '3/2'."""
        compact = str(text).replace(" ", "")
        if not compact:
            raise ValueError("empty affine form")
        s_coeff, k_coeff, const = 0, 0, Fraction(0)
        for sign, body in re.findall(r"([+-]?)([^+-]+)", compact):
            factor = -1 if sign == "-" else 1
            if body.endswith("s") or body.endswith("k"):
                head = body[:-1].rstrip("*")
                coeff = factor * (int(head) if head else 1)
                if body.endswith("s"):
                    s_coeff += coeff
                else:
                    k_coeff += coeff
            else:
                const += factor * Fraction(body)
        return cls(s_coeff, k_coeff, const)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AffineForm.constant(other)
        return AffineForm(self.s + other.s, self.k + other.k, self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return AffineForm(-self.s, -self.k, -self.const)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AffineForm.constant(other)
        return self + (-other)

    def __mul__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return AffineForm(self.s * n, self.k * n, self.const * n)

    __rmul__ = __mul__

    def is_constant(self):
        return self.s == 0 and self.k == 0

    def at(self, s=None, k=None):
        """Substitute numeric s and/or k; returns a new AffineForm."""
        const = self.const
        s_coeff, k_coeff = self.s, self.k
        if s is not None:
            const += s_coeff * to_fraction(s)
            s_coeff = 0
        if k is not None:
            const += k_coeff * to_fraction(k)
            k_coeff = 0
        return AffineForm(s_coeff, k_coeff, const)

    def value(self, s=0, k=0):
        return self.const + self.s * to_fraction(s) + self.k * to_fraction(k)

    def klass(self):
        """Class modulo integer shifts of the constant."""
        return (self.s, self.k, self.const - math.floor(self.const))

    def to_poly(self, registry=None):
        registry = registry or REGISTRY
        return (
            MultiPoly.var("s", registry) * self.s
            + MultiPoly.var("k", registry) * self.k
            + MultiPoly.const(self.const, registry)
        )

    def __str__(self):
        parts = []
        for coeff, name in ((self.s, "s"), (self.k, "k")):
            if coeff:
                mag = abs(coeff)
                body = name if mag == 1 else f"{mag}*{name}"
                parts.append(("-" if coeff < 0 else "+", body))
        if self.const or not parts:
            parts.append(("-" if self.const < 0 else "+", str(abs(self.const))))
        text = ""
        for i, (sign, body) in enumerate(parts):
            if i == 0:
                text = f"-{body}" if sign == "-" else body
            else:
                text += f" {sign} {body}"
        return text


ZERO_FORM = AffineForm()


def exact_gamma(c):
    """Gamma at a constant argument in (1/2)Z as (rational, sqrtpi exponent)."""
    c = to_fraction(c)
    if c.denominator == 1:
        if c <= 0:
            raise GammaPoleError(f"Gamma has a pole at {c}")
        return Fraction(math.factorial(int(c) - 1)), 0
    if c.denominator != 2:
        raise ValueError(f"Gamma({c}) is outside the exact half-integer class")
    n = int(c - Fraction(1, 2))
    if n >= 0:
        return Fraction(math.factorial(2 * n), 4**n * math.factorial(n)), 1
    m = -n
    return Fraction((-4) ** m * math.factorial(m), math.factorial(2 * m)), 1


# -----------------------------------------------------------------------------
# Gamma products
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class GammaProduct:
    prefactor: RatFunc
    factors: tuple = ()
    four_pi_power: AffineForm = ZERO_FORM
    tau_power: AffineForm = ZERO_FORM

    @classmethod
    def scalar(cls, value):
        if isinstance(value, GammaProduct):
            return value
        return cls(value if isinstance(value, RatFunc) else RatFunc(value))

    def is_zero(self):
        return self.prefactor.is_zero()

    def __mul__(self, other):
        other = GammaProduct.scalar(other)
        return gamma_normalize(
            GammaProduct(
                self.prefactor * other.prefactor,
                self.factors + other.factors,
                self.four_pi_power + other.four_pi_power,
                self.tau_power + other.tau_power,
            )
        )

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of a zero Gamma product")
        return gamma_normalize(
            GammaProduct(
                RatFunc(1) / self.prefactor,
                tuple((arg, -mult) for arg, mult in self.factors),
                -self.four_pi_power,
                -self.tau_power,
            )
        )

    def __truediv__(self, other):
        return self * GammaProduct.scalar(other).inverse()

    def __add__(self, other):
        return gamma_add(self, GammaProduct.scalar(other))

    def __neg__(self):
        return GammaProduct(-self.prefactor, self.factors, self.four_pi_power, self.tau_power)

    def __sub__(self, other):
        return gamma_add(self, -GammaProduct.scalar(other))

    def __eq__(self, other):
        if not isinstance(other, GammaProduct):
            try:
                other = GammaProduct.scalar(other)
            except TypeError:
                return NotImplemented
        a, b = gamma_normalize(self), gamma_normalize(other)
        if a.is_zero() or b.is_zero():
            return a.is_zero() and b.is_zero()
        return (
            a.factors == b.factors
            and a.four_pi_power == b.four_pi_power
            and a.tau_power == b.tau_power
            and a.prefactor == b.prefactor
        )

    __hash__ = None

    def at_k(self, k):
        """Specialize the weight parameter k to an integer."""
        return gamma_normalize(
            GammaProduct(
                self.prefactor.subs({"k": k}),
                tuple((arg.at(k=k), mult) for arg, mult in self.factors),
                self.four_pi_power.at(k=k),
                self.tau_power.at(k=k),
            )
        )

    def depends_on_s(self):
        return (
            self.prefactor.depends_on("s")
            or any(arg.s for arg, _ in self.factors)
            or self.four_pi_power.s != 0
            or self.tau_power.s != 0
        )

    def numeric(self, values):
        """mpmath value; values maps registry names (and 's', 'k') to numbers."""
        point = {"pihat": mpmath.pi, "sqrtpi": mpmath.sqrt(mpmath.pi)}
        point.update(values)
        s = point.get("s", 0)
        k = point.get("k", 0)
        total = mpmath.mpc(self.prefactor.evaluate({n: complex(point.get(n, 0)) for n in REGISTRY.names}))
        for arg, mult in self.factors:
            total *= mpmath.gamma(mpmath.mpf(float(arg.const)) + arg.s * s + arg.k * k) ** mult
        fp = self.four_pi_power
        total *= mpmath.power(4 * mpmath.pi, float(fp.const) + fp.s * s + fp.k * k)
        tp = self.tau_power
        if tp != ZERO_FORM:
            total *= mpmath.power(point.get("tau", 1), float(tp.const) + tp.s * s + tp.k * k)
        return total

    def __str__(self):
        return format_gamma(self)

    def __repr__(self):
        return f"GammaProduct({self})"


def _arg_poly(arg, shift=0):
    return (arg + shift).to_poly()


def gamma_normalize(g):
    """Canonical form: constant arguments evaluated, non-constant ones shifted so
    that their constant lies in [0, 1), equal arguments merged, integer parts of
    the (4 pi) and tau powers folded into the prefactor."""
    prefactor = g.prefactor
    if prefactor.is_zero():
        return GammaProduct(RatFunc(0))
    merged = {}
    for arg, mult in g.factors:
        if mult == 0:
            continue
        if arg.is_constant():
            value, sqrtpi_exp = exact_gamma(arg.const)
            unit = RatFunc(MultiPoly.const(value) * MultiPoly.var("sqrtpi") ** sqrtpi_exp)
            prefactor = prefactor * unit**mult
            continue
        while arg.const >= 1:
            prefactor = prefactor * RatFunc(_arg_poly(arg, -1)) ** mult
            arg = arg - 1
        while arg.const < 0:
            prefactor = prefactor / RatFunc(_arg_poly(arg)) ** mult
            arg = arg + 1
        merged[arg] = merged.get(arg, 0) + mult
    factors = tuple(sorted((a, m) for a, m in merged.items() if m != 0))

    four_pi = g.four_pi_power
    n = math.floor(four_pi.const)
    if n:
        prefactor = prefactor * RatFunc(MultiPoly.var("pihat") * 4) ** n
    if four_pi.const - n:
        prefactor = prefactor * RatFunc(MultiPoly.var("sqrtpi") * 2)
    four_pi = AffineForm(four_pi.s, four_pi.k, 0)

    tau = g.tau_power
    n = math.floor(tau.const)
    if n:
        prefactor = prefactor * RatFunc(MultiPoly.var("tau")) ** n
    tau = AffineForm(tau.s, tau.k, tau.const - n)

    return GammaProduct(fold_sqrtpi_rat(prefactor), factors, four_pi, tau)


def gamma_add(a, b):
    a, b = gamma_normalize(a), gamma_normalize(b)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.factors != b.factors or a.four_pi_power != b.four_pi_power or a.tau_power != b.tau_power:
        raise ValueError(f"cannot add Gamma products with different shapes: {a} and {b}")
    return gamma_normalize(GammaProduct(a.prefactor + b.prefactor, a.factors, a.four_pi_power, a.tau_power))


def gamma_sum(items):
    total = GammaProduct(RatFunc(0))
    for item in items:
        total = gamma_add(total, item)
    return total


# -----------------------------------------------------------------------------
# Limits at s = 0
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class LimitResult:
    """Outcome of s -> 0: kind is 'zero', 'finite' or 'pole'."""

    kind: str
    value: GammaProduct = None
    order: int = 0

    def __eq__(self, other):
        if not isinstance(other, LimitResult) or self.kind != other.kind:
            return False
        if self.kind == "finite":
            return self.value == other.value
        if self.kind == "pole":
            return self.order == other.order
        return True

    __hash__ = None

    def __str__(self):
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "pole":
            return f"pole of order {self.order}"
        return "0"


@dataclass(frozen=True)
class CaseSplit:
    """Piecewise limit over integer k: cases hold (k_lo, k_hi, LimitResult)."""

    cases: tuple
    generic: LimitResult
    window: tuple = DEFAULT_K_WINDOW
    notes: tuple = field(default_factory=tuple)

    def for_k(self, k):
        for lo, hi, result in self.cases:
            if lo <= k <= hi:
                return result
        return self.generic

    def __str__(self):
        parts = [f"k={lo}: {res}" if lo == hi else f"k in [{lo},{hi}]: {res}" for lo, hi, res in self.cases]
        parts.append(f"otherwise: {self.generic}")
        return "; ".join(parts)


def _limit_specialized(g):
    g = gamma_normalize(g)
    if g.is_zero():
        return LimitResult("zero")
    prefactor = g.prefactor
    factors = []
    for arg, mult in g.factors:
        if arg.k == 0 and arg.const == 0:
            # Gamma(a s) = Gamma(a s + 1) / (a s)
            prefactor = prefactor / RatFunc(MultiPoly.var("s") * arg.s) ** mult
            factors.append((arg + 1, mult))
        else:
            factors.append((arg, mult))
    order, lowest = prefactor.lowest_order("s")
    if order > 0:
        return LimitResult("zero")
    if order < 0:
        return LimitResult("pole", order=-order)
    value = GammaProduct(
        lowest,
        tuple((arg.at(s=0), mult) for arg, mult in factors),
        g.four_pi_power.at(s=0),
        g.tau_power.at(s=0),
    )
    return LimitResult("finite", gamma_normalize(value))


def gamma_limit(g, k=None, k_window=DEFAULT_K_WINDOW):
    """Exact s -> 0 limit. With k=None the weight stays symbolic and the
    integer k in k_window are scanned for special behaviour."""
    if k is not None:
        return _limit_specialized(g.at_k(k))
    generic = _limit_specialized(g)
    lo, hi = k_window
    special = []
    for kk in range(lo, hi + 1):
        result = _limit_specialized(g.at_k(kk))
        expected = generic
        if generic.kind == "finite":
            expected = LimitResult("finite", generic.value.at_k(kk))
        if not result == expected:
            special.append((kk, result))
    if not special:
        return generic
    logger.debug("gamma_limit: %d special weights in %s", len(special), k_window)
    cases = []
    for kk, result in special:
        if cases and cases[-1][1] == kk - 1 and cases[-1][2] == result:
            cases[-1] = (cases[-1][0], kk, result)
        else:
            cases.append((kk, kk, result))
    scanned = [kk for kk in range(lo, hi + 1) if kk not in {x for x, _ in special}]
    generic_cases = _ranges(scanned)
    all_cases = sorted(cases + [(a, b, generic) for a, b in generic_cases], key=lambda c: c[0])
    return CaseSplit(tuple(all_cases), generic, k_window)


def _ranges(values):
    out = []
    for v in values:
        if out and out[-1][1] == v - 1:
            out[-1] = (out[-1][0], v)
        else:
            out.append((v, v))
    return out


# -----------------------------------------------------------------------------
# Canonical text
# -----------------------------------------------------------------------------
def format_gamma(g):
    g = gamma_normalize(g)
    factors = " ".join(f"[{arg}]^{mult}" for arg, mult in g.factors) or "-"
    return f"prefactor: {g.prefactor}; gamma: {factors}; fourpi: {g.four_pi_power}; tau: {g.tau_power}"


def parse_gamma(text):
    fields = {}
    for chunk in text.split(";"):
        key, _, value = chunk.partition(":")
        fields[key.strip()] = value.strip()
    missing = {"prefactor", "gamma", "fourpi", "tau"} - set(fields)
    if missing:
        raise ValueError(f"Gamma product text lacks {sorted(missing)}")
    factors = []
    if fields["gamma"] != "-":
        for arg, mult in re.findall(r"\[([^\]]*)\]\^(-?\d+)", fields["gamma"]):
            factors.append((AffineForm.parse(arg), int(mult)))
    return gamma_normalize(
        GammaProduct(
            RatFunc.parse(fields["prefactor"]),
            tuple(factors),
            AffineForm.parse(fields["fourpi"]),
            AffineForm.parse(fields["tau"]),
        )
    )


def scalar_gamma_value(g):
    """Exact constant when g has no Gamma factors and no symbolic powers."""
    g = gamma_normalize(g)
    if g.factors or g.four_pi_power != ZERO_FORM or g.tau_power != ZERO_FORM:
        return None
    return g.prefactor


def exact_scalar_gamma(value):
    return GammaProduct(RatFunc(MultiPoly.const(ExactScalar.of(value))))
