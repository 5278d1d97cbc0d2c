"""
Exact scalars, polynomials and rational functions over Q(i).

Every polynomial lives in a sympy sparse ring over QQ_I with graded
lexicographic order. All values built by the engine share one symbol
registry, so term order and printed text are reproducible run to run.
"""

import logging
from fractions import Fraction
from functools import lru_cache

import sympy as sp
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

logger = logging.getLogger(__name__)

# -----------------------------------------------------------------------------
# Symbol registry
# -----------------------------------------------------------------------------
# pihat stands for π and sqrtpi for √π; sqrtpi**2 is folded into pihat.
DEFAULT_SYMBOLS = (
    "u", "v", "k", "s", "kappa", "Lambda1", "Lambda2",
    "pihat", "sqrtpi", "tau", "aT",
    "y11", "y12", "y22", "t11", "t12", "t22",
)


class RegistryMismatchError(Exception):
    """Raised when operands were built over different symbol registries."""


def to_fraction(value):
    """Convert int, str, Fraction, sympy Rational or a QQ element to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"not an exact rational: {value!r}")


class ExactScalar:
    """Element of Q(i) stored as a pair of Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", to_fraction(re))
        object.__setattr__(self, "im", to_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def of(cls, value):
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction, str)):
            return cls(value)
        if hasattr(value, "x") and hasattr(value, "y"):
            return cls(to_fraction(value.x), to_fraction(value.y))
        if isinstance(value, sp.Basic):
            re_part, im_part = sp.nsimplify(value).as_real_imag()
            return cls(to_fraction(sp.Rational(re_part)), to_fraction(sp.Rational(im_part)))
        raise TypeError(f"cannot build an exact scalar from {value!r}")

    def to_domain(self):
        return QQ_I(
            QQ(self.re.numerator, self.re.denominator),
            QQ(self.im.numerator, self.im.denominator),
        )

    def to_sympy(self):
        return sp.Rational(self.re.numerator, self.re.denominator) + sp.I * sp.Rational(
            self.im.numerator, self.im.denominator
        )

    def to_complex(self):
        return complex(float(self.re), float(self.im))

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def is_real(self):
        return self.im == 0

    def conjugate(self):
        return ExactScalar(self.re, -self.im)

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return ExactScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return ExactScalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return ExactScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by exact zero")
        num = self * other.conjugate()
        return ExactScalar(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ExactScalar(1) / (self ** (-n))
        result = ExactScalar(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        imag = _imag_text(self.im)
        if self.re == 0:
            return imag
        if self.im < 0:
            return f"({self.re} - {_imag_text(-self.im)})"
        return f"({self.re} + {imag})"

    def __repr__(self):
        return f"ExactScalar({self})"


def _imag_text(im):
    if im == 1:
        return "I"
    if im == -1:
        return "-I"
    return f"{im}*I"


def _scalar_or_none(value):
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactScalar(value)
    return None


I_UNIT = ExactScalar(0, 1)


class SymbolRegistry:
    """Ordered symbol names plus the sympy sparse ring built over them."""

    def __init__(self, names):
        self.names = tuple(names)
        self.ring, *gens = ring(",".join(self.names), QQ_I, grlex)
        self.gens = dict(zip(self.names, gens))
        self.symbols = {name: sp.Symbol(name) for name in self.names}

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"symbol {name!r} is not in the registry") from None

    def __eq__(self, other):
        return isinstance(other, SymbolRegistry) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"SymbolRegistry({', '.join(self.names)})"


@lru_cache(maxsize=None)
def get_registry(names=DEFAULT_SYMBOLS):
    return SymbolRegistry(names)


REGISTRY = get_registry()


# -----------------------------------------------------------------------------
# Multivariate polynomials
# -----------------------------------------------------------------------------
class MultiPoly:
    """Immutable polynomial over Q(i) in the registry symbols."""

    __slots__ = ("registry", "element")

    def __init__(self, element, registry=None):
        registry = registry or REGISTRY
        if element.ring != registry.ring:
            raise RegistryMismatchError("polynomial ring does not match the registry")
        object.__setattr__(self, "registry", registry)
        object.__setattr__(self, "element", element)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # construction ----------------------------------------------------------
    @classmethod
    def const(cls, value, registry=None):
        registry = registry or REGISTRY
        return cls(registry.ring.ground_new(ExactScalar.of(value).to_domain()), registry)

    @classmethod
    def var(cls, name, registry=None):
        registry = registry or REGISTRY
        if name not in registry.gens:
            raise KeyError(f"symbol {name!r} is not in the registry")
        return cls(registry.gens[name], registry)

    @classmethod
    def from_terms(cls, terms, registry=None):
        """Build from a mapping exponent-tuple -> scalar."""
        registry = registry or REGISTRY
        data = {}
        for monom, coeff in terms.items():
            c = ExactScalar.of(coeff)
            if not c.is_zero():
                data[tuple(monom)] = c.to_domain()
        return cls(registry.ring.from_dict(data) if data else registry.ring.zero, registry)

    @classmethod
    def parse(cls, text, registry=None, aliases=None):
        registry = registry or REGISTRY
        expr = parse_symbolic(text, registry, aliases)
        return cls.from_sympy(expr, registry)

    @classmethod
    def from_sympy(cls, expr, registry=None):
        registry = registry or REGISTRY
        try:
            element = registry.ring.from_expr(sp.expand(expr))
        except ValueError as exc:
            raise ValueError(f"not a polynomial over the registry: {expr}") from exc
        return cls(element, registry)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.registry != self.registry:
                raise RegistryMismatchError(
                    f"registry mismatch: {self.registry!r} vs {other.registry!r}"
                )
            return other
        if isinstance(other, (int, Fraction, ExactScalar)):
            return MultiPoly.const(other, self.registry)
        return None

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return MultiPoly(self.element + other.element, self.registry)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return MultiPoly(self.element - other.element, self.registry)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return MultiPoly(-self.element, self.registry)

    def __mul__(self, other):
        if isinstance(other, ExactScalar):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return MultiPoly(self.element * other.element, self.registry)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        return MultiPoly(self.element**n, self.registry)

    def scale(self, c):
        c = ExactScalar.of(c)
        if c.is_zero():
            return MultiPoly(self.registry.ring.zero, self.registry)
        return MultiPoly(self.element.mul_ground(c.to_domain()), self.registry)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except RegistryMismatchError:
            return False
        if other is None:
            return NotImplemented
        return self.element == other.element

    def __hash__(self):
        return hash(self.element)

    # inspection ------------------------------------------------------------
    def is_zero(self):
        return not self.element

    def is_constant(self):
        return self.element.is_ground

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"polynomial is not constant: {self}")
        return ExactScalar.of(self.element.coeff(1)) if self.element else ExactScalar(0)

    def terms(self):
        """(exponent tuple, ExactScalar) pairs in descending grlex order."""
        return [(monom, ExactScalar.of(coeff)) for monom, coeff in self.element.terms()]

    def leading_coefficient(self):
        if self.is_zero():
            return ExactScalar(0)
        return ExactScalar.of(self.element.LC)

    def degree(self, name):
        if self.is_zero():
            return -1
        return max(monom[self.registry.index(name)] for monom in self.element.itermonoms())

    def low_degree(self, name):
        if self.is_zero():
            return 0
        return min(monom[self.registry.index(name)] for monom in self.element.itermonoms())

    def total_degree(self, names=None):
        if self.is_zero():
            return -1
        idx = [self.registry.index(n) for n in names] if names else range(len(self.registry.names))
        return max(sum(monom[i] for i in idx) for monom in self.element.itermonoms())

    def depends_on(self, name):
        return self.degree(name) > 0

    def free_names(self):
        return [name for name in self.registry.names if self.depends_on(name)]

    def coefficient(self, name, power):
        """Coefficient of name**power, as a polynomial free of name."""
        i = self.registry.index(name)
        data = {}
        for monom, coeff in self.element.iterterms():
            if monom[i] == power:
                reduced = list(monom)
                reduced[i] = 0
                data[tuple(reduced)] = coeff
        return MultiPoly(self.registry.ring.from_dict(data) if data else self.registry.ring.zero, self.registry)

    def homogeneous_parts(self, names):
        """Split by total degree in the given names: {degree: MultiPoly}."""
        idx = [self.registry.index(n) for n in names]
        buckets = {}
        for monom, coeff in self.element.iterterms():
            deg = sum(monom[i] for i in idx)
            buckets.setdefault(deg, {})[monom] = coeff
        return {
            deg: MultiPoly(self.registry.ring.from_dict(data), self.registry)
            for deg, data in sorted(buckets.items())
        }

    # calculus and substitution ---------------------------------------------
    def diff(self, name):
        return MultiPoly(self.element.diff(self.registry.gens[name]), self.registry)

    def subs(self, mapping):
        """Simultaneous substitution name -> MultiPoly or exact number."""
        if not mapping:
            return self
        pairs = []
        for name, value in mapping.items():
            value = self._coerce(value)
            if value is None:
                raise TypeError(f"cannot substitute {name} by a non-exact value")
            pairs.append((self.registry.gens[name], value.element))
        return MultiPoly(self.element.compose(pairs), self.registry)

    def div(self, other):
        """Division with remainder by one polynomial: (quotient, remainder)."""
        other = self._coerce(other)
        q, r = self.element.div(other.element)
        return MultiPoly(q, self.registry), MultiPoly(r, self.registry)

    def exact_quotient(self, other):
        """self / other when the division is exact, otherwise None."""
        q, r = self.div(other)
        return q if r.is_zero() else None

    def evaluate(self, values):
        """Floating-point value at a point given as {name: number}."""
        total = 0j
        names = self.registry.names
        for monom, coeff in self.element.iterterms():
            c = ExactScalar.of(coeff)
            term = c.to_complex()
            for name, e in zip(names, monom):
                if e:
                    term *= complex(values[name]) ** e
            total += term
        return total

    def to_sympy(self):
        return self.element.as_expr()

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({self})"


def format_poly(p):
    """Canonical text: terms in descending grlex order, sympy-parseable."""
    if p.is_zero():
        return "0"
    pieces = []
    for monom, coeff in p.terms():
        mono = "*".join(
            name if e == 1 else f"{name}**{e}"
            for name, e in zip(p.registry.names, monom)
            if e
        )
        negative, body = _term_text(coeff, mono)
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def _term_text(c, mono):
    if c.im == 0 or c.re == 0:
        value = c.re if c.im == 0 else c.im
        negative = value < 0
        mag = abs(value)
        if c.im != 0:
            coeff = "I" if mag == 1 else f"{mag}*I"
            return negative, f"{coeff}*{mono}" if mono else coeff
        if not mono:
            return negative, str(mag)
        return negative, mono if mag == 1 else f"{mag}*{mono}"
    return False, f"{c}*{mono}" if mono else str(c)


def standard_aliases(registry=None):
    """Auxiliary names accepted by the parser (not registry symbols)."""
    registry = registry or REGISTRY
    sym = registry.symbols
    aliases = {"pi": sym["pihat"]} if "pihat" in sym else {}
    if "u" in sym and "v" in sym:
        u, v = sym["u"], sym["v"]
        aliases["s1"] = (v - 2 * u - 1) / 2
        aliases["s2"] = (u - 1) / 2
        aliases["p"] = (v - u - 2) / 2
    return aliases


def parse_symbolic(text, registry=None, aliases=None):
    """Parse text into a sympy expression over the registry symbols."""
    registry = registry or REGISTRY
    local = dict(registry.symbols)
    local["I"] = sp.I
    local.update(standard_aliases(registry) if aliases is None else aliases)
    try:
        expr = parse_expr(str(text), local_dict=local, evaluate=True)
    except (SyntaxError, TypeError, sp.SympifyError) as exc:
        raise ValueError(f"cannot parse expression: {text!r}") from exc
    unknown = {str(sym) for sym in expr.free_symbols} - set(registry.names)
    if unknown:
        raise ValueError(f"unknown symbols {sorted(unknown)} in {text!r}")
    return expr


def poly_var(name):
    return MultiPoly.var(name)


def poly_const(value):
    return MultiPoly.const(value)


# -----------------------------------------------------------------------------
# Rational functions
# -----------------------------------------------------------------------------
def _strip_common_monomial(num, den):
    """Divide both parts by the largest monomial dividing every term of either."""
    monoms = list(num.element.itermonoms()) + list(den.element.itermonoms())
    shift = tuple(min(m[i] for m in monoms) for i in range(len(monoms[0])))
    if not any(shift):
        return num, den

    def lower(p):
        data = {tuple(e - s for e, s in zip(m, shift)): c for m, c in p.element.iterterms()}
        return MultiPoly(p.registry.ring.from_dict(data), p.registry)

    return lower(num), lower(den)


class RatFunc:
    """num/den reduced by common scalar and monomial content, den with leading
    coefficient 1; compared by cross-multiplication."""

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num, den=None):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.const(num)
        if den is None:
            den = MultiPoly.const(1, num.registry)
        elif not isinstance(den, MultiPoly):
            den = MultiPoly.const(den, num.registry)
        if num.registry != den.registry:
            raise RegistryMismatchError("numerator and denominator registries differ")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = MultiPoly.const(1, num.registry)
        else:
            num, den = _strip_common_monomial(num, den)
            lc = den.leading_coefficient()
            if lc != 1:
                inv = ExactScalar(1) / lc
                num, den = num.scale(inv), den.scale(inv)
            if not den.is_constant():
                q = num.exact_quotient(den)
                if q is not None:
                    num, den = q, MultiPoly.const(1, num.registry)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def parse(cls, text, registry=None, aliases=None):
        registry = registry or REGISTRY
        expr = sp.together(parse_symbolic(text, registry, aliases))
        num, den = sp.fraction(expr)
        return cls(MultiPoly.from_sympy(num, registry), MultiPoly.from_sympy(den, registry))

    @staticmethod
    def _lift(value):
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, (MultiPoly, int, Fraction, ExactScalar)):
            return RatFunc(value)
        return None

    @property
    def registry(self):
        return self.num.registry

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self):
        if not self.is_polynomial():
            raise ValueError(f"not a polynomial: {self}")
        return self.num.scale(ExactScalar(1) / self.den.constant_value())

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n >= 0:
            return RatFunc(self.num**n, self.den**n)
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RatFunc(self.den ** (-n), self.num ** (-n))

    def __eq__(self, other):
        try:
            other = self._lift(other)
        except RegistryMismatchError:
            return False
        if other is None:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def subs(self, mapping):
        den = self.den.subs(mapping)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes under {mapping}")
        return RatFunc(self.num.subs(mapping), den)

    def lowest_order(self, name):
        """(order, coefficient) of the lowest power of name in a Laurent sense."""
        if self.is_zero():
            return None, RatFunc(0)
        n_low = self.num.low_degree(name)
        d_low = self.den.low_degree(name)
        num_c = self.num.coefficient(name, n_low)
        den_c = self.den.coefficient(name, d_low)
        return n_low - d_low, RatFunc(num_c, den_c)

    def depends_on(self, name):
        return self.num.depends_on(name) or self.den.depends_on(name)

    def evaluate(self, values):
        return self.num.evaluate(values) / self.den.evaluate(values)

    def to_sympy(self):
        return self.num.to_sympy() / self.den.to_sympy()

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def fold_sqrtpi(p):
    """Replace sqrtpi**2 by pihat in every monomial."""
    reg = p.registry
    if "sqrtpi" not in reg.names or not p.depends_on("sqrtpi"):
        return p
    i_sq, i_pi = reg.index("sqrtpi"), reg.index("pihat")
    data = {}
    for monom, coeff in p.element.iterterms():
        m = list(monom)
        q, r = divmod(m[i_sq], 2)
        m[i_sq] = r
        m[i_pi] += q
        key = tuple(m)
        data[key] = data.get(key, reg.ring.domain.zero) + coeff
    data = {m: c for m, c in data.items() if c}
    return MultiPoly(reg.ring.from_dict(data) if data else reg.ring.zero, reg)


def fold_sqrtpi_rat(r):
    """Fold sqrtpi**2 in both parts; an odd sqrtpi power is cleared from the denominator first."""
    num, den = r.num, r.den
    if "sqrtpi" in den.registry.names and den.degree("sqrtpi") % 2:
        root = MultiPoly.var("sqrtpi", den.registry)
        num, den = num * root, den * root
    return RatFunc(fold_sqrtpi(num), fold_sqrtpi(den))


def minimal_offending_term(p):
    """Smallest term of a nonzero polynomial under grlex, as text."""
    if p.is_zero():
        return "0"
    monom, coeff = p.terms()[-1]
    return format_poly(MultiPoly.from_terms({monom: coeff}, p.registry))
