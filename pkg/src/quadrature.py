"""
Floating-point oracle for the cone integrals.

Y is parametrized by y11 = a, y22 = b, y12 = sqrt(ab) r, so that
det(Y)^e dY = (ab)^(e+1/2) (1-r^2)^e da db dr. The a and b directions use
QUADPACK with algebraic endpoint weights on [0, L]; the r direction uses a
Gauss-Jacobi rule with weight (1-r^2)^e.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import roots_jacobi

from .exact import MultiPoly, RatFunc
from .gamma import AffineForm, GammaProduct, ZERO_FORM
from .reports import CheckResult
from .siegel_integrals import (
    InvariantIntegrand,
    InvariantTerm,
    S_FORM,
    base_integral,
    change_of_variables,
    cone_integral,
    trace_moment,
)

logger = logging.getLogger(__name__)

INTEGRANDS = ("base", "trace", "entry", "odd")
S_SAMPLES = (1.1, 1.5, 2.0, 3.0)
T_SAMPLES = {"E": (1.0, 0.0, 1.0), "half": (1.0, 0.5, 1.0)}
TAIL_EXPONENT = 40.0
HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


@dataclass(frozen=True)
class QuadratureConfig:
    tol: float = 1e-6
    limit: int = 200
    jacobi_nodes: int = 64
    seed: int = 0
    t: tuple = (1.0, 0.0, 1.0)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.jacobi_nodes < 4:
            raise ValueError("at least 4 Jacobi nodes are needed for an error estimate")
        if np.linalg.eigvalsh(self.t_matrix())[0] <= 0:
            raise ValueError(f"T = {self.t} is not positive definite")

    def t_matrix(self):
        t11, t12, t22 = self.t
        return np.array([[t11, t12], [t12, t22]], dtype=float)

    def det_t(self):
        t11, t12, t22 = self.t
        return t11 * t22 - t12 * t12


@dataclass
class QuadratureResult:
    estimate: float
    bound: float
    warnings: list = field(default_factory=list)

    @property
    def converged(self):
        return not self.warnings


def cone_quadrature(weight, e, cfg):
    """Integral of weight(a, b, y12) exp(-tr(TY)) det(Y)^e dY over the cone.

    weight is vectorized over y12 and must be smooth; e > -1.
    """
    if e <= -1:
        raise ValueError(f"det exponent {e} is outside the quadrature range (e > -1)")
    t11, t12, t22 = cfg.t
    lam_min = float(np.linalg.eigvalsh(cfg.t_matrix())[0])
    upper = (TAIL_EXPONENT + 4.0 * (abs(e) + 2.0)) / lam_min
    alg = (e + 0.5, 0.0)
    eps = cfg.tol * 1e-2

    def integrate(n):
        nodes, node_weights = roots_jacobi(n, e, e)

        def over_r(a, b):
            y12 = np.sqrt(a * b) * nodes
            values = weight(a, b, y12) * np.exp(-(t11 * a + t22 * b + 2.0 * t12 * y12))
            return float(np.dot(node_weights, values))

        def over_b(a):
            return quad(lambda b: over_r(a, b), 0.0, upper, weight="alg", wvar=alg,
                        epsabs=0.0, epsrel=eps, limit=cfg.limit)[0]

        return quad(over_b, 0.0, upper, weight="alg", wvar=alg, epsabs=0.0, epsrel=eps, limit=cfg.limit)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        estimate, outer_error = integrate(cfg.jacobi_nodes)
        coarse, _ = integrate(cfg.jacobi_nodes // 2)
    bound = abs(outer_error) + abs(estimate - coarse)
    messages = sorted({str(w.message).splitlines()[0] for w in caught if issubclass(w.category, IntegrationWarning)})
    if bound > cfg.tol * max(abs(estimate), 1.0):
        messages.append(f"error bound {bound:.3e} exceeds the tolerance")
    if messages:
        logger.warning("Quadrature did not fully converge: %s", "; ".join(messages))
    return QuadratureResult(float(estimate), float(bound), messages)


# -----------------------------------------------------------------------------
# Oracle integrands
# -----------------------------------------------------------------------------
def _weight_fn(integrand, cfg):
    t11, t12, t22 = cfg.t
    if integrand == "base":
        return lambda a, b, y12: np.ones_like(y12)
    if integrand == "trace":
        return lambda a, b, y12: t11 * a + 2.0 * t12 * y12 + t22 * b
    if integrand == "entry":
        return lambda a, b, y12: np.full_like(y12, a)
    if integrand == "odd":
        return lambda a, b, y12: y12
    raise ValueError(f"unknown integrand {integrand!r}; expected one of {INTEGRANDS}")


def _det_exponent(integrand, s):
    return s - 1.0 if integrand == "trace" else s - 1.5


def symbolic_value(integrand):
    """Exact GammaProduct (symbolic in s, tau = det T) for an oracle integrand."""
    if integrand == "base":
        return base_integral(S_FORM - THREE_HALVES)
    if integrand == "trace":
        # det(T)^(-s-1/2) 2 sqrt(pi)(s+1/2) Gamma(s) Gamma(s+1/2)
        return trace_moment(S_FORM - 1) * GammaProduct(RatFunc(1), (), ZERO_FORM, AffineForm(-1, 0, -HALF))
    if integrand == "entry":
        # -d/dt11 of the base integral: s t22 det(T)^(-s-1) sqrt(pi) Gamma(s) Gamma(s-1/2)
        factor = GammaProduct(RatFunc(MultiPoly.var("s") * MultiPoly.var("t22")), (), ZERO_FORM, AffineForm.constant(-1))
        return base_integral(S_FORM - THREE_HALVES) * factor
    if integrand == "odd":
        return GammaProduct(RatFunc(0))
    raise ValueError(f"unknown integrand {integrand!r}; expected one of {INTEGRANDS}")


def numeric_value(g, s, cfg):
    t11, t12, t22 = cfg.t
    point = {"s": s, "tau": cfg.det_t(), "t11": t11, "t12": t12, "t22": t22}
    return complex(g.numeric(point)).real


def oracle(integrand, s, cfg=None):
    """Quadrature estimate next to the exact value: {estimate, bound, symbolicValue, agree}."""
    cfg = cfg or QuadratureConfig()
    result = cone_quadrature(_weight_fn(integrand, cfg), _det_exponent(integrand, s), cfg)
    exact = numeric_value(symbolic_value(integrand), s, cfg)
    agree = abs(result.estimate - exact) <= cfg.tol * max(abs(exact), 1.0)
    return {
        "integrand": integrand,
        "s": s,
        "t": list(cfg.t),
        "estimate": result.estimate,
        "bound": result.bound,
        "symbolicValue": exact,
        "agree": bool(agree),
        "warnings": result.warnings,
    }


def change_of_variables_pair(exponent, cfg):
    """(direct quadrature, substituted exact value) for exp(-4 pi tr TY) det(TY)^E dY/det(Y)^(3/2)."""
    scaled = QuadratureConfig(cfg.tol, cfg.limit, cfg.jacobi_nodes, cfg.seed, tuple(4.0 * math.pi * x for x in cfg.t))
    const = cfg.det_t() ** exponent
    direct = cone_quadrature(lambda a, b, y12: np.full_like(y12, const), exponent - 1.5, scaled)
    term = InvariantTerm(MultiPoly.const(1), AffineForm.constant(exponent), 0, ZERO_FORM, 4)
    pieces = [t.prefactor * cone_integral(t.det_exp, t.trace_power) for t in change_of_variables(InvariantIntegrand((term,)))]
    exact = complex(pieces[0].numeric({})).real
    return direct, exact


# -----------------------------------------------------------------------------
# Checks
# -----------------------------------------------------------------------------
def _numeric_check(name, citation, result, exact, tol, details=None):
    check = CheckResult.numeric(name, citation, result.estimate, exact, tol, bound=result.bound, details=details)
    if check.status == "pass" and result.warnings:
        check.status = "warning"
        check.details["warnings"] = result.warnings
    return check


def verify_oracle(tol=1e-6, limit=200, jacobi_nodes=64, s_samples=S_SAMPLES):
    results = []
    for label, t in T_SAMPLES.items():
        cfg = QuadratureConfig(tol, limit, jacobi_nodes, 0, t)
        for integrand in ("base", "trace"):
            for s in s_samples:
                result = cone_quadrature(_weight_fn(integrand, cfg), _det_exponent(integrand, s), cfg)
                exact = numeric_value(symbolic_value(integrand), s, cfg)
                results.append(_numeric_check(
                    f"gamma.{integrand}.s{s}.T{label}",
                    "Siegel Gamma integral vs cone quadrature",
                    result,
                    exact,
                    tol,
                    details={"s": s, "t": list(t)},
                ))
        for exponent in (Fraction(1), Fraction(3, 2)):
            direct, exact = change_of_variables_pair(exponent, cfg)
            results.append(_numeric_check(
                f"gamma.change_of_variables.E{float(exponent)}.T{label}",
                "W = 4 pi T^(1/2) Y T^(1/2) preserves the integral",
                direct,
                exact,
                tol,
            ))
    cfg = QuadratureConfig(tol, limit, jacobi_nodes)
    for integrand in ("entry", "odd"):
        result = cone_quadrature(_weight_fn(integrand, cfg), _det_exponent(integrand, 1.5), cfg)
        exact = numeric_value(symbolic_value(integrand), 1.5, cfg)
        results.append(_numeric_check(
            f"gamma.{integrand}.s1.5.TE", "entrywise moment and y12 symmetry", result, exact, tol
        ))
    result = cone_quadrature(_weight_fn("base", cfg), 0.5, cfg)
    results.append(_numeric_check(
        "gamma.base.pi_half", "s = 2, T = E: sqrt(pi) Gamma(2) Gamma(3/2) = pi/2", result, float(mpmath.pi / 2), tol
    ))
    return results
