import math
from fractions import Fraction

import numpy as np
import pytest

from src.quadrature import (
    QuadratureConfig,
    change_of_variables_pair,
    cone_quadrature,
    numeric_value,
    oracle,
    symbolic_value,
)

pytestmark = pytest.mark.slow


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(t=(1.0, 2.0, 1.0))
    with pytest.raises(ValueError):
        QuadratureConfig(jacobi_nodes=2)


def test_exponent_range():
    with pytest.raises(ValueError):
        cone_quadrature(lambda a, b, y12: np.ones_like(y12), -1.0, QuadratureConfig())


def test_pi_half():
    result = cone_quadrature(lambda a, b, y12: np.ones_like(y12), 0.5, QuadratureConfig())
    assert result.estimate == pytest.approx(math.pi / 2, rel=1e-6)
    assert result.converged


def test_symbolic_value_at_identity():
    cfg = QuadratureConfig()
    assert numeric_value(symbolic_value("base"), 2.0, cfg) == pytest.approx(math.pi / 2, rel=1e-12)
    assert numeric_value(symbolic_value("odd"), 2.0, cfg) == 0.0


@pytest.mark.parametrize(
    "integrand, s, t",
    [
        ("base", 1.5, (1.0, 0.0, 1.0)),
        ("trace", 2.0, (1.0, 0.5, 1.0)),
        ("entry", 1.5, (1.0, 0.0, 1.0)),
    ],
)
def test_oracle_agrees(integrand, s, t):
    result = oracle(integrand, s, QuadratureConfig(t=t))
    assert result["agree"], result
    assert result["integrand"] == integrand


def test_odd_integrand_vanishes():
    result = oracle("odd", 1.5)
    assert abs(result["estimate"]) < 1e-6
    assert result["agree"]


def test_unknown_integrand():
    with pytest.raises(ValueError):
        symbolic_value("cubic")


def test_change_of_variables():
    direct, exact = change_of_variables_pair(Fraction(1), QuadratureConfig())
    assert direct.estimate == pytest.approx(exact, rel=1e-6)
