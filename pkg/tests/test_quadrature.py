import math

import numpy as np
import pytest
from scipy import special

import quadrature
from errors import NumericalError
from quadrature import adaptive_integral, gauss_hermite, gauss_legendre, integrate_panels


class TestHermite:
    @pytest.mark.parametrize("order", [20, 200, 400])
    def test_rule_is_finite_at_high_order(self, order):
        nodes, weights = gauss_hermite(order)
        assert np.all(np.isfinite(nodes))
        assert np.all(np.isfinite(weights))
        assert weights.sum() == pytest.approx(math.sqrt(math.pi), rel=1e-12)
        assert np.dot(weights, nodes ** 2) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)

    def test_non_finite_rule_raises(self, monkeypatch):
        def broken(order):
            nodes = np.zeros(order)
            weights = np.full(order, np.nan)
            return nodes, weights

        gauss_hermite.cache_clear()
        monkeypatch.setattr(special, "roots_hermite", broken)
        try:
            with pytest.raises(NumericalError):
                quadrature.gauss_hermite(7)
        finally:
            gauss_hermite.cache_clear()


def test_legendre_integrates_polynomials_exactly():
    nodes, weights = gauss_legendre(8)
    assert np.dot(weights, nodes ** 14) == pytest.approx(2.0 / 15.0, rel=1e-14)


def test_panels_agree_with_adaptive_oracle():
    value = integrate_panels(lambda x: np.exp(-x ** 2) * np.cos(3 * x), -4.0, 4.0)
    oracle = adaptive_integral(lambda x: math.exp(-x ** 2) * math.cos(3 * x), -4.0, 4.0)
    assert value == pytest.approx(oracle, abs=1e-12)


def test_reversed_interval():
    assert integrate_panels(np.sin, 1.0, 0.0) == pytest.approx(-(1 - math.cos(1.0)), rel=1e-14)
