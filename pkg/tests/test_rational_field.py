from fractions import Fraction

import numpy as np
import pytest

from errors import DomainMismatchError, FieldDivisionByZeroError, InvalidElementError
from laurent_field import LaurentNumber, Ordering
from rational_field import (
    RationalFunctionElement,
    cauchy_root_bound,
    eventual_sign,
    poly_divmod,
    poly_gcd,
    rational_compare,
    rational_to_laurent,
)

X = RationalFunctionElement.x


class TestPolynomials:
    def test_divmod(self):
        quotient, remainder = poly_divmod([Fraction(-1), 0, Fraction(1)], [Fraction(-1), Fraction(1)])
        assert quotient == [1, 1]
        assert remainder == []

    def test_gcd_is_monic(self):
        # (x - 1)(x + 2) 与 (x - 1)(x - 3)
        f = [Fraction(-2), Fraction(1), Fraction(1)]
        g = [Fraction(3), Fraction(-4), Fraction(1)]
        assert poly_gcd(f, g) == [-1, 1]

    def test_cauchy_bound(self):
        assert cauchy_root_bound([Fraction(-6), Fraction(1), Fraction(1)]) == 7

    def test_division_by_zero_polynomial(self):
        with pytest.raises(FieldDivisionByZeroError):
            poly_divmod([Fraction(1)], [])


class TestElements:
    def test_reduced_form(self, exact_field):
        f = (X() * X() - 1) / (X() - 1)
        assert f.numerator == [1, 1]
        assert f.denominator == [1]
        assert f == X() + 1

    def test_zero_denominator_rejected(self, exact_field):
        with pytest.raises(InvalidElementError):
            RationalFunctionElement([1], [0])

    def test_division_by_zero(self, exact_field):
        with pytest.raises(FieldDivisionByZeroError):
            X() / RationalFunctionElement.constant(0)

    def test_domain_mismatch(self):
        with pytest.raises(DomainMismatchError):
            RationalFunctionElement.x("exact") + RationalFunctionElement.x("float")

    def test_evaluate(self, exact_field):
        f = (X() + 1) / (X() - 2)
        assert f.evaluate(4) == Fraction(5, 2)
        with pytest.raises(FieldDivisionByZeroError):
            f.evaluate(2)


class TestOrder:
    def test_x_is_infinitely_large(self, exact_field):
        for n in (1, 1000, 10 ** 9):
            assert X() > n
        assert rational_compare(X(), RationalFunctionElement.constant(1000)) is Ordering.GREATER

    def test_reciprocal_is_positive_infinitesimal(self, exact_field):
        small = 1 / X()
        assert small > 0
        assert small < Fraction(1, 1000)

    def test_sign_uses_leading_coefficients(self, exact_field):
        assert (X() * X() - 100 * X()).sign() == 1
        assert ((1 - X()) / (X() + 5)).sign() == -1
        assert RationalFunctionElement.constant(0).sign() == 0

    def test_order_matches_eventual_pointwise_sign(self, exact_field):
        rng = np.random.default_rng(7)
        for _ in range(100):
            numerator = [int(c) for c in rng.integers(-9, 10, size=int(rng.integers(1, 5)))]
            denominator = [int(c) for c in rng.integers(-9, 10, size=int(rng.integers(1, 4)))]
            numerator[-1] = numerator[-1] or 1
            denominator[-1] = denominator[-1] or 1
            f = RationalFunctionElement(numerator, denominator)
            assert f.sign() == eventual_sign(f)


class TestLaurentEmbedding:
    def test_geometric_tail(self, exact_field):
        expansion = rational_to_laurent(1 / (X() - 1), 6)
        assert expansion.truncation_order == 6
        assert expansion.coefficients == {k: Fraction(1) for k in range(1, 7)}

    def test_polynomial_maps_to_negative_powers(self, exact_field):
        expansion = rational_to_laurent(X() * X() + 3, 4)
        assert expansion == LaurentNumber({-2: 1, 0: 3}, 4)

    def test_embedding_preserves_order(self, exact_field):
        f = (2 * X() + 1) / (X() + 3)
        g = RationalFunctionElement.constant(2)
        assert rational_compare(f, g) is (rational_to_laurent(f, 8).compare(rational_to_laurent(g, 8)))
