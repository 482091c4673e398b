from fractions import Fraction

import numpy as np
import pytest

from errors import (
    DomainMismatchError,
    FieldDivisionByZeroError,
    NonPositiveError,
    NoSquareRootInModelError,
    NotFiniteError,
    UnorderedError,
    ZeroHasNoClassError,
)
from laurent_field import (
    FLOAT,
    LaurentNumber,
    Magnitude,
    Ordering,
    RhoClass,
    arithmetic,
    asymptotic_split,
    classify,
    compare,
    complex_decompose,
    configure_field,
    field_settings,
    get_field_settings,
    infinitely_close,
    invert,
    rho_equal,
    sqrt_positive,
    standard_part,
)

rho = LaurentNumber.rho


def random_number(rng, truncation=16, low=-3):
    """随机精确系数的 Laurent 数，保证首项非零"""
    start = int(rng.integers(low, 2))
    count = int(rng.integers(1, 5))
    terms = {}
    for offset in range(count):
        numerator = int(rng.integers(-9, 10))
        denominator = int(rng.integers(1, 6))
        terms[start + offset] = Fraction(numerator, denominator)
    terms[start] = terms[start] or Fraction(1)
    return LaurentNumber(terms, truncation)


class TestConstruction:
    def test_defaults_follow_session(self, exact_field):
        x = LaurentNumber.constant(3)
        assert x.truncation_order == 16
        assert x.domain == "exact"
        assert x.coefficients == {0: Fraction(3)}

    def test_zero_has_no_valuation(self, exact_field):
        zero = LaurentNumber.zero()
        assert zero.is_zero
        assert zero.valuation is None

    def test_terms_beyond_truncation_are_dropped(self):
        x = LaurentNumber({0: 1, 5: 2, 9: 3}, truncation_order=6)
        assert x.coefficients == {0: Fraction(1), 5: Fraction(2)}

    def test_immutable(self, exact_field):
        with pytest.raises(AttributeError):
            LaurentNumber.one()._truncation = 3

    def test_configure_field_changes_session(self):
        previous = get_field_settings()
        try:
            configure_field(FLOAT, 8)
            assert LaurentNumber.one().domain == FLOAT
            assert LaurentNumber.one().truncation_order == 8
        finally:
            configure_field(previous.coefficient_domain, previous.truncation_order)

    def test_unknown_domain_rejected(self):
        with pytest.raises(DomainMismatchError):
            configure_field("decimal")

    def test_parse_round_trip(self, exact_field):
        x = LaurentNumber({0: 3, 1: 1, 2: -2})
        assert x.render() == "3 + 1*r^1 - 2*r^2"
        assert LaurentNumber.parse(x.render()) == x


class TestArithmetic:
    def test_addition_and_truncation(self):
        a = LaurentNumber({0: 1, 1: 2}, 4)
        b = LaurentNumber({1: -2, 3: 5}, 6)
        total = a + b
        assert total.truncation_order == 4
        assert total.coefficients == {0: Fraction(1), 3: Fraction(5)}

    def test_multiplication_truncation_uses_valuations(self):
        a = LaurentNumber({1: 1}, 5)
        b = LaurentNumber({-2: 1, 0: 1}, 5)
        product = a * b
        # min(K_a + m_b, K_b + m_a) = min(5 - 2, 5 + 1)
        assert product.truncation_order == 3
        assert product.coefficients == {-1: Fraction(1), 1: Fraction(1)}

    def test_product_with_zero_keeps_finite_truncation(self, exact_field):
        product = LaurentNumber.zero() * rho(-2)
        assert product.is_zero
        assert product.truncation_order == 14

    def test_geometric_series(self, exact_field):
        inverse = 1 / (1 - rho())
        assert inverse.truncation_order == 16
        assert inverse.coefficients == {k: Fraction(1) for k in range(17)}

    def test_invert_shifts_truncation(self, exact_field):
        x = LaurentNumber({2: 1, 3: 1})
        inverse = x.invert()
        assert inverse.valuation == -2
        assert inverse.truncation_order == 16 - 4
        assert (x * inverse) == LaurentNumber.one()

    def test_invert_zero(self, exact_field):
        with pytest.raises(FieldDivisionByZeroError):
            LaurentNumber.zero().invert()
        with pytest.raises(FieldDivisionByZeroError):
            invert(LaurentNumber.zero())

    def test_negative_powers(self, exact_field):
        assert (rho() ** -3).coefficients == {-3: Fraction(1)}
        with pytest.raises(TypeError):
            rho() ** 0.5

    def test_functional_arithmetic(self, exact_field):
        a, b = LaurentNumber.constant(2), rho()
        assert arithmetic(a, b, "add") == a + b
        assert arithmetic(a, b, "sub") == a - b
        assert arithmetic(a, b, "mul") == a * b
        with pytest.raises(ValueError):
            arithmetic(a, b, "mod")

    def test_domain_mismatch(self):
        exact = LaurentNumber.constant(1, 8, "exact")
        floating = LaurentNumber.constant(1.0, 8, "float")
        with pytest.raises(DomainMismatchError):
            exact + floating

    def test_float_domain(self, float_field):
        x = (1 + rho()) / 3
        assert x.domain == FLOAT
        assert x.coefficients[0] == pytest.approx(1 / 3)

    def test_real_promotes_to_complex(self, exact_field):
        i = LaurentNumber.constant(1j)
        product = i * i
        assert product.is_complex
        assert product.real_part() == LaurentNumber.constant(-1)
        assert product.imaginary_part().is_zero


class TestFieldAxioms:
    CASES = 200

    @pytest.mark.parametrize("seed", range(5))
    def test_randomized_axioms(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(self.CASES // 5):
            a, b, c = (random_number(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * a.invert() == LaurentNumber.one()
            ordering = [a < b, a == b, a > b]
            assert sum(ordering) == 1
            if a > 0 and b > 0:
                assert a + b > 0
                assert a * b > 0

    @pytest.mark.slow
    def test_thousand_cases(self):
        rng = np.random.default_rng(1000)
        for _ in range(1000):
            a, b, c = (random_number(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * a.invert() == LaurentNumber.one()
            assert sum([a < b, a == b, a > b]) == 1


class TestOrder:
    def test_rho_is_infinitesimal(self, exact_field):
        r = rho()
        for n in (1, 10, 1000, 10 ** 6):
            assert r < Fraction(1, n)
            assert r.invert() > n
        assert r > 0

    @pytest.mark.parametrize("n", [int(n) for n in np.unique(np.logspace(0, 9, 28).astype(np.int64))])
    def test_rho_below_every_reciprocal(self, exact_field, n):
        r = rho()
        assert r < LaurentNumber.constant(Fraction(1, n))
        assert -r > LaurentNumber.constant(Fraction(-1, n))
        assert r.invert() > n
        assert compare(r, Fraction(1, n)) is Ordering.LESS

    def test_compare_function(self, exact_field):
        assert compare(rho(), 0) is Ordering.GREATER
        assert compare(-rho(), 0) is Ordering.LESS
        assert compare(rho(), rho()) is Ordering.EQUAL

    def test_complex_not_ordered(self, exact_field):
        with pytest.raises(UnorderedError):
            LaurentNumber.constant(1j) < 1

    def test_abs(self, exact_field):
        assert abs(-rho()) == rho()


class TestSqrt:
    def test_perfect_square(self, exact_field):
        root = sqrt_positive(LaurentNumber({2: 4, 3: 4, 4: 1}))
        assert root == LaurentNumber({1: 2, 2: 1})

    def test_series_root(self, exact_field):
        root = (1 + rho()).sqrt_positive()
        assert root.coefficients[1] == Fraction(1, 2)
        assert root.coefficients[2] == Fraction(-1, 8)
        assert root * root == 1 + rho()

    def test_odd_valuation(self, exact_field):
        with pytest.raises(NoSquareRootInModelError):
            rho().sqrt_positive()

    def test_non_positive(self, exact_field):
        with pytest.raises(NonPositiveError):
            LaurentNumber.constant(-4).sqrt_positive()
        with pytest.raises(NonPositiveError):
            LaurentNumber.zero().sqrt_positive()

    def test_irrational_leading_coefficient_promotes_to_float(self, exact_field):
        root = LaurentNumber.constant(2).sqrt_positive()
        assert root.domain == FLOAT
        assert root.coefficients[0] == pytest.approx(2 ** 0.5)


class TestStandardPart:
    def test_standard_part(self, exact_field):
        x = 3 + rho() - 2 * rho(2)
        assert standard_part(x) == 3
        assert standard_part(rho()) == 0

    @pytest.mark.parametrize("seed", range(4))
    def test_standard_part_is_ring_homomorphism(self, exact_field, seed):
        rng = np.random.default_rng(seed)
        for _ in range(50):
            a, b = random_number(rng, low=0), random_number(rng, low=0)
            assert a.is_finite() and b.is_finite()
            assert standard_part(a + b) == standard_part(a) + standard_part(b)
            assert standard_part(a * b) == standard_part(a) * standard_part(b)
            assert standard_part(a - b) == standard_part(a) - standard_part(b)

    def test_split_is_unique(self, exact_field):
        x = LaurentNumber({0: Fraction(5, 2), 1: 7, 3: -1})
        r, dx = asymptotic_split(x)
        assert r == Fraction(5, 2)
        assert dx.is_infinitesimal()
        assert r + dx == x

    def test_infinitely_large_has_no_split(self, exact_field):
        with pytest.raises(NotFiniteError):
            asymptotic_split(rho(-1) + 2)

    def test_infinitely_close_and_rho_equal(self, exact_field):
        assert infinitely_close(1 + rho(), LaurentNumber.one())
        assert not rho_equal(1 + rho(), LaurentNumber.one())
        assert rho_equal(LaurentNumber({0: 1, 20: 1}), LaurentNumber.one())


class TestClassify:
    @pytest.mark.parametrize("power, magnitude, rho_class", [
        (2, Magnitude.INFINITESIMAL, RhoClass.RHO_INFINITESIMAL_PROPER),
        (0, Magnitude.FINITE_APPRECIABLE, RhoClass.RHO_CONSTANT),
        (-1, Magnitude.INFINITELY_LARGE, RhoClass.RHO_MODERATE_ONLY),
    ])
    def test_scale_classes(self, exact_field, power, magnitude, rho_class):
        scale = classify(3 * rho(power))
        assert scale.magnitude is magnitude
        assert scale.rho_class is rho_class
        assert scale.valuation == power
        assert scale.is_rho_moderate
        assert not scale.is_rho_null

    def test_finite_predicates(self, exact_field):
        assert classify(rho()).is_rho_finite
        assert classify(rho()).is_rho_infinitesimal
        assert classify(LaurentNumber.constant(2)).is_rho_constant
        assert not classify(rho(-2)).is_rho_finite

    def test_random_samples_fall_in_exactly_one_class(self, exact_field, rng):
        for _ in range(200):
            a = random_number(rng, low=-4)
            scale = classify(a)
            assert scale.valuation == a.valuation
            assert sum([a.is_infinitesimal(), a.is_infinitely_large(),
                        scale.magnitude is Magnitude.FINITE_APPRECIABLE]) == 1
            assert sum([scale.is_rho_infinitesimal, scale.is_rho_constant, not scale.is_rho_finite]) == 1
            assert scale.rho_class not in (RhoClass.RHO_NULL, RhoClass.RHO_FINITE_ONLY)
            assert scale.is_rho_moderate
            expected = {
                Magnitude.INFINITESIMAL: RhoClass.RHO_INFINITESIMAL_PROPER,
                Magnitude.FINITE_APPRECIABLE: RhoClass.RHO_CONSTANT,
                Magnitude.INFINITELY_LARGE: RhoClass.RHO_MODERATE_ONLY,
            }
            assert scale.rho_class is expected[scale.magnitude]

    def test_zero_has_no_class(self, exact_field):
        with pytest.raises(ZeroHasNoClassError):
            classify(LaurentNumber.zero())


class TestComplex:
    def test_decompose_even_modulus(self, exact_field):
        gamma = LaurentNumber.from_parts(LaurentNumber.constant(3), LaurentNumber.constant(4))
        parts = complex_decompose(gamma)
        assert parts.alpha == LaurentNumber.constant(3)
        assert parts.beta == LaurentNumber.constant(4)
        assert parts.modulus == LaurentNumber.constant(5)

    def test_irrational_modulus_shares_domain_with_parts(self, exact_field):
        gamma = LaurentNumber.from_parts(LaurentNumber.constant(1), LaurentNumber.constant(1))
        parts = complex_decompose(gamma)
        assert parts.modulus.coefficients[0] == pytest.approx(2 ** 0.5)
        assert {parts.alpha.domain, parts.beta.domain, parts.modulus.domain} == {FLOAT}
        assert (parts.alpha * parts.alpha + parts.beta * parts.beta).coefficients[0] == pytest.approx(2.0)

    def test_decompose_infinitesimal_parts(self, exact_field):
        parts = complex_decompose(LaurentNumber.from_parts(rho(), rho()))
        assert parts.modulus.valuation == 1
        assert parts.modulus.coefficients[1] == pytest.approx(2 ** 0.5)

    def test_conjugate_product_is_modulus_squared(self, exact_field):
        gamma = LaurentNumber.from_parts(1 + rho(), rho())
        assert gamma * gamma.conjugate() == gamma.modulus_squared().to_complex()

    def test_from_parts_requires_real(self, exact_field):
        with pytest.raises(DomainMismatchError):
            LaurentNumber.from_parts(LaurentNumber.constant(1j), LaurentNumber.one())

    def test_complex_standard_part(self, exact_field):
        gamma = LaurentNumber.from_parts(2 + rho(), 3 - rho())
        assert standard_part(gamma) == complex(2, 3)


def test_session_context_restores():
    before = get_field_settings()
    with field_settings("float", 5):
        assert get_field_settings().truncation_order == 5
    assert get_field_settings() == before
