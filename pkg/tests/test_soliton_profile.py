import math

import numpy as np
import pytest

import soliton_profile
from errors import ConfigurationError, NoSolutionFoundError
from soliton_profile import (
    SolitonProfile,
    gaussian_moment,
    growth_report,
    load_profile,
    moment_identity_errors,
    profile_moments,
    quadrature_moments,
    save_profile,
    solve_moment_system,
    solve_profile_chain,
    translate_profile,
    translated_moments,
    verify_profile,
)

I2_FIRST_ORDER = 3.0 / (4.0 * math.sqrt(2.0 * math.pi))


@pytest.fixture(scope="module")
def first_order():
    return solve_moment_system(1)


@pytest.fixture(scope="module")
def third_order():
    return solve_moment_system(3)


class TestGaussianMoments:
    @pytest.mark.parametrize("k, a, expected", [
        (0, 1.0, math.sqrt(math.pi)),
        (1, 1.0, math.sqrt(math.pi) / 2),
        (2, 2.0, 3.0 / 16.0 * math.sqrt(math.pi / 2)),
    ])
    def test_closed_form(self, k, a, expected):
        assert gaussian_moment(k, a) == pytest.approx(expected, rel=1e-15)

    def test_invalid(self):
        with pytest.raises(ValueError):
            gaussian_moment(-1, 1.0)
        with pytest.raises(ValueError):
            gaussian_moment(1, 0.0)


class TestSolve:
    def test_first_order_closed_form(self, first_order):
        assert first_order.coefficients[0] == pytest.approx(2.0 / math.sqrt(math.pi))
        assert first_order.coefficients[1] == pytest.approx(0.0, abs=1e-12)
        first, second = profile_moments(first_order, 1)
        assert first[0] == pytest.approx(1.0)
        assert second[0] == pytest.approx(I2_FIRST_ORDER)
        assert first_order.theta_squared_integral == pytest.approx(0.29920, abs=1e-5)

    def test_profile_vanishes_at_origin(self, first_order):
        assert first_order(0.0) == 0.0
        assert first_order(1.0) == pytest.approx(2.0 / math.sqrt(math.pi) * math.exp(-1.0))

    def test_first_order_fails_second_moment(self, first_order):
        first, second = profile_moments(first_order, 2)
        assert first[2] == pytest.approx(1.5)
        assert second[2] / second[0] == pytest.approx(1.25)

    def test_third_order_converges(self, third_order):
        assert third_order.m == 3
        assert third_order.residual < 1e-12
        check = verify_profile(third_order)
        assert check["max_identity_error"] < 1e-9
        assert check["closed_form_gap"] < 1e-9

    def test_derivative_matches_finite_difference(self, third_order):
        x = np.linspace(-3.0, 3.0, 13)
        h = 1e-6
        numeric = (third_order.evaluate(x + h) - third_order.evaluate(x - h)) / (2 * h)
        np.testing.assert_allclose(third_order.derivative(x), numeric, atol=1e-7)

    def test_too_few_coefficients(self):
        with pytest.raises(ConfigurationError):
            solve_moment_system(4, coefficient_count=2)
        with pytest.raises(ConfigurationError):
            solve_moment_system(-1)

    def test_no_solution_reports_best_residual(self, monkeypatch):
        monkeypatch.setattr(soliton_profile, "MAX_ITERATIONS", 0)
        with pytest.raises(NoSolutionFoundError) as excinfo:
            solve_moment_system(2, max_restarts=1)
        assert excinfo.value.best_residual > 0
        assert excinfo.value.exit_code == 3

    def test_chain(self):
        chain = solve_profile_chain(3)
        assert sorted(chain) == [0, 1, 2, 3]
        for m, profile in chain.items():
            assert max(verify_profile(profile, m)["identity_errors"]) < 1e-9


class TestTranslation:
    def test_identity_survives_translation(self, third_order):
        shifted = translate_profile(third_order, 1.5)
        first, second = quadrature_moments(shifted, 3, center=1.5)
        assert max(moment_identity_errors(first, second)) < 1e-8

    def test_translated_moments_binomial(self, third_order):
        base_first, _ = profile_moments(third_order, 3)
        first, _ = quadrature_moments(translate_profile(third_order, -0.7), 3, center=-0.7)
        np.testing.assert_allclose(translated_moments(base_first, -0.7), first, rtol=1e-9, atol=1e-11)

    def test_zero_shift_is_identity(self, first_order):
        assert translate_profile(first_order, 0.0) is first_order


class TestFiles:
    def test_growth_is_bounded(self, third_order):
        report = growth_report(third_order)
        assert report["finite"]
        assert len(report["absolute_moments"]["theta"]) == 4

    def test_save_and_load(self, third_order, tmp_path):
        path = save_profile(third_order, str(tmp_path / "profile_m3.json"))
        loaded = load_profile(path)
        assert loaded == third_order
        assert isinstance(loaded, SolitonProfile)
