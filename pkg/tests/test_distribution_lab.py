import numpy as np
import pytest

from bump_functions import panel_by_name, spacetime_panel, standard_panel
from distribution_lab import (
    Combination,
    DiracDelta,
    Heaviside,
    MultipliedBy,
    PolynomialDistribution,
    SampledDistribution,
    convolution_derivative_defect,
    convolve,
    pair,
    pairing_time_series,
    polynomial_reproduction_check,
    regularization_report,
    regularized_pairing,
    regularized_product_experiment,
    shock_conservation_check,
    smooth_embedding_scan,
    weak_solution_identity,
)
from errors import ConfigurationError, CoverageError
from mollifier_forge import shift_mollifier


@pytest.fixture
def tau():
    return panel_by_name()["bump_c0.3"]


class TestPairing:
    def test_delta(self, tau):
        assert pair(DiracDelta(), tau) == pytest.approx(tau(0.0))
        assert pair(DiracDelta(0.5), tau) == pytest.approx(tau(0.5))

    def test_heaviside_derivative_is_delta(self, tau):
        assert pair(Heaviside().derivative(), tau) == pytest.approx(tau(0.0), rel=1e-10)

    def test_second_derivative_of_delta(self, tau):
        assert pair(DiracDelta().derivative(2), tau) == pytest.approx(tau.derivative(2)(0.0))

    def test_polynomial(self, tau):
        expected = tau.total_integral() + 2 * tau.moment(1)
        assert pair(PolynomialDistribution((1.0, 2.0)), tau) == pytest.approx(expected)

    def test_linear_combination(self, tau):
        T = 2.0 * DiracDelta() - Heaviside()
        assert isinstance(T, Combination)
        assert pair(T, tau) == pytest.approx(2 * tau(0.0) - tau.integral_from(0.0))

    def test_multiplied_by_polynomial(self, tau):
        assert pair(MultipliedBy(DiracDelta(0.4), (0.0, 1.0)), tau) == pytest.approx(0.4 * tau(0.4))
        # x·δ = 0
        assert pair(MultipliedBy(DiracDelta(), (0.0, 1.0)), tau) == 0.0

    def test_sampled(self, tau):
        grid = np.linspace(-3.0, 3.0, 61)
        T = SampledDistribution(grid, np.ones_like(grid))
        assert pair(T, tau) == pytest.approx(tau.total_integral(), rel=1e-8)

    def test_sampled_coverage(self, tau):
        grid = np.linspace(-0.5, 0.5, 11)
        with pytest.raises(CoverageError):
            pair(SampledDistribution(grid, np.ones_like(grid)), tau)

    def test_unknown_variant(self, tau):
        with pytest.raises(TypeError):
            pair(object(), tau)


class TestConvolution:
    def test_delta_convolution_reproduces_kernel(self, tau):
        x = np.linspace(-0.5, 1.0, 7)
        result = convolve(DiracDelta(), tau, x)
        np.testing.assert_allclose(result.values, tau.evaluate(x), atol=1e-14)

    def test_derivative_commutes(self, tau):
        defect = convolution_derivative_defect(Heaviside(), tau, np.linspace(-1.0, 1.0, 5))
        assert defect < 1e-5

    def test_regularized_pairing_converges(self, mollifiers, tau):
        series = pairing_time_series(DiracDelta(), mollifiers[2], [1e-1, 1e-2, 1e-3], tau)
        errors = [error for _, error in series]
        assert errors[-1] < 1e-12
        assert all(error < 1e-6 for error in errors)

    def test_regularized_pairing_of_heaviside(self, mollifiers, tau):
        regularized = regularized_pairing(Heaviside(), mollifiers[1])
        assert regularized(1e-3, tau) == pytest.approx(tau.integral_from(0.0), rel=1e-6)


class TestRegularization:
    def test_report_shape(self):
        report = regularization_report(DiracDelta(), 3, [panel_by_name()["wide_bump"]], grid_points=201)
        assert [row["n"] for row in report.rows] == [1, 2, 3]
        assert all(row["pairing_error"] < 1e-3 for row in report.rows)
        assert all(row["sup_error"] < 1e-2 for row in report.rows)
        assert set(report.to_dict()) == {"distribution", "rows", "pairing_decreasing", "sup_decreasing"}

    def test_polynomial_of_degree_n_reproduced(self, mollifiers):
        check = polynomial_reproduction_check([1.0, 2.0, 3.0], mollifiers[2])
        assert check["max_defect"] < 1e-10

    def test_defect_beyond_degree_matches_taylor(self, mollifiers):
        check = polynomial_reproduction_check([0.0, 0.0, 0.0, 0.0, 1.0], mollifiers[2])
        assert check["prediction_gap"] < 1e-10

    @pytest.mark.parametrize("name", ["sin", "exp", "gaussian"])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_smooth_embedding_order(self, mollifiers, name, n):
        estimate = smooth_embedding_scan(name, mollifiers[n], [1e-1, 1e-2, 1e-3])
        assert not estimate.inconclusive
        assert estimate.slope >= n + 1 - 0.3

    def test_unknown_smooth_function(self, mollifiers):
        with pytest.raises(ValueError):
            smooth_embedding_scan("tanh", mollifiers[1], [1e-1, 1e-2, 1e-3])


def test_product_depends_on_mollifier(mollifiers, tau):
    kernels = {"centered": mollifiers[1], "shifted": shift_mollifier(mollifiers[1], 0.3)}
    result = regularized_product_experiment(kernels, [1e-2, 1e-3], tau)
    assert result["limits"]["centered|centered"] == pytest.approx(result["half_tau_zero"], rel=1e-3)
    assert result["limits"]["shifted|shifted"] == pytest.approx(result["half_tau_zero"], rel=1e-3)
    assert result["depends_on_mollifier"]
    assert len(result["rows"]) == 8


class TestShock:
    @pytest.mark.parametrize("v, a, b, t", [
        (1.0, -1.0, 1.0, 0.5),
        (1.0, 1.0, 2.0, 0.5),
        (2.0, -3.0, -1.0, 1.0),
        (-1.5, -2.0, 2.0, 1.0),
    ])
    def test_conservation(self, v, a, b, t):
        check = shock_conservation_check(v, a, b, t)
        assert check.residual == 0.0
        assert not check.boundary

    def test_front_inside_interval(self):
        check = shock_conservation_check(1.0, 0.0, 2.0, 1.0)
        assert check.lhs == pytest.approx(-2.0)
        assert check.rhs == pytest.approx(-2.0)

    def test_front_on_endpoint_is_flagged(self):
        assert shock_conservation_check(1.0, 0.5, 2.0, 0.5).boundary

    @pytest.mark.parametrize("a, b, t", [(1.0, 1.0, 1.0), (0.0, 1.0, 0.0)])
    def test_invalid(self, a, b, t):
        with pytest.raises(ConfigurationError):
            shock_conservation_check(1.0, a, b, t)

    def test_weak_solution_identity(self):
        results = weak_solution_identity(1.0, spacetime_panel())
        assert len(results) == 5
        assert all(abs(value) < 1e-8 for value in results.values())


def test_standard_panel_pairs_nonzero_with_delta_derivative():
    # 中心偏离 0 的面板使 δ' 的配对非零
    assert all(abs(pair(DiracDelta().derivative(), t)) > 0 for t in standard_panel())
