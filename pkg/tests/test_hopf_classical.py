import math

import pytest

from errors import ConfigurationError, NoClassicalSolutionError
from hopf_classical import (
    ClassicalSolution,
    InitialData,
    characteristics_solve,
    equivalence_check,
    form_residuals,
    shock_time,
)


class TestShockTime:
    def test_bump(self):
        # max(-u0') ≈ 0.7985 在 x ≈ 0.76 处
        assert shock_time(InitialData.bump()) == pytest.approx(1.2523, rel=2e-3)

    def test_taller_bump_breaks_sooner(self):
        assert shock_time(InitialData.bump(height=2.0)) == pytest.approx(shock_time(InitialData.bump()) / 2)

    def test_non_decreasing_data_never_breaks(self):
        assert shock_time(InitialData.constant(3.0)) == math.inf
        assert shock_time(InitialData.linear(1.0)) == math.inf


class TestCharacteristics:
    def test_constant(self):
        assert characteristics_solve(InitialData.constant(2.0), 0.3, 5.0) == 2.0

    @pytest.mark.parametrize("x, t", [(2.0, 1.0), (-3.0, 0.5), (0.7, 4.0)])
    def test_linear_rarefaction(self, x, t):
        assert characteristics_solve(InitialData.linear(1.0), x, t) == pytest.approx(x / (1 + t), rel=1e-14)

    def test_initial_time(self):
        data = InitialData.bump(background=0.5)
        assert characteristics_solve(data, 0.2, 0.0) == pytest.approx(data(0.2))

    def test_solution_satisfies_implicit_equation(self):
        data = InitialData.bump(background=0.25)
        solution = ClassicalSolution(data)
        for x in (-0.5, 0.0, 0.6, 1.1):
            u = solution(x, 1.0)
            assert u == pytest.approx(data(x - u * 1.0), abs=1e-13)

    def test_past_shock_time(self):
        with pytest.raises(NoClassicalSolutionError):
            characteristics_solve(InitialData.bump(), 0.0, 2.0)


class TestEquivalence:
    def test_constant_data_is_exact(self):
        report = equivalence_check(InitialData.constant(0.5), -1.0, 1.0, [0.5, 1.0])
        assert report.passed
        assert report.residuals == {"conservative": 0.0, "advective": 0.0, "integral": 0.0}

    def test_linear_data(self):
        report = equivalence_check(InitialData.linear(1.0), -1.0, 1.0, [0.5], refine=False)
        assert report.passed
        assert report.refinement == {}

    def test_bump_before_shock(self):
        report = equivalence_check(InitialData.bump(), -2.0, 3.0, [0.2, 0.6])
        assert report.residuals["conservative"] < 1e-5
        assert report.residuals["advective"] < 1e-5
        slopes = report.refinement["slopes"]
        assert slopes["advective"] == pytest.approx(2.0, abs=0.3)
        assert report.to_dict()["interval"] == [-2.0, 3.0]

    def test_forms_agree_pointwise(self):
        residuals = form_residuals(ClassicalSolution(InitialData.bump()), -1.0, 1.5, 0.8, 1e-4)
        assert residuals["conservative"] < 1e-5
        assert residuals["advective"] < 1e-5

    def test_time_grid_past_shock(self):
        with pytest.raises(NoClassicalSolutionError):
            equivalence_check(InitialData.bump(), -2.0, 3.0, [1.3])

    @pytest.mark.parametrize("a, b, t_grid", [(1.0, 0.0, [0.5]), (0.0, 1.0, [])])
    def test_invalid_configuration(self, a, b, t_grid):
        with pytest.raises(ConfigurationError):
            equivalence_check(InitialData.constant(1.0), a, b, t_grid)
