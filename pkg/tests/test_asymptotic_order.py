import pytest

from asymptotic_order import (
    WeakEquality,
    classify_order,
    fit_slope,
    weak_equality_check,
)
from bump_functions import standard_panel

EPS_GRID = [1e-1, 1e-2, 1e-3, 1e-4]


@pytest.mark.parametrize("power", [0.5, 1.0, 2.0, 3.0, 4.5])
def test_fit_recovers_power(power):
    samples = [(eps, 3.7 * eps ** power) for eps in [1e-1, 3e-2, 1e-2, 3e-3, 1e-3]]
    estimate = fit_slope(samples)
    assert not estimate.inconclusive
    assert estimate.slope == pytest.approx(power, abs=1e-10)
    assert estimate.r_squared == pytest.approx(1.0)


def test_negative_values_use_magnitude():
    estimate = fit_slope([(eps, -2.0 * eps) for eps in EPS_GRID])
    assert estimate.slope == pytest.approx(1.0)


def test_floor_samples_are_excluded():
    estimate = fit_slope([(1e-1, 1e-2), (1e-2, 1e-4), (1e-3, 1e-6), (1e-4, 0.0)])
    assert estimate.excluded == 1
    assert estimate.slope == pytest.approx(2.0)


def test_all_at_floor_is_inconclusive():
    estimate = fit_slope([(eps, 1e-16) for eps in EPS_GRID])
    assert estimate.inconclusive
    assert estimate.slope is None
    assert classify_order(estimate) == "rho_null"


def test_narrow_span_is_inconclusive():
    estimate = fit_slope([(1e-2, 1e-4), (5e-3, 2.5e-5), (2e-3, 4e-6)])
    assert estimate.inconclusive
    assert "decades" in estimate.reason
    assert classify_order(estimate) == "inconclusive"


@pytest.mark.parametrize("power, expected", [
    (2.0, "infinitesimal"),
    (0.0, "finite"),
    (-1.0, "infinitely_large"),
    (7.0, "rho_null"),
])
def test_classify_order(power, expected):
    estimate = fit_slope([(eps, eps ** power) for eps in [1e-1, 1e-2, 1e-3]], floor=1e-300)
    assert classify_order(estimate) == expected


class TestWeakEquality:
    panel = standard_panel()[:2]

    def test_pairing_equal(self):
        verdict = weak_equality_check(WeakEquality.PAIRING_EQUAL,
                                      lambda eps, tau: tau.total_integral(),
                                      lambda eps, tau: tau.total_integral(),
                                      EPS_GRID, self.panel)
        assert verdict.passed
        assert all(row["at_floor"] for row in verdict.per_tau.values())

    def test_pairing_infinitesimal(self):
        verdict = weak_equality_check(WeakEquality.PAIRING_INFINITESIMAL,
                                      lambda eps, tau: 1.0 + eps ** 2,
                                      lambda eps, tau: 1.0,
                                      EPS_GRID, self.panel)
        assert verdict.passed
        assert verdict.order.slope == pytest.approx(2.0, abs=1e-6)
        assert set(verdict.per_tau) == {"bump_c0.3", "linear_bump"}

    def test_pairing_rho_needs_order_beyond_budget(self):
        verdict = weak_equality_check(WeakEquality.PAIRING_RHO,
                                      lambda eps, tau: 1.0 + eps ** 2,
                                      lambda eps, tau: 1.0,
                                      EPS_GRID, self.panel, order_budget=5)
        assert not verdict.passed

    def test_finite_difference_is_not_infinitesimal(self):
        verdict = weak_equality_check("pairing-infinitesimal",
                                      lambda eps, tau: 1.5,
                                      lambda eps, tau: 1.0,
                                      EPS_GRID, self.panel)
        assert not verdict.passed
        assert verdict.to_dict()["kind"] == "pairing-infinitesimal"

    def test_one_failing_tau_fails_the_verdict(self):
        def left(eps, tau):
            return 1.0 + (eps if tau.name == "bump_c0.3" else 0.5)

        verdict = weak_equality_check(WeakEquality.PAIRING_INFINITESIMAL, left,
                                      lambda eps, tau: 1.0, EPS_GRID, self.panel)
        assert not verdict.passed
        assert verdict.per_tau["bump_c0.3"]["passed"]
        assert not verdict.per_tau["linear_bump"]["passed"]
