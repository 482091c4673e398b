#!/usr/bin/env python3
"""
Classical Hopf Solutions for Asymptotica

激波形成之前用特征线法求解 u = u0(x - u·t)，并比较守恒律的三种等价形式：
(i) u_t + (u²/2)_x，(ii) u_t + u·u_x，(iii) d/dt∫_a^b u - ½[u²(a) - u²(b)]。
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from asymptotic_order import OrderEstimate, fit_slope
from bump_functions import BumpTestFunction
from errors import ConfigurationError, NoClassicalSolutionError, NumericalError
from quadrature import integrate_panels

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-5
REFINEMENT_STEPS = (0.05, 0.05 / 10 ** 0.5, 0.005, 0.005 / 10 ** 0.5, 0.0005)
SAMPLE_INTERVAL = (-10.0, 10.0)
SAMPLE_POINTS = 20001


@dataclass
class InitialData:
    """光滑初值 u0 及其导数"""

    name: str
    func: Callable[[float], float]
    derivative: Callable[[float], float]
    sample_interval: Tuple[float, float] = SAMPLE_INTERVAL

    def __call__(self, x: float) -> float:
        return float(self.func(x))

    @classmethod
    def constant(cls, value: float) -> "InitialData":
        return cls(f"constant({value:g})", lambda x: value, lambda x: 0.0)

    @classmethod
    def linear(cls, slope: float = 1.0) -> "InitialData":
        return cls(f"linear({slope:g})", lambda x: slope * x, lambda x: slope)

    @classmethod
    def bump(cls, background: float = 0.0, height: float = 1.0,
             profile: Optional[BumpTestFunction] = None) -> "InitialData":
        """u0 = background + height·τ(x)"""
        profile = profile or BumpTestFunction([1.0], radius=1.0, name="bump")
        slope = profile.derivative()
        lo, hi = profile.support
        return cls(
            f"bump({background:g}, {height:g})",
            lambda x: background + height * float(profile(x)),
            lambda x: height * float(slope(x)),
            (lo - 1.0, hi + 1.0),
        )


def shock_time(data: InitialData, points: int = SAMPLE_POINTS) -> float:
    """
    特征线首次相交的时刻 1/max(-u0')

    u0' 处处 >= 0 时返回 inf。
    """
    xs = np.linspace(*data.sample_interval, points)
    steepest = max(-data.derivative(x) for x in xs)
    return math.inf if steepest <= 0 else 1.0 / steepest


def _bracket(equation: Callable[[float], float], guess: float) -> Tuple[float, float]:
    width = 1.0
    for _ in range(60):
        lo, hi = guess - width, guess + width
        if equation(lo) <= 0 <= equation(hi):
            return lo, hi
        width *= 2.0
    raise NumericalError(f"Could not bracket characteristic root near {guess}")


def characteristics_solve(data: InitialData, x: float, t: float,
                          breaking_time: Optional[float] = None) -> float:
    """
    u = u0(x - u·t) 的解

    先用 Newton，失败时扩展区间后用 brentq。t 之前特征线不相交时方程关于 u 单调递增，根唯一。

    Raises:
        NoClassicalSolutionError: t 不早于激波形成时刻
    """
    limit = shock_time(data) if breaking_time is None else breaking_time
    if t >= limit:
        raise NoClassicalSolutionError(f"t={t} is past the shock time {limit:.6g} for {data.name}")
    if t == 0:
        return data(x)

    equation = lambda u: u - data(x - u * t)
    slope = lambda u: 1.0 + t * data.derivative(x - u * t)
    guess = data(x)
    try:
        result = optimize.root_scalar(equation, x0=guess, fprime=slope, method="newton",
                                      xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=50)
        if result.converged and abs(equation(result.root)) <= 1e-13 * max(1.0, abs(result.root)):
            return float(result.root)
    except (RuntimeError, ZeroDivisionError, OverflowError) as e:
        logger.debug(f"Newton failed for x={x}, t={t}: {e}")

    lo, hi = _bracket(equation, guess)
    result = optimize.root_scalar(equation, bracket=(lo, hi), method="brentq",
                                  xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return float(result.root)


class ClassicalSolution:
    """u(x, t) 的特征线求值，缓存激波时刻"""

    def __init__(self, data: InitialData):
        self.data = data
        self.breaking_time = shock_time(data)

    def __call__(self, x: float, t: float) -> float:
        return characteristics_solve(self.data, x, t, self.breaking_time)

    def values(self, xs: Sequence[float], t: float) -> np.ndarray:
        return np.array([self(x, t) for x in xs])


# ---- 三种形式 ----

def form_residuals(solution: ClassicalSolution, a: float, b: float, t: float, h: float,
                   points: int = 21) -> Dict[str, float]:
    """中心差分与复合 Gauss-Legendre 得到的三种残差 (取 [a, b] 上的最大值)"""
    xs = np.linspace(a, b, points)
    u = solution.values(xs, t)
    u_plus_t = solution.values(xs, t + h)
    u_minus_t = solution.values(xs, t - h)
    u_plus_x = solution.values(xs + h, t)
    u_minus_x = solution.values(xs - h, t)

    u_t = (u_plus_t - u_minus_t) / (2 * h)
    u_x = (u_plus_x - u_minus_x) / (2 * h)
    flux_x = (u_plus_x ** 2 - u_minus_x ** 2) / (4 * h)

    conservative = float(np.max(np.abs(u_t + flux_x)))
    advective = float(np.max(np.abs(u_t + u * u_x)))

    def mass(time: float) -> float:
        return integrate_panels(lambda x: solution.values(x, time), a, b, panels=8, order=12)

    integral = (mass(t + h) - mass(t - h)) / (2 * h) - 0.5 * (u[0] ** 2 - u[-1] ** 2)
    return {"conservative": conservative, "advective": advective, "integral": abs(float(integral))}


@dataclass
class EquivalenceReport:
    data: str
    a: float
    b: float
    t_grid: List[float]
    step: float
    residuals: Dict[str, float]
    tolerance: float
    passed: bool
    refinement: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "data": self.data,
            "interval": [self.a, self.b],
            "t_grid": self.t_grid,
            "step": self.step,
            "residuals": self.residuals,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "refinement": self.refinement,
        }


def refinement_study(solution: ClassicalSolution, a: float, b: float, t: float,
                     steps: Sequence[float] = REFINEMENT_STEPS) -> Dict[str, Any]:
    """步长缩小时三种残差的收敛阶"""
    series: Dict[str, List[Tuple[float, float]]] = {"conservative": [], "advective": [], "integral": []}
    for h in steps:
        for form, value in form_residuals(solution, a, b, t, h).items():
            series[form].append((h, value))
    orders: Dict[str, OrderEstimate] = {form: fit_slope(samples) for form, samples in series.items()}
    return {
        "t": t,
        "steps": list(steps),
        "series": series,
        "slopes": {form: estimate.slope for form, estimate in orders.items()},
        "orders": {form: estimate.to_dict() for form, estimate in orders.items()},
    }


def equivalence_check(
    data: InitialData,
    a: float,
    b: float,
    t_grid: Sequence[float],
    step: float = DEFAULT_STEP,
    tolerance: float = DEFAULT_TOLERANCE,
    refine: bool = True
) -> EquivalenceReport:
    """
    在 t_grid 上比较三种形式的残差

    每个时刻需满足 t + step < 激波时刻。refine 时在最后一个时刻做步长细化研究。
    """
    if a >= b:
        raise ConfigurationError(f"Equivalence check needs a < b, got a={a}, b={b}")
    if not t_grid:
        raise ConfigurationError("Equivalence check needs at least one time")
    solution = ClassicalSolution(data)
    largest = max(t_grid) + (max(REFINEMENT_STEPS) if refine else step)
    if largest >= solution.breaking_time:
        raise NoClassicalSolutionError(
            f"Time grid reaches {largest:.4g}, past the shock time {solution.breaking_time:.4g}")

    residuals = {"conservative": 0.0, "advective": 0.0, "integral": 0.0}
    for t in t_grid:
        for form, value in form_residuals(solution, a, b, t, step).items():
            residuals[form] = max(residuals[form], value)
    passed = all(value < tolerance for value in residuals.values())

    refinement = refinement_study(solution, a, b, max(t_grid)) if refine else {}
    logger.info(f"Equivalence check for {data.name}: residuals {residuals}, passed={passed}")
    return EquivalenceReport(data.name, a, b, [float(t) for t in t_grid], step, residuals,
                             tolerance, passed, refinement)
