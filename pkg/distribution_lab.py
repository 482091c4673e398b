#!/usr/bin/env python3
"""
Distribution Lab for Asymptotica

Schwartz 广义函数的数值核：与测试函数的配对、与磨光核的卷积、正则化序列、
多项式再现与光滑嵌入阶、乘积 H·δ 对磨光核的依赖以及激波 2vH(x - vt) 的守恒律检查。
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from numpy.polynomial import Polynomial

from asymptotic_order import OrderEstimate, fit_slope
from bump_functions import (
    BumpTestFunction,
    ConvolvedTestFunction,
    SampledTestFunction,
    TensorTestFunction,
    TestFunction,
)
from errors import ConfigurationError, CoverageError
from mollifier_forge import Mollifier, MollifierSpec, build_mollifier, cell_order
from quadrature import cell_nodes, integrate_panels

logger = logging.getLogger(__name__)

EMBEDDING_PRECISION = 50
EMBEDDING_FLOOR = 1e-35
DEFAULT_PROBE_INTERVAL = (-2.0, 2.0)


# ---- 广义函数 ----

class Distribution:
    """广义函数基类，支持线性组合与求导"""

    def derivative(self, order: int = 1) -> "DerivativeOf":
        return DerivativeOf(self, order)

    def __add__(self, other: "Distribution") -> "Combination":
        return Combination(((1.0, self), (1.0, other)))

    def __rmul__(self, scalar: float) -> "Combination":
        return Combination(((float(scalar), self),))

    def __sub__(self, other: "Distribution") -> "Combination":
        return Combination(((1.0, self), (-1.0, other)))


@dataclass(frozen=True)
class DiracDelta(Distribution):
    center: float = 0.0


@dataclass(frozen=True)
class Heaviside(Distribution):
    """H(x - offset)；采样时跳跃点取值 0"""

    offset: float = 0.0


@dataclass(frozen=True)
class PolynomialDistribution(Distribution):
    """升幂系数表示的多项式"""

    coefficients: Tuple[float, ...]

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(list(self.coefficients))


@dataclass(frozen=True, eq=False)
class SampledDistribution(Distribution):
    """网格上的分段线性局部可积函数，网格外视为 0"""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        if grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ValueError("Sampled distribution grid must be strictly increasing")


@dataclass(frozen=True)
class DerivativeOf(Distribution):
    base: Distribution
    order: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"Derivative order must be >= 1, got {self.order}")


@dataclass(frozen=True)
class Combination(Distribution):
    terms: Tuple[Tuple[float, Distribution], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("Combination must be non-empty")


@dataclass(frozen=True)
class MultipliedBy(Distribution):
    """(gT)[τ] = T[gτ]，g 为多项式"""

    base: Distribution
    coefficients: Tuple[float, ...]


def as_test_function(kernel: Union[Mollifier, TestFunction]) -> TestFunction:
    if isinstance(kernel, Mollifier):
        return SampledTestFunction(kernel.grid, kernel.values, name=f"mollifier_n{kernel.n}")
    return kernel


def _check_coverage(grid: np.ndarray, tau: TestFunction) -> None:
    lo, hi = tau.support
    if lo < grid[0] or hi > grid[-1]:
        raise CoverageError(
            f"Test function support [{lo:g}, {hi:g}] not covered by sampled grid [{grid[0]:g}, {grid[-1]:g}]")


def _pair_sampled(grid: np.ndarray, values: np.ndarray, tau: TestFunction) -> float:
    """在采样网格与支集端点组成的断点上逐单元积分"""
    _check_coverage(grid, tau)
    lo, hi = tau.support
    inside = grid[(grid > lo) & (grid < hi)]
    breakpoints = np.concatenate([[lo], inside, [hi]])
    x, w, _, _ = cell_nodes(breakpoints, 8)
    return float(np.dot(w, np.interp(x, grid, values) * tau.evaluate(x)))


def pair(T: Distribution, tau: TestFunction) -> float:
    """
    T[τ]

    Raises:
        CoverageError: 采样广义函数的网格没有覆盖 τ 的支集
    """
    if isinstance(T, DiracDelta):
        return float(tau(T.center))
    if isinstance(T, Heaviside):
        return float(tau.integral_from(T.offset))
    if isinstance(T, PolynomialDistribution):
        return float(sum(c * tau.moment(k) for k, c in enumerate(T.coefficients) if c))
    if isinstance(T, SampledDistribution):
        return _pair_sampled(np.asarray(T.grid, dtype=float), np.asarray(T.values, dtype=float), tau)
    if isinstance(T, DerivativeOf):
        return (-1) ** T.order * pair(T.base, tau.derivative(T.order))
    if isinstance(T, Combination):
        return float(sum(scalar * pair(term, tau) for scalar, term in T.terms))
    if isinstance(T, MultipliedBy):
        if not hasattr(tau, "multiplied"):
            raise TypeError(f"Cannot multiply {type(tau).__name__} by a polynomial")
        return pair(T.base, tau.multiplied(Polynomial(list(T.coefficients))))
    raise TypeError(f"Unknown distribution variant: {type(T).__name__}")


def convolve(
    T: Distribution,
    kernel: Union[Mollifier, TestFunction],
    x_grid: Sequence[float]
) -> SampledTestFunction:
    """(T∗φ)(x) = T[φ(x - ·)]，在 x_grid 上求值"""
    phi = as_test_function(kernel)
    reflected = phi.reflected()
    x_grid = np.asarray(x_grid, dtype=float)
    values = np.array([pair(T, reflected.shifted(x)) for x in x_grid])
    return SampledTestFunction(x_grid, values, name=f"conv_{phi.name}")


def convolution_derivative_defect(
    T: Distribution,
    tau: BumpTestFunction,
    x_grid: Sequence[float],
    step: float = 1e-4
) -> float:
    """‖(T∗τ)' - T∗τ'‖∞，左侧用中心差分"""
    x_grid = np.asarray(x_grid, dtype=float)
    forward = convolve(T, tau, x_grid + step).values
    backward = convolve(T, tau, x_grid - step).values
    numeric = (forward - backward) / (2 * step)
    exact = convolve(T, tau.derivative(), x_grid).values
    return float(np.max(np.abs(numeric - exact)))


def mollified(tau: TestFunction, phi: Mollifier) -> ConvolvedTestFunction:
    """φ ∗ τ，φ 取其离散测度"""
    nodes, weights = phi.quadrature_measure()
    return ConvolvedTestFunction(tau, nodes, weights, name=f"delta{phi.n}*{tau.name}")


def regularized_pairing(T: Distribution, phi: Mollifier) -> Callable[[float, TestFunction], float]:
    """ε ↦ (T∗φ_ε)[τ] = T[φ̃_ε ∗ τ]"""
    nodes, weights = phi.quadrature_measure()

    def evaluate(epsilon: float, tau: TestFunction) -> float:
        return pair(T, ConvolvedTestFunction(tau, -epsilon * nodes, weights))

    return evaluate


def exact_pairing(T: Distribution) -> Callable[[float, TestFunction], float]:
    return lambda epsilon, tau: pair(T, tau)


def pairing_time_series(
    T: Distribution,
    phi: Mollifier,
    eps_grid: Sequence[float],
    tau: TestFunction
) -> List[Tuple[float, float]]:
    """(ε, |(T∗φ_ε)[τ] - T[τ]|) 序列"""
    regularized = regularized_pairing(T, phi)
    target = pair(T, tau)
    return [(float(eps), abs(regularized(eps, tau) - target)) for eps in eps_grid]


# ---- 正则化 ----

@dataclass
class RegularizationReport:
    distribution: str
    rows: List[Dict[str, float]]
    pairing_decreasing: bool
    sup_decreasing: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "distribution": self.distribution,
            "rows": self.rows,
            "pairing_decreasing": self.pairing_decreasing,
            "sup_decreasing": self.sup_decreasing,
        }


def _strictly_decreasing(values: Sequence[float], floor: float) -> bool:
    for a, b in zip(values, values[1:]):
        if a <= floor and b <= floor:
            continue
        if not b < a:
            return False
    return True


def regularization_report(
    T: Distribution,
    n_max: int,
    panel: Sequence[TestFunction],
    n_min: int = 1,
    grid_points: int = 401,
    floor: float = 1e-10,
    probe_points: int = 401
) -> RegularizationReport:
    """
    δ_n ∈ B_n (n = n_min..n_max) 的正则化收敛表

    pairing_error = max_τ |(T∗δ_n)[τ] - T[τ]|，通过 (T∗δ_n)[τ] = T[δ̃_n∗τ] 计算；
    sup_error = max_τ sup|δ_n∗τ - τ|。两列都应严格下降 (落在 floor 以下的相邻项视为相等的零)。
    """
    rows = []
    for n in range(n_min, n_max + 1):
        phi = build_mollifier(MollifierSpec(n, grid_points))
        nodes, weights = phi.quadrature_measure()
        pairing_error = 0.0
        sup_error = 0.0
        for tau in panel:
            smoothed = ConvolvedTestFunction(tau, -nodes, weights)
            pairing_error = max(pairing_error, abs(pair(T, smoothed) - pair(T, tau)))
            lo, hi = smoothed.support
            probe = np.linspace(lo, hi, probe_points)
            sup_error = max(sup_error, float(np.max(np.abs(smoothed.evaluate(probe) - tau.evaluate(probe)))))
        rows.append({"n": n, "pairing_error": pairing_error, "sup_error": sup_error})
        logger.debug(f"Regularization n={n}: pairing {pairing_error:.3e}, sup {sup_error:.3e}")

    return RegularizationReport(
        distribution=repr(T),
        rows=rows,
        pairing_decreasing=_strictly_decreasing([r["pairing_error"] for r in rows], floor),
        sup_decreasing=_strictly_decreasing([r["sup_error"] for r in rows], floor),
    )


# ---- 多项式再现 ----

def polynomial_convolution(coefficients: Sequence[float], phi: Mollifier, x: np.ndarray) -> np.ndarray:
    """(P∗φ)(x) = Σ_q w_q P(x - s_q)"""
    polynomial = Polynomial(list(coefficients))
    order = max(cell_order(phi.n), len(coefficients) // 2 + 2)
    nodes, weights = phi.quadrature_measure(order)
    x = np.asarray(x, dtype=float)
    return np.array([np.dot(weights, polynomial(xi - nodes)) for xi in x])


def polynomial_reproduction_check(
    coefficients: Sequence[float],
    phi: Mollifier,
    probe: Optional[Sequence[float]] = None
) -> Dict[str, float]:
    """
    max_x |(P∗φ)(x) - P(x)|

    同时给出 Taylor 公式预测的缺陷 Σ_{k>=1} (-1)^k m_k P^{(k)}(x)/k!，
    其中 m_k = ∫t^k φ；deg P <= n 时两者都在舍入误差水平。
    """
    probe = np.linspace(*DEFAULT_PROBE_INTERVAL, 81) if probe is None else np.asarray(probe, dtype=float)
    polynomial = Polynomial(list(coefficients))
    defect = polynomial_convolution(coefficients, phi, probe) - polynomial(probe)

    order = max(cell_order(phi.n), len(coefficients) // 2 + 2)
    nodes, weights = phi.quadrature_measure(order)
    predicted = np.zeros_like(probe)
    derivative = polynomial
    for k in range(1, len(coefficients)):
        derivative = derivative.deriv()
        moment_k = float(np.dot(weights, nodes ** k))
        predicted += (-1) ** k * moment_k * derivative(probe) / math.factorial(k)

    return {
        "max_defect": float(np.max(np.abs(defect))),
        "predicted_defect": float(np.max(np.abs(predicted))),
        "prediction_gap": float(np.max(np.abs(defect - predicted))),
    }


# ---- 光滑嵌入 ----

SMOOTH_FUNCTIONS: Dict[str, Callable[[Any], Any]] = {
    "sin": mpmath.sin,
    "cos": mpmath.cos,
    "exp": mpmath.exp,
    "gaussian": lambda x: mpmath.exp(-x * x),
}


def smooth_function(name_or_coefficients: Union[str, Sequence[float]]) -> Callable[[Any], Any]:
    """按名称取闭式函数，或由升幂系数构造多项式"""
    if isinstance(name_or_coefficients, str):
        if name_or_coefficients not in SMOOTH_FUNCTIONS:
            raise ValueError(f"Unknown smooth function: {name_or_coefficients}")
        return SMOOTH_FUNCTIONS[name_or_coefficients]
    coefficients = [mpmath.mpf(c) for c in name_or_coefficients]
    return lambda x: mpmath.fsum(c * x ** k for k, c in enumerate(coefficients))


def _exact_moment_weights(nodes: Sequence[Any], weights: Sequence[Any], n: int) -> List[Any]:
    """最小范数修正权重，使 Σ w s^k = [k = 0] (k = 0..n) 在当前精度下精确成立"""
    rows = n + 1
    vander = mpmath.matrix(rows, len(nodes))
    for k in range(rows):
        for q, s in enumerate(nodes):
            vander[k, q] = s ** k
    w = mpmath.matrix(weights)
    target = mpmath.matrix([1] + [0] * n)
    residual = vander * w - target
    gram = vander * vander.T
    correction = vander.T * mpmath.lu_solve(gram, residual)
    return [w[q] - correction[q] for q in range(len(nodes))]


def smooth_embedding_scan(
    f: Union[str, Sequence[float], Callable[[Any], Any]],
    phi: Mollifier,
    eps_grid: Sequence[float],
    probe: Optional[Sequence[float]] = None,
    precision: int = EMBEDDING_PRECISION,
    floor: float = EMBEDDING_FLOOR
) -> OrderEstimate:
    """
    sup_x |(f∗φ_ε)(x) - f(x)| 对 ε 的阶

    在 mpmath 中以 precision 位十进制精度求值，离散测度的 0..n 阶矩先投影为精确值，
    以免双精度舍入掩盖 ε^{n+1} 及更高阶的误差。
    """
    func = f if callable(f) else smooth_function(f)
    probe = np.linspace(*DEFAULT_PROBE_INTERVAL, 9) if probe is None else np.asarray(probe, dtype=float)
    samples = []
    with mpmath.workdps(precision):
        nodes_f, weights_f = phi.quadrature_measure()
        nodes = [mpmath.mpf(float(s)) for s in nodes_f]
        weights = _exact_moment_weights(nodes, [mpmath.mpf(float(w)) for w in weights_f], phi.n)
        for eps in eps_grid:
            e = mpmath.mpf(eps)
            worst = mpmath.mpf(0)
            for x in probe:
                xm = mpmath.mpf(float(x))
                smoothed = mpmath.fsum(w * func(xm - e * s) for s, w in zip(nodes, weights))
                worst = max(worst, abs(smoothed - func(xm)))
            samples.append((float(eps), float(worst)))
    estimate = fit_slope(samples, floor=floor)
    if estimate.inconclusive:
        logger.warning(f"Smooth embedding scan inconclusive: {estimate.reason}")
    return estimate


# ---- H·δ 乘积 ----

def _product_integral(h_kernel: Mollifier, d_kernel: Mollifier, tau: TestFunction, epsilon: float) -> float:
    """∫ H_ε δ_ε τ dx = ∫ Φ_h(y) φ_d(y) τ(εy) dy"""
    breakpoints = np.union1d(d_kernel.grid, h_kernel.grid)
    breakpoints = breakpoints[(breakpoints >= d_kernel.grid[0]) & (breakpoints <= d_kernel.grid[-1])]
    y, w, _, _ = cell_nodes(breakpoints, 6)
    return float(np.dot(w, h_kernel.cumulative(y) * d_kernel.evaluate(y) * tau.evaluate(epsilon * y)))


def regularized_product_experiment(
    kernels: Dict[str, Mollifier],
    eps_grid: Sequence[float],
    tau: TestFunction
) -> Dict[str, Any]:
    """
    ∫(H∗φ_i,ε)·(φ_j,ε)·τ dx 在 ε → 0 时的极限

    H 用核 i 正则化、δ 用核 j 正则化。i = j 时极限恒为 τ(0)/2 (∫Φφ = [Φ²/2])；
    i ≠ j 且核的形状或位置不同时极限一般不同，说明乘积依赖于磨光核的选择。
    极限由最小两个 ε 的线性外推给出。
    """
    eps_sorted = sorted((float(e) for e in eps_grid), reverse=True)
    tau_zero = float(tau(0.0))
    rows = []
    limits = {}
    for h_name, h_kernel in kernels.items():
        for d_name, d_kernel in kernels.items():
            values = [_product_integral(h_kernel, d_kernel, tau, eps) for eps in eps_sorted]
            for eps, value in zip(eps_sorted, values):
                rows.append({"h_kernel": h_name, "delta_kernel": d_name, "epsilon": eps, "value": value})
            if len(values) >= 2:
                e1, e2 = eps_sorted[-2], eps_sorted[-1]
                v1, v2 = values[-2], values[-1]
                limit = v2 - (v1 - v2) * e2 / (e1 - e2)
            else:
                limit = values[-1]
            limits[f"{h_name}|{d_name}"] = limit

    spread = max(limits.values()) - min(limits.values()) if limits else 0.0
    return {
        "tau_zero": tau_zero,
        "half_tau_zero": 0.5 * tau_zero,
        "rows": rows,
        "limits": limits,
        "spread": spread,
        "depends_on_mollifier": spread >= 0.05 * abs(tau_zero) and abs(tau_zero) > 0,
    }


# ---- 激波 ----

@dataclass
class ShockCheck:
    lhs: float
    rhs: float
    residual: float
    boundary: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {"lhs": self.lhs, "rhs": self.rhs, "residual": self.residual, "boundary": self.boundary}


def _step(value: float) -> float:
    return 1.0 if value > 0 else 0.0


def shock_conservation_check(v: float, a: float, b: float, t: float) -> ShockCheck:
    """
    激波 u = 2vH(x - vt) 的守恒律 d/dt ∫_a^b u = F(u(a)) - F(u(b))，F(u) = u²/2

    ∫_a^b u dx 在 vt < a 时为 2v(b - a)，a < vt < b 时为 2v(b - vt)，vt > b 时为 0，
    因此 lhs = -2v²H(vt - a) + 2v²H(vt - b)；rhs = 2v²[H(a - vt) - H(b - vt)]。
    vt 恰为 a 或 b 时 Heaviside 在 0 处的取值依赖约定，只报告不断言。
    """
    if not a < b:
        raise ConfigurationError(f"Expected a < b, got a={a}, b={b}")
    if t <= 0:
        raise ConfigurationError(f"Expected t > 0, got {t}")
    front = v * t
    boundary = front == a or front == b
    lhs = -2 * v * v * _step(front - a) + 2 * v * v * _step(front - b)
    rhs = 2 * v * v * (_step(a - front) - _step(b - front))
    if boundary:
        logger.warning(f"Shock front vt={front} sits on an interval endpoint; Heaviside value at 0 is conventional")
    return ShockCheck(lhs, rhs, lhs - rhs, boundary)


def weak_solution_identity(
    v: float,
    panel: Sequence[TensorTestFunction],
    panels: int = 32,
    order: int = 16
) -> Dict[str, float]:
    """
    ∬[u τ_t + ½u² τ_x] dx dt，u = 2vH(x - vt)

    τ = X(x)T(t)：x 方向按 Heaviside 截断精确积分，
    内层为 2v T'(t) ∫_{vt}^∞ X - 2v² T(t) X(vt)，外层对 t 做复合 Gauss-Legendre。
    """
    results = {}
    for tau in panel:
        space, time = tau.space, tau.time
        time_derivative = time.derivative()

        def inner(t: np.ndarray) -> np.ndarray:
            tail = np.array([space.integral_from(v * ti) for ti in t])
            return 2 * v * time_derivative.evaluate(t) * tail - 2 * v * v * time.evaluate(t) * space.evaluate(v * t)

        lo, hi = time.support
        results[tau.name] = integrate_panels(inner, lo, hi, panels, order)
    return results
