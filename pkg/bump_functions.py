#!/usr/bin/env python3
"""
Test Functions for Asymptotica

紧支光滑测试函数 τ：多项式乘 bump 的闭式族 (导数仍为闭式)、分段线性采样族、
离散测度与测试函数的卷积族，以及二维张量积族。
"""

import logging
from abc import ABC, abstractmethod
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from quadrature import DEFAULT_ORDER, DEFAULT_PANELS, cell_nodes, integrate_panels

logger = logging.getLogger(__name__)

# exp(-r^2/D) 在 r^2/D 超过该值时按 0 处理
_EXPONENT_CUTOFF = 700.0


class TestFunction(ABC):
    """测试函数基类"""

    __test__ = False

    name: str = "tau"

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """在数组 x 上求值"""

    @abstractmethod
    def derivative(self, order: int = 1) -> "TestFunction":
        """order 阶导数"""

    @property
    @abstractmethod
    def support(self) -> Tuple[float, float]:
        """支集所在的闭区间"""

    @abstractmethod
    def reflected(self) -> "TestFunction":
        """x -> τ(-x)"""

    @abstractmethod
    def shifted(self, offset: float) -> "TestFunction":
        """x -> τ(x - offset)"""

    def __call__(self, x):
        values = self.evaluate(np.atleast_1d(np.asarray(x, dtype=float)))
        return values if np.ndim(x) else float(values[0])

    def integral_between(self, a: float, b: float) -> float:
        """∫_a^b τ"""
        if b < a:
            return -self.integral_between(b, a)
        lo, hi = self.support
        a, b = max(a, lo), min(b, hi)
        if b <= a:
            return 0.0
        return integrate_panels(self.evaluate, a, b, DEFAULT_PANELS, DEFAULT_ORDER)

    def integral_from(self, a: float) -> float:
        """∫_a^∞ τ"""
        return self.integral_between(a, self.support[1])

    def total_integral(self) -> float:
        lo, hi = self.support
        return self.integral_between(lo, hi)

    def moment(self, k: int) -> float:
        """∫ x^k τ(x) dx"""
        lo, hi = self.support
        return integrate_panels(lambda x: x ** k * self.evaluate(x), lo, hi, DEFAULT_PANELS, DEFAULT_ORDER)

    def sup_norm(self, points: int = 2001) -> float:
        lo, hi = self.support
        return float(np.max(np.abs(self.evaluate(np.linspace(lo, hi, points)))))


class BumpTestFunction(TestFunction):
    """
    τ(x) = N(y) / D^j · exp(-r²/D)，y = x - c，D = r² - y²，|y| < r；支集外为 0

    j = 0 时即 p(y)·exp(-1/(1-(y/r)²))。求导保持此形式：
    τ' = [N'D² + 2j·y·N·D - 2r²·y·N] / D^{j+2} · exp(-r²/D)
    """

    def __init__(
        self,
        numerator: Sequence[float] = (1.0,),
        radius: float = 1.0,
        center: float = 0.0,
        power: int = 0,
        name: Optional[str] = None
    ):
        if radius <= 0:
            raise ValueError(f"Bump radius must be positive, got {radius}")
        self.numerator = numerator if isinstance(numerator, Polynomial) else Polynomial(list(numerator))
        self.radius = float(radius)
        self.center = float(center)
        self.power = int(power)
        self.name = name or f"bump(r={self.radius:g}, c={self.center:g})"
        # 由 derivative() 产生时记录原函数，积分用端点差精确计算
        self.primitive: Optional["BumpTestFunction"] = None

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        y = np.asarray(x, dtype=float) - self.center
        r2 = self.radius ** 2
        out = np.zeros_like(y)
        d = r2 - y * y
        mask = d > r2 / _EXPONENT_CUTOFF
        if np.any(mask):
            dm = d[mask]
            out[mask] = self.numerator(y[mask]) * np.exp(-r2 / dm) / dm ** self.power
        return out

    @property
    def support(self) -> Tuple[float, float]:
        return self.center - self.radius, self.center + self.radius

    def integral_between(self, a: float, b: float) -> float:
        if self.primitive is None:
            return super().integral_between(a, b)
        return float(self.primitive(b) - self.primitive(a))

    def derivative(self, order: int = 1) -> "BumpTestFunction":
        result = self
        for _ in range(order):
            result = result._first_derivative()
        return result

    def _first_derivative(self) -> "BumpTestFunction":
        r2 = self.radius ** 2
        y = Polynomial([0.0, 1.0])
        d = Polynomial([r2, 0.0, -1.0])
        n = self.numerator
        numerator = n.deriv() * d * d + 2 * self.power * y * n * d - 2 * r2 * y * n
        result = BumpTestFunction(numerator, self.radius, self.center, self.power + 2, f"{self.name}'")
        result.primitive = self
        return result

    def reflected(self) -> "BumpTestFunction":
        coef = self.numerator.coef * (-1.0) ** np.arange(len(self.numerator.coef))
        return BumpTestFunction(coef, self.radius, -self.center, self.power, f"{self.name}~")

    def shifted(self, offset: float) -> "BumpTestFunction":
        return BumpTestFunction(self.numerator, self.radius, self.center + offset, self.power, self.name)

    def multiplied(self, polynomial: Polynomial) -> "BumpTestFunction":
        """x -> g(x)·τ(x)，g 为多项式"""
        shifted = polynomial(Polynomial([self.center, 1.0]))
        return BumpTestFunction(self.numerator * shifted, self.radius, self.center, self.power, self.name)

    def dilated(self, scale: float) -> "BumpTestFunction":
        """x -> τ(x / scale)"""
        coef = self.numerator.coef / scale ** np.arange(len(self.numerator.coef)) * scale ** (2 * self.power)
        return BumpTestFunction(coef, self.radius * scale, self.center * scale, self.power, self.name)

    def __repr__(self) -> str:
        return f"BumpTestFunction({self.name})"


class SampledTestFunction(TestFunction):
    """网格上的分段线性函数，网格外为 0"""

    def __init__(self, grid: Sequence[float], values: Sequence[float], name: str = "sampled"):
        self.grid = np.asarray(grid, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.grid.shape != self.values.shape or self.grid.size < 2:
            raise ValueError("Grid and values must be equal-length arrays with at least two points")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("Sampled grid must be strictly increasing")
        self.name = name
        self._cumulative = np.concatenate(
            [[0.0], np.cumsum(0.5 * np.diff(self.grid) * (self.values[:-1] + self.values[1:]))])

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.interp(x, self.grid, self.values, left=0.0, right=0.0)

    @property
    def support(self) -> Tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def antiderivative(self, x: np.ndarray) -> np.ndarray:
        """∫_{grid[0]}^x τ，分段线性情形下精确"""
        x = np.clip(np.asarray(x, dtype=float), self.grid[0], self.grid[-1])
        cell = np.clip(np.searchsorted(self.grid, x, side="right") - 1, 0, self.grid.size - 2)
        left = self.grid[cell]
        return self._cumulative[cell] + 0.5 * (x - left) * (self.values[cell] + self.evaluate(x))

    def integral_between(self, a: float, b: float) -> float:
        values = self.antiderivative(np.array([a, b]))
        return float(values[1] - values[0])

    def moment(self, k: int) -> float:
        x, w, _, _ = cell_nodes(self.grid, k // 2 + 2)
        return float(np.dot(w, x ** k * self.evaluate(x)))

    def derivative(self, order: int = 1) -> "SampledTestFunction":
        # 二阶中心差分
        values = self.values
        for _ in range(order):
            values = np.gradient(values, self.grid)
        return SampledTestFunction(self.grid, values, f"{self.name}'")

    def multiplied(self, polynomial: Polynomial) -> "SampledTestFunction":
        return SampledTestFunction(self.grid, self.values * polynomial(self.grid), self.name)

    def reflected(self) -> "SampledTestFunction":
        return SampledTestFunction(-self.grid[::-1], self.values[::-1], f"{self.name}~")

    def shifted(self, offset: float) -> "SampledTestFunction":
        return SampledTestFunction(self.grid + offset, self.values, self.name)


class ConvolvedTestFunction(TestFunction):
    """
    离散测度 μ = Σ c_q δ_{s_q} 与测试函数的卷积 (μ ∗ τ)(x) = Σ c_q τ(x - s_q)

    磨光核按积分节点离散后与 τ 卷积得到此族，δ_n ∗ τ 即属于此类。
    """

    def __init__(self, base: TestFunction, shifts: Sequence[float], weights: Sequence[float],
                 name: Optional[str] = None):
        self.base = base
        self.shifts = np.asarray(shifts, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.name = name or f"conv({base.name})"

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for shift, weight in zip(self.shifts, self.weights):
            out += weight * self.base.evaluate(x - shift)
        return out

    @property
    def support(self) -> Tuple[float, float]:
        lo, hi = self.base.support
        return lo + float(self.shifts.min()), hi + float(self.shifts.max())

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def integral_between(self, a: float, b: float) -> float:
        return float(sum(
            weight * self.base.integral_between(a - shift, b - shift)
            for shift, weight in zip(self.shifts, self.weights)
        ))

    def integral_from(self, a: float) -> float:
        # ∫_{a-s}^∞ τ = ∫_a^∞ τ + ∫_{a-s}^a τ，短区间上的修正项积分误差远小于整段积分
        head = self.base.integral_from(a)
        return float(self.mass * head + sum(
            weight * self.base.integral_between(a - shift, a)
            for shift, weight in zip(self.shifts, self.weights)
        ))

    def moment(self, k: int) -> float:
        base_moments = [self.base.moment(i) for i in range(k + 1)]
        return float(sum(
            weight * sum(comb(k, i) * shift ** (k - i) * base_moments[i] for i in range(k + 1))
            for shift, weight in zip(self.shifts, self.weights)
        ))

    def derivative(self, order: int = 1) -> "ConvolvedTestFunction":
        return ConvolvedTestFunction(self.base.derivative(order), self.shifts, self.weights, f"{self.name}'")

    def reflected(self) -> "ConvolvedTestFunction":
        return ConvolvedTestFunction(self.base.reflected(), -self.shifts, self.weights, f"{self.name}~")

    def shifted(self, offset: float) -> "ConvolvedTestFunction":
        return ConvolvedTestFunction(self.base, self.shifts + offset, self.weights, self.name)


class TensorTestFunction:
    """二维测试函数 τ(x, t) = τ_x(x)·τ_t(t)"""

    __test__ = False

    def __init__(self, space: BumpTestFunction, time: BumpTestFunction, name: Optional[str] = None):
        self.space = space
        self.time = time
        self.name = name or f"{space.name}x{time.name}"

    def evaluate(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        return self.space.evaluate(x) * self.time.evaluate(t)

    def partial_x(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        return self.space.derivative().evaluate(x) * self.time.evaluate(t)

    def partial_t(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        return self.space.evaluate(x) * self.time.derivative().evaluate(t)


def standard_panel() -> List[BumpTestFunction]:
    """
    一维测试函数面板

    中心偏离 0，使奇数阶导数在 0 处不为零。
    """
    return [
        BumpTestFunction([1.0], radius=1.0, center=0.3, name="bump_c0.3"),
        BumpTestFunction([0.5, 1.0], radius=1.2, center=0.1, name="linear_bump"),
        BumpTestFunction([1.0, 0.0, 1.0], radius=0.8, center=-0.2, name="quadratic_bump"),
        BumpTestFunction([1.0], radius=1.0, center=0.25, power=1, name="sharp_bump"),
        BumpTestFunction([1.0, -0.5], radius=2.0, center=0.5, name="wide_bump"),
    ]


def panel_by_name() -> Dict[str, BumpTestFunction]:
    return {tau.name: tau for tau in standard_panel()}


def spacetime_panel() -> List[TensorTestFunction]:
    """激波弱解恒等式使用的二维面板 (t 方向支集在 t > 0)"""
    return [
        TensorTestFunction(BumpTestFunction([1.0], 1.5, 1.0), BumpTestFunction([1.0], 0.8, 1.0), "st_1"),
        TensorTestFunction(BumpTestFunction([1.0, 1.0], 2.0, 1.5), BumpTestFunction([1.0], 1.0, 1.2), "st_2"),
        TensorTestFunction(BumpTestFunction([1.0], 1.0, 0.8), BumpTestFunction([0.0, 1.0], 0.6, 0.9), "st_3"),
        TensorTestFunction(BumpTestFunction([2.0, 0.0, -1.0], 1.8, 2.0), BumpTestFunction([1.0], 1.2, 1.5), "st_4"),
        TensorTestFunction(BumpTestFunction([1.0], 2.5, 0.5), BumpTestFunction([1.0, 0.5], 0.9, 1.1), "st_5"),
    ]
