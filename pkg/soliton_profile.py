#!/usr/bin/env python3
"""
Soliton Profile for Asymptotica

孤立波剖面 Θ(x) = (Σ_{k=1..K} c_k x^{2k})·e^{-x²} 与矩系统
∫Θ² · ∫Θxⁿ = ∫Θ²xⁿ (0 <= n <= m) 的 Newton 求解。
Θ 为偶函数，奇数阶条件自动成立；没有常数项，Θ(0) = 0。
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from errors import ConfigurationError, NoSolutionFoundError
from utils import FileUtils

logger = logging.getLogger(__name__)

NEWTON_TOLERANCE = 1e-12
MAX_ITERATIONS = 60
MAX_RESTARTS = 8
DEFAULT_GROWTH_BOUND = 1e6


def double_factorial(n: int) -> int:
    return 1 if n <= 0 else n * double_factorial(n - 2)


def gaussian_moment(k: int, a: float) -> float:
    """∫ x^{2k} e^{-a x²} dx = (2k-1)!!/(2a)^k · √(π/a)"""
    if k < 0 or a <= 0:
        raise ValueError(f"gaussian_moment requires k >= 0 and a > 0, got k={k}, a={a}")
    return double_factorial(2 * k - 1) / (2 * a) ** k * math.sqrt(math.pi / a)


def gaussian_power_moment(p: int, a: float) -> float:
    """∫ x^p e^{-a x²} dx，奇数 p 为 0"""
    return 0.0 if p % 2 else gaussian_moment(p // 2, a)


def default_coefficient_count(m: int) -> int:
    return m // 2 + 2


@dataclass(frozen=True)
class SolitonProfile:
    """
    Θ(x) = Σ c_k x^{2k} e^{-x²}

    Attributes:
        coefficients: (c_1, ..., c_K)
        m: 已验证的矩阶
        residual: 求解结束时 ‖F‖∞
    """

    coefficients: Tuple[float, ...]
    m: int
    residual: float = 0.0

    def _poly(self, x2: np.ndarray, scale: float = 1.0) -> np.ndarray:
        total = np.zeros_like(x2)
        for k, c in enumerate(self.coefficients, start=1):
            total = total + c * x2 ** k
        return total

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        x2 = x * x
        return self._poly(x2) * np.exp(-x2)

    def polynomial_part(self, x) -> np.ndarray:
        """Θ(x) e^{x²}"""
        x = np.asarray(x, dtype=float)
        return self._poly(x * x)

    def derivative(self, x) -> np.ndarray:
        """Θ'(x) = Σ c_k (2k x^{2k-1} - 2x^{2k+1}) e^{-x²}"""
        x = np.asarray(x, dtype=float)
        return self.derivative_polynomial_part(x) * np.exp(-x * x)

    def derivative_polynomial_part(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for k, c in enumerate(self.coefficients, start=1):
            total = total + c * (2 * k * x ** (2 * k - 1) - 2 * x ** (2 * k + 1))
        return total

    def __call__(self, x):
        values = self.evaluate(np.atleast_1d(x))
        return values if np.ndim(x) else float(values[0])

    @property
    def theta_squared_integral(self) -> float:
        return profile_moments(self, 0)[1][0]

    def to_dict(self) -> Dict[str, Any]:
        first, second = profile_moments(self, max(self.m, 0))
        return {
            "m": self.m,
            "evenCoefficients": list(self.coefficients),
            "moments": {"theta": first, "thetaSquared": second},
            "thetaSquaredIntegral": second[0],
            "residual": self.residual,
        }


@lru_cache(maxsize=256)
def _closed_form_moments(coefficients: Tuple[float, ...], n_max: int) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    first = []
    second = []
    for n in range(n_max + 1):
        first.append(sum(c * gaussian_power_moment(2 * k + n, 1.0)
                         for k, c in enumerate(coefficients, start=1)))
        second.append(sum(ck * cl * gaussian_power_moment(2 * k + 2 * l + n, 2.0)
                          for k, ck in enumerate(coefficients, start=1)
                          for l, cl in enumerate(coefficients, start=1)))
    return tuple(first), tuple(second)


def profile_moments(profile: SolitonProfile, n_max: int) -> Tuple[List[float], List[float]]:
    """(∫Θxⁿ, ∫Θ²xⁿ)，n = 0..n_max，闭式"""
    first, second = _closed_form_moments(tuple(profile.coefficients), n_max)
    return list(first), list(second)


def quadrature_moments(
    func: Callable[[np.ndarray], np.ndarray],
    n_max: int,
    center: float = 0.0,
    half_width: float = 14.0
) -> Tuple[List[float], List[float]]:
    """自适应积分得到 (∫f xⁿ, ∫f² xⁿ)，作为闭式的独立对照"""
    lo, hi = center - half_width, center + half_width
    first, second = [], []
    for n in range(n_max + 1):
        first.append(integrate.quad(lambda x: float(func(x)) * x ** n, lo, hi,
                                    points=[center], epsabs=1e-14, epsrel=1e-13, limit=400)[0])
        second.append(integrate.quad(lambda x: float(func(x)) ** 2 * x ** n, lo, hi,
                                     points=[center], epsabs=1e-14, epsrel=1e-13, limit=400)[0])
    return first, second


def moment_identity_errors(first: Sequence[float], second: Sequence[float]) -> List[float]:
    """|∫f²·∫f xⁿ - ∫f² xⁿ| / max(1, |∫f² xⁿ|)"""
    norm = second[0]
    return [abs(norm * a - b) / max(1.0, abs(b)) for a, b in zip(first, second)]


def verify_profile(profile: SolitonProfile, m: Optional[int] = None) -> Dict[str, Any]:
    """用自适应积分独立复核矩条件"""
    m = profile.m if m is None else m
    first, second = quadrature_moments(profile, m)
    closed_first, closed_second = profile_moments(profile, m)
    errors = moment_identity_errors(first, second)
    return {
        "identity_errors": errors,
        "max_identity_error": max(errors),
        "closed_form_gap": max(abs(a - b) for a, b in zip(first + second, closed_first + closed_second)),
    }


# ---- Newton ----

def _moment_tables(count: int, conditions: int) -> Tuple[np.ndarray, np.ndarray]:
    """∫Θx^{2j} = (A c)_j，∫Θ²x^{2j} = cᵀ B_j c"""
    linear = np.array([[gaussian_moment(k + j, 1.0) for k in range(1, count + 1)] for j in range(conditions)])
    quadratic = np.array([[[gaussian_moment(k + l + j, 2.0) for l in range(1, count + 1)]
                           for k in range(1, count + 1)] for j in range(conditions)])
    return linear, quadratic


def _system(c: np.ndarray, linear: np.ndarray, quadratic: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """F_j(c) = ∫Θx^{2j} - ∫Θ²x^{2j}/∫Θ² 及其 Jacobian"""
    bc = quadratic @ c
    second = bc @ c
    norm = second[0]
    values = linear @ c - second / norm
    jacobian = linear - (2 * bc * norm - second[:, None] * 2 * bc[0][None, :]) / norm ** 2
    return values, jacobian


def _newton(c: np.ndarray, linear: np.ndarray, quadratic: np.ndarray) -> Tuple[np.ndarray, float]:
    """最小范数 Newton 步 (伪逆) 加回溯"""
    values, jacobian = _system(c, linear, quadratic)
    residual = float(np.max(np.abs(values)))
    for _ in range(MAX_ITERATIONS):
        if residual < NEWTON_TOLERANCE * 1e-2:
            break
        step = -np.linalg.pinv(jacobian) @ values
        t = 1.0
        while t > 1e-8:
            candidate = c + t * step
            if candidate @ quadratic[0] @ candidate > 0:
                new_values, new_jacobian = _system(candidate, linear, quadratic)
                new_residual = float(np.max(np.abs(new_values)))
                if new_residual < residual:
                    break
            t *= 0.5
        else:
            break
        c, values, jacobian, residual = candidate, new_values, new_jacobian, new_residual
    return c, residual


def solve_moment_system(
    m: int,
    coefficient_count: Optional[int] = None,
    seed: int = 0,
    initial: Optional[Sequence[float]] = None,
    max_restarts: int = MAX_RESTARTS
) -> SolitonProfile:
    """
    求解 F_j(c) = 0，j = 0..⌊m/2⌋

    起点依次为 initial (若给出)、m = 1 的闭式解 (2/√π, 0, ...)、以及固定种子的随机扰动。

    Raises:
        ConfigurationError: 系数个数不足
        NoSolutionFoundError: 所有重启都未收敛，附带最优残差
    """
    if m < 0:
        raise ConfigurationError(f"Moment order must be >= 0, got {m}")
    count = coefficient_count or default_coefficient_count(m)
    if count < math.ceil(m / 2) + 1:
        raise ConfigurationError(f"Need at least {math.ceil(m / 2) + 1} coefficients for m={m}, got {count}")

    conditions = m // 2 + 1
    linear, quadratic = _moment_tables(count, conditions)

    base = np.zeros(count)
    base[0] = 2.0 / math.sqrt(math.pi)
    starts = []
    if initial is not None:
        padded = np.zeros(count)
        padded[:min(count, len(initial))] = list(initial)[:count]
        starts.append(padded)
    starts.append(base)
    rng = np.random.default_rng(seed)
    for _ in range(max_restarts):
        starts.append(base + rng.normal(scale=0.5, size=count) * (np.arange(count) > 0))

    best_c, best_residual = None, math.inf
    for attempt, start in enumerate(starts):
        c, residual = _newton(start.astype(float), linear, quadratic)
        if residual < best_residual:
            best_c, best_residual = c, residual
        if residual < NEWTON_TOLERANCE:
            profile = SolitonProfile(tuple(float(v) for v in c), m, residual)
            logger.info(f"Solved moment system m={m} with {count} coefficients "
                        f"(attempt {attempt + 1}, residual {residual:.2e})")
            return profile
        logger.debug(f"Newton attempt {attempt + 1} for m={m} stalled at residual {residual:.2e}")

    raise NoSolutionFoundError(
        f"Moment system m={m} with {count} coefficients did not converge (best residual {best_residual:.2e})",
        best_residual=best_residual,
    )


def solve_profile_chain(m_max: int, seed: int = 0) -> Dict[int, SolitonProfile]:
    """m = 0..m_max 依次求解，每一步以上一步的系数为起点"""
    profiles: Dict[int, SolitonProfile] = {}
    previous = None
    for m in range(m_max + 1):
        profile = solve_moment_system(m, seed=seed, initial=previous)
        profiles[m] = profile
        previous = profile.coefficients
    return profiles


# ---- 平移 ----

@dataclass
class TranslatedProfile:
    """g(x) = f(x - shift)"""

    base: Callable[[Any], Any]
    shift: float

    def __call__(self, x):
        return self.base(np.asarray(x, dtype=float) - self.shift)


def translate_profile(f: Callable[[Any], Any], shift: float) -> Callable[[Any], Any]:
    """平移保持矩恒等式 (二项式展开把各阶条件线性混合)"""
    if shift == 0:
        return f
    return TranslatedProfile(f, float(shift))


def translated_moments(moments: Sequence[float], shift: float) -> List[float]:
    """∫f(x - k)xⁿ dx = Σ_i C(n,i) kⁿ⁻ⁱ ∫f xⁱ"""
    return [sum(math.comb(n, i) * shift ** (n - i) * moments[i] for i in range(n + 1))
            for n in range(len(moments))]


# ---- 有限性与文件 ----

def absolute_moments(profile: SolitonProfile, n_max: int, half_width: float = 14.0) -> Dict[str, List[float]]:
    """∫|Θxⁿ| 与 ∫|Θ²xⁿ|"""
    first, second = [], []
    for n in range(n_max + 1):
        first.append(2 * integrate.quad(lambda x: abs(profile(x)) * x ** n, 0, half_width, limit=200)[0])
        second.append(2 * integrate.quad(lambda x: profile(x) ** 2 * x ** n, 0, half_width, limit=200)[0])
    return {"theta": first, "thetaSquared": second}


def growth_report(profile: SolitonProfile, n_max: Optional[int] = None,
                  bound: float = DEFAULT_GROWTH_BOUND) -> Dict[str, Any]:
    """所有绝对矩不超过给定常数"""
    moments = absolute_moments(profile, profile.m if n_max is None else n_max)
    largest = max(moments["theta"] + moments["thetaSquared"])
    return {"absolute_moments": moments, "largest": largest, "bound": bound, "finite": largest <= bound}


def save_profile(profile: SolitonProfile, path: str) -> str:
    return FileUtils.write_json(path, profile.to_dict())


def load_profile(path: str) -> SolitonProfile:
    data = FileUtils.read_json(path)
    return SolitonProfile(tuple(float(c) for c in data["evenCoefficients"]), int(data["m"]),
                          float(data.get("residual", 0.0)))
