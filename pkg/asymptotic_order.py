#!/usr/bin/env python3
"""
Asymptotic Order Estimation for Asymptotica

把在一组 ε 上测得的量拟合为 ε 的幂次 (对数-对数最小二乘)，
并据此给出 ≅、≃ρ、≊ 三种弱相等关系的判定。
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from bump_functions import TestFunction

logger = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-13
MIN_SAMPLES = 3
MIN_DECADES = 2.0
MIN_R_SQUARED = 0.98
DEFAULT_MIN_ORDER = 0.5
DEFAULT_ORDER_BUDGET = 5


@dataclass
class OrderEstimate:
    """
    拟合得到的渐近阶 |value| ~ C ε^slope

    inconclusive 时 slope/intercept/r_squared 为 None。
    """

    samples: List[Tuple[float, float]]
    slope: Optional[float]
    intercept: Optional[float]
    r_squared: Optional[float]
    excluded: int = 0
    inconclusive: bool = False
    reason: str = ""

    def is_reliable(self, min_r_squared: float = MIN_R_SQUARED) -> bool:
        return not self.inconclusive and self.r_squared is not None and self.r_squared >= min_r_squared

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def fit_slope(
    samples: Iterable[Tuple[float, float]],
    floor: float = DEFAULT_FLOOR,
    min_decades: float = MIN_DECADES
) -> OrderEstimate:
    """
    log|value| 对 log ε 的最小二乘直线

    |value| <= floor 或非有限的样本被剔除并计数；可用样本少于 3 个或 ε 跨度不足 min_decades 个数量级时
    结果为 inconclusive。
    """
    samples = [(float(eps), float(value)) for eps, value in samples]
    usable = [(eps, abs(value)) for eps, value in samples
              if eps > 0 and math.isfinite(value) and abs(value) > floor]
    excluded = len(samples) - len(usable)

    if len(usable) < MIN_SAMPLES:
        return OrderEstimate(samples, None, None, None, excluded, True,
                             f"{len(usable)} usable samples above floor {floor:g}")
    eps = np.array([s[0] for s in usable])
    span = math.log10(eps.max() / eps.min())
    if span < min_decades - 1e-9:
        return OrderEstimate(samples, None, None, None, excluded, True,
                             f"epsilon spans {span:.2f} decades (< {min_decades})")

    log_eps = np.log(eps)
    log_val = np.log(np.array([s[1] for s in usable]))
    slope, intercept = np.polyfit(log_eps, log_val, 1)
    fitted = slope * log_eps + intercept
    ss_res = float(np.sum((log_val - fitted) ** 2))
    ss_tot = float(np.sum((log_val - log_val.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return OrderEstimate(samples, float(slope), float(intercept), r_squared, excluded, False)


def classify_order(estimate: OrderEstimate, order_budget: int = DEFAULT_ORDER_BUDGET,
                   tolerance: float = 0.2) -> str:
    """
    把测得的阶翻译成数的尺度类

    斜率超过 order_budget 视为在该截断下 ρ-null；正斜率为无穷小；接近 0 为有限；负斜率为无穷大。
    全部样本落在数值下限时同样按 ρ-null 处理。
    """
    if estimate.inconclusive:
        return "rho_null" if estimate.excluded == len(estimate.samples) else "inconclusive"
    if estimate.slope > order_budget:
        return "rho_null"
    if estimate.slope > tolerance:
        return "infinitesimal"
    if estimate.slope >= -tolerance:
        return "finite"
    return "infinitely_large"


class WeakEquality(Enum):
    PAIRING_EQUAL = "pairing-equal"
    PAIRING_RHO = "pairing-rho"
    PAIRING_INFINITESIMAL = "pairing-infinitesimal"


@dataclass
class WeakEqualityVerdict:
    kind: WeakEquality
    passed: bool
    order: Optional[OrderEstimate]
    per_tau: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "passed": self.passed,
            "order": self.order.to_dict() if self.order else None,
            "per_tau": self.per_tau,
        }


Pairing = Callable[[float, TestFunction], float]


def weak_equality_check(
    kind: WeakEquality,
    left: Pairing,
    right: Pairing,
    eps_grid: Sequence[float],
    panel: Sequence[TestFunction],
    floor: float = DEFAULT_FLOOR,
    min_order: float = DEFAULT_MIN_ORDER,
    order_budget: int = DEFAULT_ORDER_BUDGET
) -> WeakEqualityVerdict:
    """
    判定 A 与 B 在测试函数面板上的弱相等

    - pairing-equal (≅): 所有 ε、τ 上 |A - B| 处于数值下限
    - pairing-infinitesimal (≊): 拟合阶 >= min_order (> 0)
    - pairing-rho (≃ρ): 拟合阶超过截断 n* = order_budget
    任一 τ 不通过则整体不通过，并给出逐 τ 结果。
    """
    kind = WeakEquality(kind)
    per_tau: Dict[str, Dict[str, Any]] = {}
    estimates: List[OrderEstimate] = []

    for index, tau in enumerate(panel):
        name = getattr(tau, "name", f"tau_{index}")
        differences = []
        at_floor = True
        for eps in eps_grid:
            a = left(eps, tau)
            b = right(eps, tau)
            difference = abs(a - b)
            differences.append((float(eps), difference))
            if difference > floor * max(1.0, abs(a), abs(b)):
                at_floor = False
        estimate = fit_slope(differences, floor=floor)

        if kind is WeakEquality.PAIRING_EQUAL:
            passed = at_floor
        elif at_floor:
            passed = True
        elif estimate.inconclusive:
            passed = False
        elif kind is WeakEquality.PAIRING_INFINITESIMAL:
            passed = estimate.slope >= min_order
        else:
            passed = estimate.slope > order_budget

        per_tau[name] = {"passed": passed, "at_floor": at_floor, "slope": estimate.slope,
                         "r_squared": estimate.r_squared, "differences": differences}
        estimates.append(estimate)

    fitted = [e for e in estimates if not e.inconclusive]
    order = min(fitted, key=lambda e: e.slope) if fitted else (estimates[0] if estimates else None)
    passed = bool(per_tau) and all(row["passed"] for row in per_tau.values())
    if not passed and any(row["passed"] for row in per_tau.values()):
        failing = [name for name, row in per_tau.items() if not row["passed"]]
        logger.warning(f"{kind.value}: conflicting verdicts across the test panel, failing for {failing}")
    return WeakEqualityVerdict(kind, passed, order, per_tau)
