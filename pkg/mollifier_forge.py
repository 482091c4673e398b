#!/usr/bin/env python3
"""
Mollifier Forge for Asymptotica

构造基本集 B_n (一维) 的成员：对称、支集在 [-1/n, 1/n]、质量为 1、直到 n 阶的矩为 0、
L1 范数尽可能小的分段线性函数。求解方法为对称半网格上的 L1 最小化线性规划。
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import linprog

from errors import ConfigurationError, InfeasibleError, NumericalError
from quadrature import cell_nodes
from utils import FileUtils

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 401
DEFAULT_MOMENT_TOLERANCE = 1e-8
# 目标函数中偏向中心的打破平局项
CENTER_PREFERENCE = 1e-9
CSV_FLOAT_FORMAT = "%.17g"


def cell_order(n: int) -> int:
    """逐单元 Gauss-Legendre 点数，保证 n+2 次以内的矩精确"""
    return max(5, n // 2 + 2)


@dataclass(frozen=True)
class MollifierSpec:
    """B_n 成员的构造参数"""

    n: int
    grid_points: int = DEFAULT_GRID_POINTS
    moment_tolerance: float = DEFAULT_MOMENT_TOLERANCE

    def __post_init__(self):
        if self.n < 0:
            raise ConfigurationError(f"Basic-set index must be >= 0, got {self.n}")
        if self.grid_points % 2 == 0:
            raise ConfigurationError(f"grid_points must be odd, got {self.grid_points}")
        if self.grid_points < 2 * self.n + 3:
            raise ConfigurationError(
                f"grid_points={self.grid_points} is too small for n={self.n} (need >= {2 * self.n + 3})")
        if self.moment_tolerance <= 0:
            raise ConfigurationError("moment_tolerance must be positive")

    @property
    def support_radius(self) -> float:
        return 1.0 / self.n if self.n >= 1 else 1.0


@dataclass(frozen=True, eq=False)
class Mollifier:
    """
    网格上采样的磨光核 (按分段线性插值理解)

    Attributes:
        spec: 构造参数
        grid: 采样网格 (严格递增)
        values: 网格上的函数值
        achieved_moments: ∫x^k φ，k = 0..n
        achieved_l1: 插值函数的 ∫|φ|
        support_radius: 支集半径
        lp_objective: 线性规划的最优值 (节点加权 L1)
    """

    spec: MollifierSpec
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    achieved_moments: Tuple[float, ...]
    achieved_l1: float
    support_radius: float
    lp_objective: Optional[float] = None

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.grid, -self.grid[::-1]) and np.array_equal(self.values, self.values[::-1]))

    def evaluate(self, x) -> np.ndarray:
        return np.interp(x, self.grid, self.values, left=0.0, right=0.0)

    def quadrature_measure(self, order: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        """
        离散测度 (节点, 权重)：∫ g φ ≈ Σ w_q g(s_q)

        逐单元 Gauss-Legendre，对 2·order-2 次以内的多项式 g 精确。
        """
        x, w, _, _ = cell_nodes(self.grid, order or cell_order(self.n))
        weights = w * self.evaluate(x)
        keep = weights != 0.0
        return x[keep], weights[keep]

    def cumulative(self, x) -> np.ndarray:
        """Φ(x) = ∫_{-∞}^x φ"""
        x = np.clip(np.asarray(x, dtype=float), self.grid[0], self.grid[-1])
        widths = np.diff(self.grid)
        cumulative = np.concatenate([[0.0], np.cumsum(0.5 * widths * (self.values[:-1] + self.values[1:]))])
        cell = np.clip(np.searchsorted(self.grid, x, side="right") - 1, 0, self.grid.size - 2)
        return cumulative[cell] + 0.5 * (x - self.grid[cell]) * (self.values[cell] + self.evaluate(x))

    def summary(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "supportRadius": self.support_radius,
            "gridPoints": int(self.grid.size),
            "achievedMoments": list(self.achieved_moments),
            "achievedL1": self.achieved_l1,
        }


def hat_moment_row(grid: np.ndarray, k: int) -> np.ndarray:
    """∫ x^k hat_i(x) dx，hat_i 为节点 i 的分片线性基函数"""
    grid = np.asarray(grid, dtype=float)
    x, w, cell, t = cell_nodes(grid, max(2, k // 2 + 2))
    integrand = w * x ** k
    size = grid.size
    left = np.bincount(cell, weights=integrand * (1.0 - t), minlength=size)
    right = np.bincount(cell + 1, weights=integrand * t, minlength=size)
    return left + right


def piecewise_linear_l1(grid: np.ndarray, values: np.ndarray) -> float:
    """分段线性函数的 ∫|f|，单元内变号时按两段三角形精确计算"""
    a, b = values[:-1], values[1:]
    width = np.diff(grid)
    same_sign = a * b >= 0
    total = np.abs(a) + np.abs(b)
    safe = np.where(total > 0, total, 1.0)
    per_cell = np.where(same_sign, 0.5 * width * total, 0.5 * width * (a * a + b * b) / safe)
    return float(per_cell.sum())


def piecewise_linear_moment(grid: np.ndarray, values: np.ndarray, k: int) -> float:
    return float(np.dot(hat_moment_row(grid, k), values))


def make_mollifier(
    spec: MollifierSpec,
    grid: Sequence[float],
    values: Sequence[float],
    lp_objective: Optional[float] = None
) -> Mollifier:
    """由采样值组装 Mollifier 并计算其矩与 L1 范数"""
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    moments = tuple(piecewise_linear_moment(grid, values, k) for k in range(spec.n + 1))
    radius = float(max(abs(grid[0]), abs(grid[-1])))
    return Mollifier(spec, grid, values, moments, piecewise_linear_l1(grid, values), radius, lp_objective)


def symmetric_unit_grid(grid_points: int) -> np.ndarray:
    """[-1, 1] 上关于 0 精确对称的等距网格"""
    half = np.linspace(0.0, 1.0, (grid_points - 1) // 2 + 1)
    return np.concatenate([-half[:0:-1], half])


def _symmetric_expansion(grid_points: int) -> np.ndarray:
    """半网格自由变量 (中心与内部正节点) 到全网格值的映射矩阵；端点固定为 0"""
    center = (grid_points - 1) // 2
    free = center
    expansion = np.zeros((grid_points, free))
    for j in range(free):
        expansion[center + j, j] = 1.0
        expansion[center - j, j] = 1.0
    return expansion


def _polish(values: np.ndarray, a_eq: np.ndarray, b_eq: np.ndarray) -> np.ndarray:
    """在非零节点上做最小范数投影，把等式约束恢复到舍入误差水平"""
    scale = np.max(np.abs(values))
    active = np.abs(values) > 1e-14 * scale if scale > 0 else np.ones_like(values, dtype=bool)
    if np.count_nonzero(active) < a_eq.shape[0]:
        active = np.ones_like(values, dtype=bool)
    residual = a_eq @ values - b_eq
    correction = np.linalg.pinv(a_eq[:, active]) @ residual
    polished = values.copy()
    polished[active] -= correction
    return polished


def build_mollifier(spec: MollifierSpec) -> Mollifier:
    """
    求 L1 最小的对称网格函数

    在单位支集 [-1, 1] 上求解：对称性由半网格参数化保证，质量 1，偶数阶矩 x^{2j} (2 <= 2j <= n) 为 0，
    奇数阶矩因对称自动为 0。φ = φ⁺ - φ⁻，最小化 Σ w_i (φ⁺_i + φ⁻_i)。
    解随后缩放到 [-1/n, 1/n]：φ(x) = n·ψ(nx)，质量、矩的消失与 L1 范数均保持。

    Raises:
        InfeasibleError: 线性规划不可行
        NumericalError: 求解器未收敛
    """
    unit_grid = symmetric_unit_grid(spec.grid_points)
    expansion = _symmetric_expansion(spec.grid_points)
    free_nodes = unit_grid[(spec.grid_points - 1) // 2:][:expansion.shape[1]]

    even_orders = list(range(0, spec.n + 1, 2))
    a_eq = np.array([hat_moment_row(unit_grid, k) @ expansion for k in even_orders])
    b_eq = np.zeros(len(even_orders))
    b_eq[0] = 1.0

    node_weights = hat_moment_row(unit_grid, 0) @ expansion
    cost_half = node_weights * (1.0 + CENTER_PREFERENCE * free_nodes ** 2)
    cost = np.concatenate([cost_half, cost_half])
    a_split = np.hstack([a_eq, -a_eq])

    result = linprog(cost, A_eq=a_split, b_eq=b_eq, bounds=(0, None), method="highs")
    if result.status == 2:
        raise InfeasibleError(f"Mollifier LP infeasible for n={spec.n}, grid_points={spec.grid_points}")
    if not result.success:
        raise NumericalError(f"Mollifier LP failed for n={spec.n}: {result.message}")

    free = expansion.shape[1]
    half_values = _polish(result.x[:free] - result.x[free:], a_eq, b_eq)
    unit_values = expansion @ half_values

    radius = spec.support_radius
    mollifier = make_mollifier(spec, radius * unit_grid, unit_values / radius, float(np.dot(node_weights, np.abs(half_values))))
    logger.info(f"Built mollifier n={spec.n} on {spec.grid_points} points: L1={mollifier.achieved_l1:.10f}")
    return mollifier


def moment(phi: Mollifier, k: int) -> float:
    """∫x^k φ；对称核的奇数阶矩返回精确的 0"""
    if k < 0:
        raise ValueError(f"Moment order must be >= 0, got {k}")
    if k % 2 == 1 and phi.is_symmetric:
        return 0.0
    return piecewise_linear_moment(phi.grid, phi.values, k)


def scale_to_delta(phi: Mollifier, epsilon: float) -> Mollifier:
    """φ_ε(x) = ε⁻¹ φ(x/ε)，矩按 ε^k 缩放"""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if epsilon == 1:
        return phi
    moments = tuple(m * epsilon ** k for k, m in enumerate(phi.achieved_moments))
    return replace(
        phi,
        grid=phi.grid * epsilon,
        values=phi.values / epsilon,
        achieved_moments=moments,
        support_radius=phi.support_radius * epsilon,
    )


def shift_mollifier(phi: Mollifier, offset: float) -> Mollifier:
    """平移后的 (非对称) 核 x -> φ(x - offset)"""
    return make_mollifier(phi.spec, phi.grid + offset, phi.values, phi.lp_objective)


@dataclass
class MembershipReport:
    """B_n 的五个条件及其测量值"""

    n: int
    real_symmetric: bool
    support: bool
    mass: bool
    moments: bool
    l1_window: bool
    measured: Dict[str, Any]

    @property
    def all_passed(self) -> bool:
        return self.real_symmetric and self.support and self.mass and self.moments and self.l1_window

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["all_passed"] = self.all_passed
        return data


def verify_basic_set_membership(phi: Mollifier, n: int, tolerance: Optional[float] = None) -> MembershipReport:
    """检查 φ 是否满足 B_n 的全部条件"""
    tolerance = tolerance or phi.spec.moment_tolerance
    radius = 1.0 / n if n >= 1 else math.inf

    nonzero = np.nonzero(phi.values)[0]
    if nonzero.size:
        extent = float(max(abs(phi.grid[nonzero[0] - 1 if nonzero[0] > 0 else 0]),
                           abs(phi.grid[min(nonzero[-1] + 1, phi.grid.size - 1)])))
    else:
        extent = 0.0

    mass = moment(phi, 0)
    moments = {k: moment(phi, k) for k in range(1, n + 1)}
    l1 = phi.achieved_l1
    upper = 1.0 + 1.0 / n if n >= 1 else math.inf

    report = MembershipReport(
        n=n,
        real_symmetric=bool(np.all(np.isfinite(phi.values)) and phi.is_symmetric),
        support=extent <= radius * (1 + 1e-12),
        mass=abs(mass - 1.0) <= tolerance,
        moments=all(abs(value) <= tolerance for value in moments.values()),
        l1_window=1.0 - tolerance <= l1 < upper,
        measured={"support_extent": extent, "mass": mass, "moments": moments, "l1": l1, "l1_upper": upper},
    )
    if not report.all_passed:
        logger.debug(f"Mollifier n={phi.n} fails B_{n}: {report.to_dict()}")
    return report


def basic_set_chain(n_max: int, grid_points: int = DEFAULT_GRID_POINTS) -> List[Dict[str, Any]]:
    """
    构造 B_1, ..., B_nmax 并检查嵌套关系

    每个 B_n 的成员同时按 B_{n-1} 的条件检查 (B_{n} ⊆ B_{n-1})，
    窗口条件 1 + 1/(n-1) 比 1 + 1/n 宽松，因此只报告不单独判定。
    """
    rows = []
    for n in range(1, n_max + 1):
        phi = build_mollifier(MollifierSpec(n, grid_points))
        own = verify_basic_set_membership(phi, n)
        previous = verify_basic_set_membership(phi, n - 1) if n > 1 else None
        rows.append({
            "n": n,
            "achieved_l1": phi.achieved_l1,
            "member": own.all_passed,
            "member_of_previous": previous.all_passed if previous else None,
            "moments_ok": own.moments and own.mass,
        })
    return rows


def refinement_study(n: int, grids: Sequence[int] = (101, 201, 401)) -> Dict[str, Any]:
    """
    L1 窗口 ∫|φ| < 1 + 1/n 的网格细化研究

    通过标准：随网格加密 L1 非增，且最细网格的值不超过窗口上界的 105%。
    """
    rows = []
    for points in grids:
        phi = build_mollifier(MollifierSpec(n, points))
        rows.append({"grid_points": points, "achieved_l1": phi.achieved_l1, "lp_objective": phi.lp_objective})
    window = 1.0 + 1.0 / n if n >= 1 else math.inf
    values = [row["lp_objective"] for row in rows]
    non_increasing = all(b <= a + 1e-6 for a, b in zip(values, values[1:]))
    finest = rows[-1]["achieved_l1"]
    return {
        "n": n,
        "window": window,
        "rows": rows,
        "non_increasing": non_increasing,
        "finest_within_window": finest < window,
        "passed": non_increasing and finest <= 1.05 * window,
    }


def save_mollifier(phi: Mollifier, csv_path: str, json_path: Optional[str] = None) -> Dict[str, str]:
    """
    写出 `x,phi` CSV 与 JSON 摘要

    浮点数以 CSV_FLOAT_FORMAT (17 位有效数字) 写出，load_mollifier 以 round_trip 精度读回，
    两者配合保证网格与取值逐位还原。
    """
    FileUtils.ensure_report_dir(Path(csv_path).parent)
    pd.DataFrame({"x": phi.grid, "phi": phi.values}).to_csv(csv_path, index=False, float_format=CSV_FLOAT_FORMAT)
    json_path = json_path or str(Path(csv_path).with_suffix(".json"))
    FileUtils.write_json(json_path, phi.summary())
    return {"csv": csv_path, "json": json_path}


def load_mollifier(csv_path: str, json_path: Optional[str] = None) -> Mollifier:
    json_path = json_path or str(Path(csv_path).with_suffix(".json"))
    frame = pd.read_csv(csv_path, float_precision="round_trip")
    summary = FileUtils.read_json(json_path)
    spec = MollifierSpec(int(summary["n"]), int(summary["gridPoints"]))
    return make_mollifier(spec, frame["x"].to_numpy(), frame["phi"].to_numpy())
