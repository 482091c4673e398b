#!/usr/bin/env python3
"""
Quadrature helpers for Asymptotica

复合 Gauss-Legendre、Gauss-Hermite 节点以及 scipy 自适应积分的统一入口。
"""

import logging
from functools import lru_cache
from typing import Callable, Iterable, Tuple

import numpy as np
from scipy import integrate, special

from errors import NumericalError

logger = logging.getLogger(__name__)

DEFAULT_PANELS = 16
DEFAULT_ORDER = 16


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """[-1, 1] 上的 Gauss-Legendre 节点与权重"""
    nodes, weights = special.roots_legendre(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=16)
def gauss_hermite(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    权函数 e^{-y^2} 的 Gauss-Hermite 节点与权重

    高阶时 numpy 的 hermgauss 溢出，这里用 scipy 的渐近算法。

    Raises:
        NumericalError: 节点或权重不是有限数
    """
    nodes, weights = special.roots_hermite(order)
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
        raise NumericalError(f"Gauss-Hermite rule of order {order} has non-finite nodes or weights")
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_nodes(
    a: float,
    b: float,
    panels: int = DEFAULT_PANELS,
    order: int = DEFAULT_ORDER
) -> Tuple[np.ndarray, np.ndarray]:
    """[a, b] 均分为 panels 段，每段 order 点 Gauss-Legendre"""
    nodes, weights = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


def cell_nodes(
    edges: np.ndarray,
    order: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    按给定网格逐单元取 Gauss-Legendre 节点

    Returns:
        (x, w, cell, t): 节点、权重、所在单元编号以及单元内的相对位置 t ∈ (0, 1)
    """
    nodes, weights = gauss_legendre(order)
    edges = np.asarray(edges, dtype=float)
    width = np.diff(edges)
    t = 0.5 * (nodes + 1.0)
    x = (edges[:-1, None] + width[:, None] * t[None, :]).ravel()
    w = (0.5 * width[:, None] * weights[None, :]).ravel()
    cell = np.repeat(np.arange(len(width)), order)
    return x, w, cell, np.tile(t, len(width))


def integrate_panels(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    panels: int = DEFAULT_PANELS,
    order: int = DEFAULT_ORDER
) -> float:
    """复合 Gauss-Legendre 积分，func 需接受数组"""
    if b <= a:
        return 0.0 if b == a else -integrate_panels(func, b, a, panels, order)
    x, w = panel_nodes(a, b, panels, order)
    return float(np.dot(w, func(x)))


def integrate_with_check(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    panels: int = DEFAULT_PANELS,
    order: int = DEFAULT_ORDER,
    tolerance: float = 1e-8
) -> Tuple[float, float]:
    """
    加倍面板数的一致性检查

    Returns:
        (value, change): 细化后的积分值以及加倍前后的差
    """
    coarse = integrate_panels(func, a, b, panels, order)
    fine = integrate_panels(func, a, b, 2 * panels, order)
    change = abs(fine - coarse)
    if change > tolerance * max(1.0, abs(fine)):
        logger.warning(f"Quadrature on [{a}, {b}] changed by {change:.3e} under panel doubling")
    return fine, change


def adaptive_integral(
    func: Callable[[float], float],
    a: float,
    b: float,
    points: Iterable[float] = (),
    epsabs: float = 1e-13,
    epsrel: float = 1e-12,
    limit: int = 400
) -> float:
    """scipy.integrate.quad 包装，作为独立的积分对照"""
    breakpoints = sorted(p for p in points if a < p < b) or None
    value, _ = integrate.quad(func, a, b, points=breakpoints, epsabs=epsabs, epsrel=epsrel, limit=limit)
    return float(value)
