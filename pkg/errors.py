#!/usr/bin/env python3
"""
Asymptotica error types

工作台各模块共用的异常类型。库函数直接抛出异常，实验调度层统一捕获并转换为结果字典。
"""

from typing import Optional


class AsymptoticaError(Exception):
    """所有工作台异常的基类"""

    exit_code = 1


# ---- 非阿基米德域 ----

class DomainMismatchError(AsymptoticaError, TypeError):
    """系数域(exact/float)或标量类型(real/complex)不一致"""


class FieldDivisionByZeroError(AsymptoticaError, ZeroDivisionError):
    """对零元求逆"""


class NoSquareRootInModelError(AsymptoticaError, ValueError):
    """奇数赋值：整数指数的Laurent模型中不存在平方根"""


class NonPositiveError(AsymptoticaError, ValueError):
    """要求正元素的运算收到了 <= 0 的输入"""


class UnorderedError(AsymptoticaError, TypeError):
    """复数类型不可比较大小"""


class NotFiniteError(AsymptoticaError, ValueError):
    """无穷大元素没有渐近分解"""


class ZeroHasNoClassError(AsymptoticaError, ValueError):
    """零元不属于任何尺度类"""


class InvalidElementError(AsymptoticaError, ValueError):
    """非法的有理函数(分母为零)等"""


# ---- 数值计算 ----

class NumericalError(AsymptoticaError):
    """数值求解失败"""

    exit_code = 3


class InfeasibleError(NumericalError):
    """线性规划不可行"""


class NumericalInconsistencyError(NumericalError):
    """两种独立算法的结果不一致"""


class NoSolutionFoundError(NumericalError):
    """Newton 迭代在多次重启后仍未收敛"""

    def __init__(self, message: str, best_residual: Optional[float] = None):
        super().__init__(message)
        self.best_residual = best_residual


class CoverageError(AsymptoticaError, ValueError):
    """测试函数的支集超出采样网格"""


class NoClassicalSolutionError(AsymptoticaError, ValueError):
    """时间超过激波形成时刻，特征线解不存在"""


# ---- 配置与表达式 ----

class ConfigurationError(AsymptoticaError, ValueError):
    """实验配置非法"""

    exit_code = 2


class ExpressionSyntaxError(AsymptoticaError, ValueError):
    """域表达式语法错误"""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EvaluationError(AsymptoticaError, ValueError):
    """域表达式求值错误"""
