#!/usr/bin/env python3
"""
Laurent Field for Asymptotica

截断形式 Laurent 级数 Σ a_k ρ^k (ρ 为正无穷小) 构成的非阿基米德有序域。
提供精确(Fraction)或浮点系数的四则运算、求逆、正元开方、序比较、标准部分、
渐近分解、尺度分类以及复数分解。所有值构造后不可变。
"""

import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from numbers import Number
from typing import Any, Dict, Iterator, Mapping, Optional, Tuple, Union

from errors import (
    DomainMismatchError,
    FieldDivisionByZeroError,
    NoSquareRootInModelError,
    NonPositiveError,
    NotFiniteError,
    UnorderedError,
    ZeroHasNoClassError,
)

logger = logging.getLogger(__name__)

EXACT = "exact"
FLOAT = "float"
COEFFICIENT_DOMAINS = (EXACT, FLOAT)

REAL = "real"
COMPLEX = "complex"

DEFAULT_TRUNCATION = 16
FLOAT_NORMALIZATION_THRESHOLD = 1e-300

Coefficient = Union[Fraction, float]
Terms = Dict[int, Coefficient]


@dataclass(frozen=True)
class FieldSettings:
    """会话级域设置"""

    coefficient_domain: str = EXACT
    truncation_order: int = DEFAULT_TRUNCATION


_settings = FieldSettings()


def get_field_settings() -> FieldSettings:
    return _settings


def configure_field(
    coefficient_domain: Optional[str] = None,
    truncation_order: Optional[int] = None
) -> FieldSettings:
    """
    修改会话级系数域与截断阶

    Args:
        coefficient_domain: "exact" 或 "float"
        truncation_order: 截断阶 K

    Returns:
        生效后的设置
    """
    global _settings
    updates: Dict[str, Any] = {}
    if coefficient_domain is not None:
        if coefficient_domain not in COEFFICIENT_DOMAINS:
            raise DomainMismatchError(f"Unknown coefficient domain: {coefficient_domain}")
        updates["coefficient_domain"] = coefficient_domain
    if truncation_order is not None:
        updates["truncation_order"] = int(truncation_order)
    _settings = replace(_settings, **updates)
    return _settings


@contextmanager
def field_settings(
    coefficient_domain: Optional[str] = None,
    truncation_order: Optional[int] = None
) -> Iterator[FieldSettings]:
    """临时修改域设置，退出时恢复"""
    global _settings
    previous = _settings
    try:
        yield configure_field(coefficient_domain, truncation_order)
    finally:
        _settings = previous


class Ordering(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class Magnitude(Enum):
    """无穷小、有限非无穷小、无穷大"""

    INFINITESIMAL = "infinitesimal"
    FINITE_APPRECIABLE = "finite_appreciable"
    INFINITELY_LARGE = "infinitely_large"


class RhoClass(Enum):
    """ρ-尺度类 (互斥版本)"""

    RHO_NULL = "rho_null"
    RHO_INFINITESIMAL_PROPER = "rho_infinitesimal"
    RHO_CONSTANT = "rho_constant"
    RHO_FINITE_ONLY = "rho_finite_only"
    RHO_MODERATE_ONLY = "rho_moderate_only"


@dataclass(frozen=True)
class ScaleClass:
    """
    非零 Laurent 数的尺度分类

    在 Laurent 模型中，|x| ~ |a_m| ρ^m，于是(对一切 n 比较 ρ^m 与 ρ^{±1/n}, ρ^{±n})：
      - M_ρ: |x| <= ρ^{-n} 对某 n 成立，取 n = max(0, -m) + 1 即可，故所有非零数都是 ρ-moderate；
      - N_ρ: |x| < ρ^n 对一切 n 成立要求 m > n 对一切 n，非零数不可能，故 N_ρ = {0}；
      - I_ρ: |x| <= ρ^{1/n} 对某 n 成立当且仅当 m >= 1 (m = 0 时 |a_0| > ρ^{1/n})；
      - C_ρ: ρ^{1/n} < |x| < ρ^{-1/n} 对一切 n 成立当且仅当 m = 0；
      - F_ρ: |x| < ρ^{-1/n} 对一切 n 成立当且仅当 m >= 0。
    因此 F_ρ = I_ρ ∪ C_ρ，RHO_FINITE_ONLY 在本模型中为空。
    """

    magnitude: Magnitude
    rho_class: RhoClass
    valuation: int

    @property
    def is_rho_moderate(self) -> bool:
        return True

    @property
    def is_rho_null(self) -> bool:
        return self.rho_class is RhoClass.RHO_NULL

    @property
    def is_rho_finite(self) -> bool:
        return self.valuation >= 0

    @property
    def is_rho_infinitesimal(self) -> bool:
        return self.valuation >= 1

    @property
    def is_rho_constant(self) -> bool:
        return self.valuation == 0


# ---- 系数核 (实部 dict 运算) ----

def _coerce_coefficient(value: Any, domain: str) -> Coefficient:
    if domain == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, float) and not math.isfinite(value):
            raise DomainMismatchError(f"Non-finite coefficient {value} in exact domain")
        return Fraction(value)
    return float(value)


def _is_negligible(value: Coefficient, domain: str) -> bool:
    if domain == EXACT:
        return value == 0
    return abs(value) < FLOAT_NORMALIZATION_THRESHOLD


def _clean(terms: Mapping[int, Coefficient], truncation: int, domain: str) -> Terms:
    return {
        exponent: value
        for exponent, value in sorted(terms.items())
        if exponent <= truncation and not _is_negligible(value, domain)
    }


def _add_terms(left: Terms, right: Terms, sign: int = 1) -> Terms:
    result = dict(left)
    for exponent, value in right.items():
        result[exponent] = result.get(exponent, 0) + sign * value
    return result


def _mul_terms(left: Terms, right: Terms, truncation: int) -> Terms:
    result: Terms = {}
    for e1, c1 in left.items():
        for e2, c2 in right.items():
            exponent = e1 + e2
            if exponent <= truncation:
                result[exponent] = result.get(exponent, 0) + c1 * c2
    return result


def _scale_terms(terms: Terms, factor: Coefficient) -> Terms:
    return {exponent: value * factor for exponent, value in terms.items()}


def _shift_terms(terms: Terms, shift: int) -> Terms:
    return {exponent + shift: value for exponent, value in terms.items()}


def _unit_series(
    w: Terms,
    relative_truncation: int,
    coefficient_of_power
) -> Terms:
    """计算 Σ_j c_j w^j，w 的最低次数 >= 1，截断到相对阶 relative_truncation"""
    one = coefficient_of_power(0)
    series: Terms = {0: one}
    power: Terms = {0: 1}
    for j in range(1, relative_truncation + 1):
        power = _mul_terms(power, w, relative_truncation)
        if not power:
            break
        series = _add_terms(series, _scale_terms(power, coefficient_of_power(j)))
    return series


def _exact_sqrt(value: Fraction) -> Optional[Fraction]:
    numerator_root = math.isqrt(value.numerator)
    denominator_root = math.isqrt(value.denominator)
    if numerator_root * numerator_root == value.numerator and \
            denominator_root * denominator_root == value.denominator:
        return Fraction(numerator_root, denominator_root)
    return None


def _binomial_half(j: int, domain: str) -> Coefficient:
    """binom(1/2, j)"""
    half = Fraction(1, 2)
    result = Fraction(1)
    for i in range(j):
        result *= (half - i) / (i + 1)
    return result if domain == EXACT else float(result)


class LaurentNumber:
    """
    截断形式 Laurent 级数

    系数保存为 指数 -> 系数 的映射；指数大于 truncation_order 的项未知。
    复数类型分别保存实部与虚部的系数。零元用空系数集表示。
    """

    __slots__ = ("_re", "_im", "_truncation", "_domain")

    def __init__(
        self,
        coefficients: Optional[Mapping[int, Any]] = None,
        truncation_order: Optional[int] = None,
        domain: Optional[str] = None,
        imaginary: Optional[Mapping[int, Any]] = None
    ):
        settings = get_field_settings()
        domain = domain or settings.coefficient_domain
        if domain not in COEFFICIENT_DOMAINS:
            raise DomainMismatchError(f"Unknown coefficient domain: {domain}")
        truncation = settings.truncation_order if truncation_order is None else int(truncation_order)

        real_terms = {int(e): _coerce_coefficient(c, domain) for e, c in (coefficients or {}).items()}
        object.__setattr__(self, "_domain", domain)
        object.__setattr__(self, "_truncation", truncation)
        object.__setattr__(self, "_re", _clean(real_terms, truncation, domain))
        if imaginary is None:
            object.__setattr__(self, "_im", None)
        else:
            imag_terms = {int(e): _coerce_coefficient(c, domain) for e, c in imaginary.items()}
            object.__setattr__(self, "_im", _clean(imag_terms, truncation, domain))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentNumber is immutable")

    # ---- 构造 ----

    @classmethod
    def constant(cls, value: Any, truncation_order: Optional[int] = None,
                 domain: Optional[str] = None) -> "LaurentNumber":
        if isinstance(value, complex):
            return cls({0: value.real}, truncation_order, domain, imaginary={0: value.imag})
        return cls({0: value}, truncation_order, domain)

    @classmethod
    def monomial(cls, coefficient: Any, exponent: int, truncation_order: Optional[int] = None,
                 domain: Optional[str] = None) -> "LaurentNumber":
        return cls({exponent: coefficient}, truncation_order, domain)

    @classmethod
    def rho(cls, power: int = 1, truncation_order: Optional[int] = None,
            domain: Optional[str] = None) -> "LaurentNumber":
        """无穷小 ρ 的整数次幂"""
        return cls.monomial(1, power, truncation_order, domain)

    @classmethod
    def zero(cls, truncation_order: Optional[int] = None, domain: Optional[str] = None) -> "LaurentNumber":
        return cls({}, truncation_order, domain)

    @classmethod
    def one(cls, truncation_order: Optional[int] = None, domain: Optional[str] = None) -> "LaurentNumber":
        return cls({0: 1}, truncation_order, domain)

    @classmethod
    def from_parts(cls, real: "LaurentNumber", imag: "LaurentNumber") -> "LaurentNumber":
        """由实部 α 与虚部 β 组成 α + βi"""
        if real.is_complex or imag.is_complex:
            raise DomainMismatchError("Real and imaginary parts must be real-kind")
        if real.domain != imag.domain:
            raise DomainMismatchError(f"Domain mismatch: {real.domain} vs {imag.domain}")
        return cls(real._re, min(real.truncation_order, imag.truncation_order),
                   real.domain, imaginary=imag._re)

    @classmethod
    def parse(cls, text: str) -> "LaurentNumber":
        """解析 `3 + 1*r^1 - 2*r^2` 形式的文本"""
        from field_expression import evaluate, parse_field_expression
        return evaluate(parse_field_expression(text))

    # ---- 属性 ----

    @property
    def domain(self) -> str:
        return self._domain

    @property
    def kind(self) -> str:
        return REAL if self._im is None else COMPLEX

    @property
    def is_complex(self) -> bool:
        return self._im is not None

    @property
    def truncation_order(self) -> int:
        return self._truncation

    @property
    def certified_through(self) -> int:
        """所有系数已知的最高指数"""
        return self._truncation

    @property
    def coefficients(self) -> Terms:
        return dict(self._re)

    @property
    def imaginary_coefficients(self) -> Terms:
        return dict(self._im or {})

    @property
    def is_zero(self) -> bool:
        return not self._re and not self._im

    @property
    def valuation(self) -> Optional[int]:
        """最低非零项的指数；零元返回 None"""
        exponents = list(self._re) + list(self._im or {})
        return min(exponents) if exponents else None

    @property
    def leading_coefficient(self) -> Coefficient:
        if self.is_complex:
            raise UnorderedError("Complex Laurent numbers have no signed leading coefficient")
        if self.is_zero:
            return _coerce_coefficient(0, self._domain)
        return self._re[self.valuation]

    def coefficient(self, exponent: int) -> Coefficient:
        return self._re.get(exponent, _coerce_coefficient(0, self._domain))

    def _effective_valuation(self) -> int:
        # 零元在截断意义下的赋值下界
        valuation = self.valuation
        return self._truncation + 1 if valuation is None else valuation

    def truncate(self, truncation_order: int) -> "LaurentNumber":
        truncation = min(truncation_order, self._truncation)
        return LaurentNumber(self._re, truncation, self._domain, imaginary=self._im)

    def real_part(self) -> "LaurentNumber":
        return LaurentNumber(self._re, self._truncation, self._domain)

    def imaginary_part(self) -> "LaurentNumber":
        return LaurentNumber(self._im or {}, self._truncation, self._domain)

    def to_complex(self) -> "LaurentNumber":
        if self.is_complex:
            return self
        return LaurentNumber(self._re, self._truncation, self._domain, imaginary={})

    def to_domain(self, domain: str) -> "LaurentNumber":
        if domain == self._domain:
            return self
        imaginary = None if self._im is None else dict(self._im)
        return LaurentNumber(dict(self._re), self._truncation, domain, imaginary=imaginary)

    # ---- 运算 ----

    def _coerce(self, other: Any) -> "LaurentNumber":
        if isinstance(other, LaurentNumber):
            if other.domain != self._domain:
                raise DomainMismatchError(
                    f"Coefficient domain mismatch: {self._domain} vs {other.domain}")
            return other
        if isinstance(other, (Number, Fraction)):
            return LaurentNumber.constant(other, self._truncation, self._domain)
        raise TypeError(f"Cannot combine LaurentNumber with {type(other).__name__}")

    def _aligned(self, other: Any) -> Tuple["LaurentNumber", "LaurentNumber"]:
        other = self._coerce(other)
        if self.is_complex or other.is_complex:
            return self.to_complex(), other.to_complex()
        return self, other

    def _additive(self, other: Any, sign: int) -> "LaurentNumber":
        left, right = self._aligned(other)
        truncation = min(left._truncation, right._truncation)
        real = _add_terms(left._re, right._re, sign)
        imaginary = None
        if left.is_complex:
            imaginary = _add_terms(left._im, right._im, sign)
        return LaurentNumber(real, truncation, self._domain, imaginary=imaginary)

    def __add__(self, other: Any) -> "LaurentNumber":
        return self._additive(other, 1)

    def __radd__(self, other: Any) -> "LaurentNumber":
        return self._coerce(other)._additive(self, 1)

    def __sub__(self, other: Any) -> "LaurentNumber":
        return self._additive(other, -1)

    def __rsub__(self, other: Any) -> "LaurentNumber":
        return self._coerce(other)._additive(self, -1)

    def __neg__(self) -> "LaurentNumber":
        imaginary = None if self._im is None else _scale_terms(self._im, -1)
        return LaurentNumber(_scale_terms(self._re, -1), self._truncation, self._domain, imaginary=imaginary)

    def __pos__(self) -> "LaurentNumber":
        return self

    def __mul__(self, other: Any) -> "LaurentNumber":
        left, right = self._aligned(other)
        truncation = min(
            left._truncation + right._effective_valuation(),
            right._truncation + left._effective_valuation(),
        )
        if not left.is_complex:
            return LaurentNumber(_mul_terms(left._re, right._re, truncation), truncation, self._domain)
        real = _add_terms(
            _mul_terms(left._re, right._re, truncation),
            _mul_terms(left._im, right._im, truncation),
            -1,
        )
        imaginary = _add_terms(
            _mul_terms(left._re, right._im, truncation),
            _mul_terms(left._im, right._re, truncation),
        )
        return LaurentNumber(real, truncation, self._domain, imaginary=imaginary)

    def __rmul__(self, other: Any) -> "LaurentNumber":
        return self._coerce(other).__mul__(self)

    def __truediv__(self, other: Any) -> "LaurentNumber":
        return self * self._coerce(other).invert()

    def __rtruediv__(self, other: Any) -> "LaurentNumber":
        return self._coerce(other) * self.invert()

    def __pow__(self, exponent: int) -> "LaurentNumber":
        if not isinstance(exponent, int):
            raise TypeError("Only integer powers exist in the integer-exponent model")
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = LaurentNumber.one(self._truncation, self._domain)
        if self.is_complex:
            result = result.to_complex()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def invert(self) -> "LaurentNumber":
        """
        乘法逆元：赋值平移 + 几何级数展开

        a = c ρ^m (1 + w) 时 a^{-1} = c^{-1} ρ^{-m} Σ (-w)^j，结果截断阶为 K - 2m。
        """
        if self.is_zero:
            raise FieldDivisionByZeroError("Zero has no multiplicative inverse")
        if self.is_complex:
            conjugate = self.conjugate()
            return conjugate * self.modulus_squared().invert()

        m = self.valuation
        lead = self._re[m]
        relative_truncation = self._truncation - m
        w = {e - m: c / lead for e, c in self._re.items() if e != m}
        minus_one = _coerce_coefficient(-1, self._domain)
        series = _unit_series(w, relative_truncation, lambda j: minus_one ** j)
        inverse_lead = (1 / lead) if self._domain == FLOAT else Fraction(1) / lead
        terms = _shift_terms(_scale_terms(series, inverse_lead), -m)
        return LaurentNumber(terms, self._truncation - 2 * m, self._domain)

    def sqrt_positive(self) -> "LaurentNumber":
        """
        正元的平方根

        a = c ρ^{2k} (1 + w) 时 √a = √c ρ^k Σ binom(1/2, j) w^j。
        精确域中若 √c 不是有理数，则结果提升到浮点域。
        """
        if self.is_complex:
            raise UnorderedError("sqrt_positive requires a real-kind number")
        if self.is_zero or self.leading_coefficient < 0:
            raise NonPositiveError("sqrt_positive requires a > 0")
        m = self.valuation
        if m % 2:
            raise NoSquareRootInModelError(
                f"Valuation {m} is odd: no square root in the integer-exponent model")

        domain = self._domain
        lead = self._re[m]
        if domain == EXACT:
            root = _exact_sqrt(lead)
            if root is None:
                logger.warning(f"Leading coefficient {lead} is not a rational square; promoting to float")
                return self.to_domain(FLOAT).sqrt_positive()
        else:
            root = math.sqrt(lead)

        relative_truncation = self._truncation - m
        w = {e - m: c / lead for e, c in self._re.items() if e != m}
        series = _unit_series(w, relative_truncation, lambda j: _binomial_half(j, domain))
        terms = _shift_terms(_scale_terms(series, root), m // 2)
        return LaurentNumber(terms, self._truncation - m // 2, domain)

    def conjugate(self) -> "LaurentNumber":
        if not self.is_complex:
            return self
        return LaurentNumber(self._re, self._truncation, self._domain, imaginary=_scale_terms(self._im, -1))

    def modulus_squared(self) -> "LaurentNumber":
        """α² + β²"""
        alpha = self.real_part()
        beta = self.imaginary_part()
        return alpha * alpha + beta * beta

    # ---- 序 ----

    def compare(self, other: Any) -> Ordering:
        """a > b 当且仅当 a - b 的首项系数为正"""
        other = self._coerce(other)
        if self.is_complex or other.is_complex:
            raise UnorderedError("Complex Laurent numbers are not ordered")
        difference = self - other
        if difference.is_zero:
            return Ordering.EQUAL
        return Ordering.GREATER if difference.leading_coefficient > 0 else Ordering.LESS

    def __lt__(self, other: Any) -> bool:
        return self.compare(other) is Ordering.LESS

    def __le__(self, other: Any) -> bool:
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other: Any) -> bool:
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other: Any) -> bool:
        return self.compare(other) is not Ordering.LESS

    def __eq__(self, other: Any) -> bool:
        # 在双方共同已知的指数范围内逐项比较
        try:
            left, right = self._aligned(other)
        except (TypeError, DomainMismatchError):
            return NotImplemented
        truncation = min(left._truncation, right._truncation)
        if _clean(left._re, truncation, self._domain) != _clean(right._re, truncation, self._domain):
            return False
        if left.is_complex:
            return _clean(left._im, truncation, self._domain) == _clean(right._im, truncation, self._domain)
        return True

    __hash__ = None

    def close_to(self, other: Any, rel_tol: float = 1e-12, abs_tol: float = 0.0) -> bool:
        """浮点模式下逐项相对误差比较"""
        left, right = self._aligned(other)
        truncation = min(left._truncation, right._truncation)
        pairs = [(left._re, right._re)]
        if left.is_complex:
            pairs.append((left._im, right._im))
        for a_terms, b_terms in pairs:
            for exponent in set(a_terms) | set(b_terms):
                if exponent > truncation:
                    continue
                a = float(a_terms.get(exponent, 0))
                b = float(b_terms.get(exponent, 0))
                if not math.isclose(a, b, rel_tol=rel_tol, abs_tol=abs_tol):
                    return False
        return True

    def __abs__(self) -> "LaurentNumber":
        if self.is_complex:
            raise UnorderedError("Use complex_decompose for the modulus of a complex number")
        if self.is_zero or self.leading_coefficient > 0:
            return self
        return -self

    # ---- 标准部分与分类 ----

    def standard_part(self) -> Union[Coefficient, float, complex]:
        if self.is_complex:
            return complex(float(self.real_part().standard_part()),
                           float(self.imaginary_part().standard_part()))
        if self.is_zero:
            return _coerce_coefficient(0, self._domain)
        if self.valuation >= 0:
            return self.coefficient(0)
        return math.inf if self.leading_coefficient > 0 else -math.inf

    def asymptotic_split(self) -> Tuple[Union[Coefficient, complex], "LaurentNumber"]:
        """a = r + dx，r 为实数(标准部分)，dx 为无穷小"""
        if not self.is_finite():
            raise NotFiniteError("Infinitely large numbers have no asymptotic expansion")
        r = self.standard_part()
        return r, self - r

    def is_infinitesimal(self) -> bool:
        return self.is_zero or self.valuation >= 1

    def is_finite(self) -> bool:
        return self.is_zero or self.valuation >= 0

    def is_infinitely_large(self) -> bool:
        return not self.is_finite()

    def classify(self) -> ScaleClass:
        """
        按赋值 m 分类

        a ~ c ρ^m，故 |a| ≤ ρ^{-N} 对某个 N 恒成立：非零元都是 ρ-moderate。
        |a| < ρ^N 对所有 N 成立只能是 a = 0：ρ-null 只有零元。
        m ≥ 1 时 |a| ≤ 2|c|ρ < ρ^{1/2}：ρ-infinitesimal；m = 0 时 |c|/2 < |a| < 2|c|：ρ-constant；
        m ≥ 0 即 ρ-finite；m < 0 时 |a| 大于任意实数：无穷大且仅 ρ-moderate。
        """
        if self.is_zero:
            raise ZeroHasNoClassError("Zero belongs to no scale class")
        # 复数: val(α²+β²) = 2 min(val α, val β)，|γ| 的赋值即 min
        m = self.valuation
        if m >= 1:
            return ScaleClass(Magnitude.INFINITESIMAL, RhoClass.RHO_INFINITESIMAL_PROPER, m)
        if m == 0:
            return ScaleClass(Magnitude.FINITE_APPRECIABLE, RhoClass.RHO_CONSTANT, m)
        return ScaleClass(Magnitude.INFINITELY_LARGE, RhoClass.RHO_MODERATE_ONLY, m)

    # ---- 文本 ----

    def render(self) -> str:
        if self.is_complex:
            return f"({self.real_part().render()}) + ({self.imaginary_part().render()})*i"
        if self.is_zero:
            return "0"
        pieces = []
        for index, (exponent, value) in enumerate(sorted(self._re.items())):
            negative = value < 0
            magnitude = -value if negative else value
            text = _format_coefficient(magnitude)
            if exponent != 0:
                text = f"{text}*r^{exponent}"
            if index == 0:
                pieces.append(f"-{text}" if negative else text)
            else:
                pieces.append(f" - {text}" if negative else f" + {text}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"LaurentNumber({self.render()!r}, K={self._truncation}, {self._domain})"


def _format_coefficient(value: Coefficient) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


# ---- 函数式接口 ----

def arithmetic(a: LaurentNumber, b: LaurentNumber, op: str) -> LaurentNumber:
    operations = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__}
    if op not in operations:
        raise ValueError(f"Unknown operation: {op}")
    if a.domain != b.domain:
        raise DomainMismatchError(f"Coefficient domain mismatch: {a.domain} vs {b.domain}")
    return operations[op](b)


def invert(a: LaurentNumber) -> LaurentNumber:
    return a.invert()


def sqrt_positive(a: LaurentNumber) -> LaurentNumber:
    return a.sqrt_positive()


def compare(a: LaurentNumber, b: Any) -> Ordering:
    return a.compare(b)


def standard_part(a: LaurentNumber):
    return a.standard_part()


def asymptotic_split(a: LaurentNumber):
    return a.asymptotic_split()


def classify(a: LaurentNumber) -> ScaleClass:
    return a.classify()


def infinitely_close(a: LaurentNumber, b: Any) -> bool:
    """x ≈ y：x - y 为无穷小"""
    return (a - b).is_infinitesimal()


def rho_equal(a: LaurentNumber, b: Any) -> bool:
    """x =ρ y：x - y 为 ρ-null，即在截断阶内为零"""
    return (a - b).is_zero


@dataclass(frozen=True)
class ComplexParts:
    alpha: LaurentNumber
    beta: LaurentNumber
    modulus: Optional[LaurentNumber]


def complex_decompose(gamma: LaurentNumber) -> ComplexParts:
    """
    γ = α + βi 的唯一分解

    Returns:
        ComplexParts；当 α²+β² 的赋值为奇数时 modulus 为 None (模型中无平方根)
    """
    alpha = gamma.real_part()
    beta = gamma.imaginary_part()
    squared = alpha * alpha + beta * beta
    if squared.is_zero:
        return ComplexParts(alpha, beta, squared)
    if squared.valuation % 2:
        logger.warning("Modulus unavailable: odd valuation of alpha^2 + beta^2")
        return ComplexParts(alpha, beta, None)
    modulus = squared.sqrt_positive()
    if modulus.domain != alpha.domain:
        # 模长提升到浮点域时三个分量保持同一系数域
        alpha, beta = alpha.to_domain(modulus.domain), beta.to_domain(modulus.domain)
    return ComplexParts(alpha, beta, modulus)


if __name__ == "__main__":
    rho = LaurentNumber.rho()
    print("1/(1-r) =", (1 / (1 - rho)).render())
    print("sqrt(1+r) =", (1 + rho).sqrt_positive().render())
    print("classify(r^-3) =", (rho ** -3).classify())
