#!/usr/bin/env python3
"""
Rational Function Field for Asymptotica

实系数有理函数 P(x)/Q(x) 构成的有序域：f > 0 当且仅当 lead(P)·lead(Q) > 0。
该序与"存在 x0 使得 x > x0 时 f(x) > 0"的最终逐点序一致，x 是无穷大元素，1/x 是正无穷小。
通过 x = 1/ρ 代换嵌入截断 Laurent 域。
"""

import logging
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Union

from errors import DomainMismatchError, FieldDivisionByZeroError, InvalidElementError
from laurent_field import (
    EXACT,
    FLOAT,
    LaurentNumber,
    Ordering,
    get_field_settings,
)

logger = logging.getLogger(__name__)

Coefficient = Union[Fraction, float]
Poly = List[Coefficient]


# ---- 稠密多项式 (系数按升幂排列) ----

def _coerce(value: Any, domain: str) -> Coefficient:
    return Fraction(value) if domain == EXACT else float(value)


def poly_strip(f: Sequence[Coefficient]) -> Poly:
    """去掉最高次的零系数"""
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_degree(f: Sequence[Coefficient]) -> int:
    """零多项式的次数约定为 -1"""
    return len(poly_strip(f)) - 1


def poly_add(f: Sequence[Coefficient], g: Sequence[Coefficient]) -> Poly:
    size = max(len(f), len(g))
    return poly_strip([
        (f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
        for i in range(size)
    ])


def poly_neg(f: Sequence[Coefficient]) -> Poly:
    return [-c for c in f]


def poly_mul(f: Sequence[Coefficient], g: Sequence[Coefficient]) -> Poly:
    if not f or not g:
        return []
    result = [f[0] * 0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            result[i + j] += a * b
    return poly_strip(result)


def poly_divmod(f: Sequence[Coefficient], g: Sequence[Coefficient]):
    """带余除法 f = q·g + r"""
    g = poly_strip(g)
    if not g:
        raise FieldDivisionByZeroError("Polynomial division by zero")
    remainder = poly_strip(f)
    quotient: Poly = [0] * max(len(remainder) - len(g) + 1, 0)
    lead = g[-1]
    while remainder and len(remainder) >= len(g):
        shift = len(remainder) - len(g)
        factor = remainder[-1] / lead
        quotient[shift] = factor
        for i, c in enumerate(g):
            remainder[i + shift] -= factor * c
        remainder.pop()
        remainder = poly_strip(remainder)
    return poly_strip(quotient), remainder


def poly_gcd(f: Sequence[Coefficient], g: Sequence[Coefficient]) -> Poly:
    """Euclid 算法，结果首一化 (仅用于精确系数)"""
    a, b = poly_strip(f), poly_strip(g)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def poly_eval(f: Sequence[Coefficient], x: Coefficient) -> Coefficient:
    """Horner 求值"""
    result = x * 0
    for c in reversed(f):
        result = result * x + c
    return result


def cauchy_root_bound(f: Sequence[Coefficient]) -> Coefficient:
    """所有实根满足 |x| < 1 + max|a_i / a_n|"""
    f = poly_strip(f)
    if len(f) <= 1:
        return 0
    lead = f[-1]
    return 1 + max(abs(c / lead) for c in f[:-1])


class RationalFunctionElement:
    """
    有理函数域中的元素

    numerator/denominator 为升幂系数表。分母首项系数为正；精确模式下约去最大公因式并使分母首一。
    """

    __slots__ = ("numerator", "denominator", "domain")

    def __init__(
        self,
        numerator: Sequence[Any],
        denominator: Optional[Sequence[Any]] = None,
        domain: Optional[str] = None
    ):
        domain = domain or get_field_settings().coefficient_domain
        num = poly_strip([_coerce(c, domain) for c in numerator])
        den = poly_strip([_coerce(c, domain) for c in (denominator if denominator is not None else [1])])
        if not den:
            raise InvalidElementError("Rational function with zero denominator")

        if not num:
            den = [_coerce(1, domain)]
        elif domain == EXACT:
            common = poly_gcd(num, den)
            if len(common) > 1:
                num, _ = poly_divmod(num, common)
                den, _ = poly_divmod(den, common)
            lead = den[-1]
            num = [c / lead for c in num]
            den = [c / lead for c in den]
        elif den[-1] < 0:
            num, den = poly_neg(num), poly_neg(den)

        self.numerator: Poly = num
        self.denominator: Poly = den
        self.domain = domain

    @classmethod
    def x(cls, domain: Optional[str] = None) -> "RationalFunctionElement":
        """无穷大元素 x"""
        return cls([0, 1], [1], domain)

    @classmethod
    def constant(cls, value: Any, domain: Optional[str] = None) -> "RationalFunctionElement":
        return cls([value], [1], domain)

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    def _other(self, other: Any) -> "RationalFunctionElement":
        if isinstance(other, RationalFunctionElement):
            if other.domain != self.domain:
                raise DomainMismatchError(f"Coefficient domain mismatch: {self.domain} vs {other.domain}")
            return other
        return RationalFunctionElement.constant(other, self.domain)

    def __add__(self, other: Any) -> "RationalFunctionElement":
        other = self._other(other)
        num = poly_add(poly_mul(self.numerator, other.denominator),
                       poly_mul(other.numerator, self.denominator))
        return RationalFunctionElement(num, poly_mul(self.denominator, other.denominator), self.domain)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunctionElement":
        return RationalFunctionElement(poly_neg(self.numerator), self.denominator, self.domain)

    def __sub__(self, other: Any) -> "RationalFunctionElement":
        return self + (-self._other(other))

    def __rsub__(self, other: Any) -> "RationalFunctionElement":
        return self._other(other) - self

    def __mul__(self, other: Any) -> "RationalFunctionElement":
        other = self._other(other)
        return RationalFunctionElement(
            poly_mul(self.numerator, other.numerator),
            poly_mul(self.denominator, other.denominator),
            self.domain,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "RationalFunctionElement":
        other = self._other(other)
        if other.is_zero:
            raise FieldDivisionByZeroError("Division by the zero rational function")
        return RationalFunctionElement(
            poly_mul(self.numerator, other.denominator),
            poly_mul(self.denominator, other.numerator),
            self.domain,
        )

    def __rtruediv__(self, other: Any) -> "RationalFunctionElement":
        return self._other(other) / self

    def sign(self) -> int:
        """首项系数序下的符号"""
        if self.is_zero:
            return 0
        return 1 if self.numerator[-1] * self.denominator[-1] > 0 else -1

    def evaluate(self, x: Any) -> Coefficient:
        point = _coerce(x, self.domain)
        denominator = poly_eval(self.denominator, point)
        if denominator == 0:
            raise FieldDivisionByZeroError(f"Denominator vanishes at x = {x}")
        return poly_eval(self.numerator, point) / denominator

    def __eq__(self, other: Any) -> bool:
        try:
            return (self - self._other(other)).is_zero
        except (TypeError, DomainMismatchError):
            return NotImplemented

    __hash__ = None

    def __lt__(self, other: Any) -> bool:
        return rational_compare(self, self._other(other)) is Ordering.LESS

    def __gt__(self, other: Any) -> bool:
        return rational_compare(self, self._other(other)) is Ordering.GREATER

    def __repr__(self) -> str:
        return f"RationalFunctionElement({self.numerator!r}, {self.denominator!r})"


def rational_compare(f: RationalFunctionElement, g: RationalFunctionElement) -> Ordering:
    """f - g 的符号由化简后分子、分母首项系数之积决定"""
    sign = (f - g).sign()
    if sign == 0:
        return Ordering.EQUAL
    return Ordering.GREATER if sign > 0 else Ordering.LESS


def eventual_sign(f: RationalFunctionElement) -> int:
    """
    最终逐点符号：x 充分大时 f(x) 的符号

    在分子与分母所有实根的 Cauchy 上界之外取一点求值，该点之后 f 不再变号。
    """
    if f.is_zero:
        return 0
    x0 = 1 + max(cauchy_root_bound(f.numerator), cauchy_root_bound(f.denominator))
    value = f.evaluate(x0)
    return 1 if value > 0 else -1


def rational_to_laurent(f: RationalFunctionElement, truncation_order: int) -> LaurentNumber:
    """
    代换 x = 1/ρ 并展开到 ρ^K

    P(1/ρ) 与 Q(1/ρ) 是精确已知的 Laurent 多项式；在加宽的工作截断阶下相除后再截断到 K。
    """
    domain = f.domain
    p = max(poly_degree(f.numerator), 0)
    q = poly_degree(f.denominator)
    working = truncation_order + p + q + 2
    numerator = LaurentNumber({-i: c for i, c in enumerate(f.numerator)}, working, domain)
    denominator = LaurentNumber({-j: c for j, c in enumerate(f.denominator)}, working, domain)
    result = (numerator / denominator).truncate(truncation_order)
    if result.truncation_order < truncation_order:
        logger.warning(f"Expansion certified only through r^{result.truncation_order}")
    return result


if __name__ == "__main__":
    x = RationalFunctionElement.x()
    print("1/(x-1) ->", rational_to_laurent(1 / (x - 1), 6).render())
    print("x vs 1000:", rational_compare(x, RationalFunctionElement.constant(1000)))
