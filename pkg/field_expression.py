#!/usr/bin/env python3
"""
Field Expression Parser

非阿基米德域计算器的表达式前端。文法：

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := base ('^' ['-' | '+'] INT)?
    base   := NUMBER | 'r' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := sqrt | st | inv

`r` 表示无穷小 ρ，指数只允许整数。
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from errors import (
    DomainMismatchError,
    EvaluationError,
    ExpressionSyntaxError,
    FieldDivisionByZeroError,
    NonPositiveError,
    NoSquareRootInModelError,
    NotFiniteError,
    UnorderedError,
    ZeroHasNoClassError,
)
from laurent_field import EXACT, FLOAT, LaurentNumber, field_settings, get_field_settings

logger = logging.getLogger(__name__)

FUNCTIONS = ("sqrt", "st", "inv")

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


# ---- 语法树 ----

@dataclass(frozen=True)
class Number:
    value: Fraction
    text: str = field(default="", compare=False)


@dataclass(frozen=True)
class Symbol:
    name: str = "r"


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    function: str
    argument: "Node"


Node = Union[Number, Symbol, Unary, Binary, Power, Call]


# ---- 词法与语法 ----

def tokenize(text: str) -> List[Tuple[str, str, int]]:
    """(kind, text, position) 列表，末尾追加 ('end', '', len)"""
    tokens = []
    position = 0
    stripped = text.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if not match or match.end() == position:
            column = position + len(stripped[position:]) - len(stripped[position:].lstrip())
            raise ExpressionSyntaxError(f"Unexpected character {stripped[column]!r}", column)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(("end", "", len(stripped)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def _advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _accept(self, op: str) -> bool:
        kind, value, _ = self.current
        if kind == "op" and value == op:
            self.index += 1
            return True
        return False

    def _expect(self, op: str) -> None:
        if not self._accept(op):
            kind, value, position = self.current
            found = "end of input" if kind == "end" else repr(value)
            raise ExpressionSyntaxError(f"Expected {op!r}, found {found}", position)

    def parse(self) -> Node:
        node = self.expr()
        kind, value, position = self.current
        if kind != "end":
            raise ExpressionSyntaxError(f"Unexpected {value!r}", position)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            if self._accept("+"):
                node = Binary("+", node, self.term())
            elif self._accept("-"):
                node = Binary("-", node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            if self._accept("*"):
                node = Binary("*", node, self.unary())
            elif self._accept("/"):
                node = Binary("/", node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        if self._accept("-"):
            return Unary("-", self.unary())
        if self._accept("+"):
            return Unary("+", self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.base()
        if not self._accept("^"):
            return base
        sign = -1 if self._accept("-") else 1
        if sign == 1:
            self._accept("+")
        kind, value, position = self.current
        if kind != "number" or not value.isdigit():
            raise ExpressionSyntaxError("Exponent must be an integer", position)
        self._advance()
        return Power(base, sign * int(value))

    def base(self) -> Node:
        kind, value, position = self.current
        if kind == "number":
            self._advance()
            return Number(Fraction(value), value)
        if kind == "name":
            self._advance()
            if value == "r":
                return Symbol("r")
            if value in FUNCTIONS:
                self._expect("(")
                argument = self.expr()
                self._expect(")")
                return Call(value, argument)
            raise ExpressionSyntaxError(f"Unknown name {value!r}", position)
        if self._accept("("):
            node = self.expr()
            self._expect(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise ExpressionSyntaxError(f"Unexpected {found}", position)


def parse_field_expression(text: str) -> Node:
    """
    解析表达式文本

    Raises:
        ExpressionSyntaxError: 带出错位置
    """
    return _Parser(text).parse()


def render(node: Node) -> str:
    """完全加括号的规范文本，重新解析得到相等的语法树"""
    if isinstance(node, Number):
        return node.text or str(node.value)
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Unary):
        return f"({node.op}{render(node.operand)})"
    if isinstance(node, Binary):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    if isinstance(node, Power):
        return f"({render(node.base)}^{node.exponent})"
    if isinstance(node, Call):
        return f"{node.function}({render(node.argument)})"
    raise TypeError(f"Not an expression node: {node!r}")


# ---- 求值 ----

def _evaluate(node: Node) -> LaurentNumber:
    if isinstance(node, Number):
        return LaurentNumber.constant(node.value)
    if isinstance(node, Symbol):
        return LaurentNumber.rho()
    if isinstance(node, Unary):
        operand = _evaluate(node.operand)
        return -operand if node.op == "-" else operand
    if isinstance(node, Binary):
        left, right = _evaluate(node.left), _evaluate(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    if isinstance(node, Power):
        return _evaluate(node.base) ** node.exponent
    if isinstance(node, Call):
        argument = _evaluate(node.argument)
        if node.function == "sqrt":
            return argument.sqrt_positive()
        if node.function == "inv":
            return argument.invert()
        if not argument.is_finite():
            raise NotFiniteError(f"st is undefined for the infinitely large {argument.render()}")
        return LaurentNumber.constant(argument.standard_part(), argument.truncation_order, argument.domain)
    raise TypeError(f"Not an expression node: {node!r}")


def evaluate(node: Node, truncation_order: Optional[int] = None,
             coefficient_domain: Optional[str] = None) -> LaurentNumber:
    """
    在当前会话 (或给定) 的截断阶与系数域下求值

    Raises:
        EvaluationError: 奇数赋值开方、零元求逆等域内不可定义的运算
    """
    overrides = {k: v for k, v in (("truncation_order", truncation_order),
                                   ("coefficient_domain", coefficient_domain)) if v is not None}
    try:
        with field_settings(**overrides):
            try:
                return _evaluate(node)
            except DomainMismatchError:
                # 精确域中 sqrt 的首项系数不是有理数平方时结果提升为浮点，整个表达式改在浮点域重算
                if get_field_settings().coefficient_domain != EXACT:
                    raise
                logger.warning(f"Expression {render(node)} needs an irrational square root; "
                               f"evaluating it with float coefficients")
                with field_settings(coefficient_domain=FLOAT):
                    return _evaluate(node)
    except NoSquareRootInModelError as e:
        raise EvaluationError(f"no square root in integer-exponent model: {e}") from e
    except (DomainMismatchError, FieldDivisionByZeroError, NonPositiveError, NotFiniteError, UnorderedError) as e:
        raise EvaluationError(str(e)) from e


def describe(value: LaurentNumber) -> Dict[str, Any]:
    """REPL 输出：规范文本、尺度类与标准部"""
    result: Dict[str, Any] = {"value": value.render(), "truncation_order": value.truncation_order}
    try:
        scale = value.classify()
        result["class"] = f"{scale.magnitude.value}/{scale.rho_class.value} (valuation {scale.valuation})"
    except ZeroHasNoClassError:
        result["class"] = "zero"
    except Exception as e:
        result["class"] = f"unavailable: {e}"
    if value.is_finite():
        result["standard_part"] = str(value.standard_part())
    else:
        result["standard_part"] = "none (infinitely large)"
    return result


def evaluate_text(text: str, truncation_order: Optional[int] = None,
                  coefficient_domain: Optional[str] = None) -> Dict[str, Any]:
    """解析、求值并描述一行输入"""
    return describe(evaluate(parse_field_expression(text), truncation_order, coefficient_domain))
