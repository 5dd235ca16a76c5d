"""Parser and evaluator for one-variable scalar expressions.

The language has decimal literals, the variable ``x``, unary minus, the
binary operators ``+ - * / ^`` and calls to a fixed set of functions
(abs, exp, log, sqrt, sin, cos and the two-argument pow).  ``^`` binds
tightest and associates to the right, then unary minus, then ``* /``,
then ``+ -``.  There is no implicit multiplication: ``2x`` is a syntax
error.

Expressions are immutable once parsed and evaluation is pure, so a
single Expression may be shared freely between threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

from .errors import DomainError, ExpressionSyntaxError, UnknownIdentifierError

__all__ = [
    "Expression",
    "parse",
    "evaluate",
    "numeric_derivative",
]

_FUNCTION_ARITY = {
    "abs": 1,
    "exp": 1,
    "log": 1,
    "sqrt": 1,
    "sin": 1,
    "cos": 1,
    "pow": 2,
}


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Node = Union[Const, Var, Neg, BinOp, Call]

# Precedence levels used by both the parser and the printer.
_P_SUM, _P_TERM, _P_UNARY, _P_POWER, _P_ATOM = 1, 2, 3, 4, 5


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r"|(?P<ws>\s+)"
)


def _tokenize(source: str) -> list:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup == "num":
            tokens.append(("num", m.group(), pos))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group(), pos))
        elif m.lastgroup == "op":
            tokens.append(("op", m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


# ---------------------------------------------------------------------------
# Recursive-descent parser


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ExpressionSyntaxError(f"expected '{op}'", pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.parse_sum()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected token {text!r}", pos)
        return node

    def parse_sum(self) -> Node:
        node = self.parse_term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.parse_term())
            else:
                return node

    def parse_term(self) -> Node:
        node = self.parse_unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.parse_unary())
            else:
                return node

    def parse_unary(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # Right associative; the exponent may carry its own unary minus.
            return BinOp("^", base, self.parse_unary())
        return base

    def parse_atom(self) -> Node:
        kind, text, pos = self.advance()
        if kind == "num":
            return Const(float(text))
        if kind == "name":
            if self.peek()[:2] == ("op", "("):
                arity = _FUNCTION_ARITY.get(text)
                if arity is None:
                    raise UnknownIdentifierError(text, pos)
                self.advance()
                args = [self.parse_sum()]
                while self.peek()[:2] == ("op", ","):
                    self.advance()
                    args.append(self.parse_sum())
                self.expect_op(")")
                if len(args) != arity:
                    raise ExpressionSyntaxError(
                        f"{text} takes {arity} argument(s), got {len(args)}", pos
                    )
                return Call(text, tuple(args))
            if text == "x":
                return Var()
            raise UnknownIdentifierError(text, pos)
        if kind == "op" and text == "(":
            node = self.parse_sum()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of input", pos)
        raise ExpressionSyntaxError(f"unexpected token {text!r}", pos)


# ---------------------------------------------------------------------------
# Printer (minimal parentheses, stable round trip)


def _format(node: Node) -> tuple:
    """Return (text, precedence) for a node."""
    if isinstance(node, Const):
        return repr(node.value), _P_ATOM
    if isinstance(node, Var):
        return "x", _P_ATOM
    if isinstance(node, Neg):
        text, prec = _format(node.operand)
        if prec < _P_UNARY:
            text = f"({text})"
        return f"-{text}", _P_UNARY
    if isinstance(node, Call):
        args = ",".join(_format(a)[0] for a in node.args)
        return f"{node.name}({args})", _P_ATOM
    if isinstance(node, BinOp):
        lt, lp = _format(node.left)
        rt, rp = _format(node.right)
        if node.op in "+-":
            if lp < _P_SUM:
                lt = f"({lt})"
            if rp <= _P_SUM:
                rt = f"({rt})"
            return f"{lt}{node.op}{rt}", _P_SUM
        if node.op in "*/":
            if lp < _P_TERM:
                lt = f"({lt})"
            if rp <= _P_TERM:
                rt = f"({rt})"
            return f"{lt}{node.op}{rt}", _P_TERM
        # power: base must be a bare atom, exponent parses as a unary
        if lp <= _P_POWER:
            lt = f"({lt})"
        if rp < _P_UNARY:
            rt = f"({rt})"
        return f"{lt}^{rt}", _P_POWER
    raise TypeError(f"not an expression node: {node!r}")


def format_node(node: Node) -> str:
    return _format(node)[0]


# ---------------------------------------------------------------------------
# Compiler: AST -> nested closures with real-domain checks


def _pow_checked(base: float, exponent: float, src: str) -> float:
    if base == 0.0 and exponent < 0.0:
        raise DomainError(src, base, "zero raised to a negative power")
    if base < 0.0 and not float(exponent).is_integer():
        raise DomainError(src, base, "negative base with non-integer exponent")
    try:
        return float(base**exponent)
    except OverflowError:
        raise DomainError(src, base, "overflow in power") from None


def _compile(node: Node) -> Callable[[float], float]:
    if isinstance(node, Const):
        v = node.value
        return lambda x: v
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        f = _compile(node.operand)
        return lambda x: -f(x)
    if isinstance(node, BinOp):
        lf = _compile(node.left)
        rf = _compile(node.right)
        if node.op == "+":
            return lambda x: lf(x) + rf(x)
        if node.op == "-":
            return lambda x: lf(x) - rf(x)
        if node.op == "*":
            return lambda x: lf(x) * rf(x)
        src = format_node(node)
        if node.op == "/":

            def _div(x: float) -> float:
                d = rf(x)
                if d == 0.0:
                    raise DomainError(src, x, "division by zero")
                return lf(x) / d

            return _div

        def _pow(x: float) -> float:
            return _pow_checked(lf(x), rf(x), src)

        return _pow
    if isinstance(node, Call):
        src = format_node(node)
        if node.name == "pow":
            af = _compile(node.args[0])
            bf = _compile(node.args[1])
            return lambda x: _pow_checked(af(x), bf(x), src)
        f = _compile(node.args[0])
        if node.name == "abs":
            return lambda x: abs(f(x))
        if node.name == "sin":
            return lambda x: math.sin(f(x))
        if node.name == "cos":
            return lambda x: math.cos(f(x))
        if node.name == "exp":

            def _exp(x: float) -> float:
                try:
                    return math.exp(f(x))
                except OverflowError:
                    raise DomainError(src, x, "overflow in exp") from None

            return _exp
        if node.name == "log":

            def _log(x: float) -> float:
                v = f(x)
                if v <= 0.0:
                    raise DomainError(src, v, "log of nonpositive value")
                return math.log(v)

            return _log
        if node.name == "sqrt":

            def _sqrt(x: float) -> float:
                v = f(x)
                if v < 0.0:
                    raise DomainError(src, v, "sqrt of negative value")
                return math.sqrt(v)

            return _sqrt
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Public interface


class Expression:
    """An immutable parsed expression, callable as a function of x."""

    __slots__ = ("ast", "source", "_fn")

    def __init__(self, ast: Node):
        object.__setattr__(self, "ast", ast)
        object.__setattr__(self, "source", format_node(ast))
        object.__setattr__(self, "_fn", _compile(ast))

    def __setattr__(self, name, value):
        raise AttributeError("Expression is immutable")

    def __call__(self, x: float) -> float:
        return self._fn(float(x))

    def __eq__(self, other) -> bool:
        return isinstance(other, Expression) and self.ast == other.ast

    def __hash__(self) -> int:
        return hash(self.ast)

    def __repr__(self) -> str:
        return f"Expression({self.source!r})"


def parse(source: str) -> Expression:
    """Parse expression text; raises ExpressionSyntaxError with a position."""
    if not source or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    return Expression(_Parser(source).parse())


def evaluate(e: Expression, x: float) -> float:
    """Evaluate at a point.  Deterministic: same x gives a bit-identical result."""
    return e(x)


def numeric_derivative(e: Expression, x: float, scale: float = 1e-6) -> float:
    """Central difference with step h = scale * max(1, |x|)."""
    h = scale * max(1.0, abs(x))
    return (e(x + h) - e(x - h)) / (2.0 * h)
