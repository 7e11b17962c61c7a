"""A tiny univariate expression language for ``q(t)`` and ``f(y)``.

Grammar (``^`` binds tighter than unary minus and is right-associative)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | VAR | FUNC '(' expr ')' | '(' expr ')'

so ``-y^2`` is ``-(y^2)`` and ``2^-1`` is ``0.5``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from . import specfun
from .exceptions import DomainError, FracLyapError

VARIABLES = ("t", "y")
MAX_DEPTH = 64


class ExprError(FracLyapError, ValueError):
    """Base class for parse and evaluation errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    pass


class WrongVariableError(ExprSyntaxError):
    pass


class EvalError(ExprError):
    pass


def _ln(x: float) -> float:
    if not x > 0.0:
        raise EvalError(f"ln of nonpositive value {x!r}")
    return math.log(x)


def _sqrt(x: float) -> float:
    if x < 0.0:
        raise EvalError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


def _gamma(x: float) -> float:
    try:
        return specfun.gamma(x)
    except DomainError as exc:
        raise EvalError(str(exc)) from None


FUNCTIONS = {
    "ln": _ln,
    "exp": math.exp,
    "sqrt": _sqrt,
    "abs": abs,
    "gamma": _gamma,
}


class Expr:
    """Immutable AST node; subclasses implement ``_eval`` and ``__str__``."""

    var_name: str = "t"

    def __call__(self, value: float) -> float:
        return evaluate(self, value)


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def __str__(self) -> str:
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr

    def __str__(self) -> str:
        return f"{self.func}({self.arg})"


@dataclass(frozen=True)
class Parsed:
    """A parsed expression bound to its free-variable name and source text."""

    root: Expr
    var_name: str
    source: str

    def __call__(self, value: float) -> float:
        return evaluate(self, value)

    def __str__(self) -> str:
        return str(self.root)


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int


def _tokenize(src: str) -> list[_Tok]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", _byte_offset(src, pos))
        if m.lastgroup != "ws":
            tokens.append(_Tok(m.lastgroup, m.group(), _byte_offset(src, pos)))
        pos = m.end()
    tokens.append(_Tok("end", "", _byte_offset(src, len(src))))
    return tokens


def _byte_offset(src: str, pos: int) -> int:
    return len(src[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, src: str, var_name: str):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.var_name = var_name
        self.depth = 0

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.pos]

    def advance(self) -> _Tok:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind == "num":
            found = self.tok.text or "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", self.tok.offset)
        self.advance()

    def enter(self) -> None:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ExprSyntaxError("expression nested too deeply", self.tok.offset)

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        self.enter()
        try:
            if self.tok.kind == "op" and self.tok.text in "+-":
                op = self.advance().text
                operand = self.unary()
                return Neg(operand) if op == "-" else operand
            return self.power()
        finally:
            self.depth -= 1

    def power(self) -> Expr:
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text == self.var_name:
                return Var(tok.text)
            if tok.text in VARIABLES:
                raise WrongVariableError(
                    f"variable {tok.text!r} not allowed here (expected {self.var_name!r})",
                    tok.offset,
                )
            raise UnknownIdentifierError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", tok.offset)


def parse(src: str, var_name: str = "t") -> Parsed:
    """Parse ``src`` as an expression in the single free variable ``var_name``."""
    if var_name not in VARIABLES:
        raise ValueError(f"var_name must be one of {VARIABLES}, got {var_name!r}")
    if not isinstance(src, str) or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return Parsed(_Parser(src, var_name).parse(), var_name, src)


def _eval(node: Expr, x: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, x))
    left = _eval(node.left, x)
    right = _eval(node.right, x)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        if right == 0.0:
            raise EvalError("division by zero")
        return left / right
    try:
        return math.pow(left, right)
    except ValueError:
        raise EvalError(f"{left!r} ^ {right!r} is not real") from None
    except ZeroDivisionError:
        raise EvalError(f"{left!r} ^ {right!r} divides by zero") from None


def evaluate(e: Parsed | Expr, value: float) -> float:
    """Evaluate an expression at ``value`` of its free variable."""
    root = e.root if isinstance(e, Parsed) else e
    try:
        result = _eval(root, float(value))
    except OverflowError:
        raise EvalError("overflow") from None
    except RecursionError:
        raise EvalError("expression too deep to evaluate") from None
    if not math.isfinite(result):
        raise EvalError(f"non-finite result {result!r}")
    return result
