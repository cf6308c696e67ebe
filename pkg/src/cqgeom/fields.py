"""Coordinate charts, the field expression language, and finite differences.

Fields are functions of four coordinates.  Expression-backed fields are
parsed from a small complex-valued language; derived fields produced by
transformations are plain Python callables.  Every consumer in the
geometry/gauge/transform modules accepts any ``point -> Biquaternion``
callable.

Expression grammar (a public contract; scenario files embed these strings)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative, binds above unary minus
    atom    := NUMBER | 'im' | 'pi' | IDENT | FUNC '(' expr ')' | '(' expr ')'
    FUNC    := sin cos tan exp log sqrt sinh cosh tanh

``im`` is the imaginary unit; identifiers must be chart coordinate names.
All functions use their principal complex branches; ``log`` of a
nonpositive real and division by zero are reported as domain errors.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import Biquaternion

__all__ = [
    "Chart",
    "FDConfig",
    "ExprError",
    "FieldDomainError",
    "parse_expr",
    "ScalarExprField",
    "ExprBiquatField",
    "eval_field",
    "partial",
]

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh")
RESERVED = set(FUNCTIONS) | {"im", "pi"}


class ExprError(ValueError):
    """Expression syntax or resolution error, with a 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class FieldDomainError(ArithmeticError):
    """Numerical domain violation during field evaluation."""


@dataclass(frozen=True)
class Chart:
    """Four named coordinates; no metric or topology attached."""

    names: tuple[str, str, str, str]

    def __post_init__(self) -> None:
        if len(self.names) != 4 or len(set(self.names)) != 4:
            raise ValueError("chart needs exactly 4 distinct coordinate names")
        for n in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise ValueError(f"invalid coordinate name {n!r}")
            if n in RESERVED:
                raise ValueError(f"coordinate name {n!r} collides with a reserved word")

    def index(self, name: str) -> int:
        return self.names.index(name)


@dataclass(frozen=True)
class FDConfig:
    """Central finite-difference configuration: step per coordinate, order 2 or 4."""

    step: float | Sequence[float] = 1e-4
    order: int = 4
    steps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        h = np.broadcast_to(np.asarray(self.step, dtype=float), (4,)).copy()
        if not np.all(h > 0):
            raise ValueError("finite-difference steps must be > 0")
        if self.order not in (2, 4):
            raise ValueError("finite-difference order must be 2 or 4")
        object.__setattr__(self, "steps", h)

    def halved(self) -> "FDConfig":
        return FDConfig(self.steps / 2, self.order)


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            # Skip pure whitespace tails; anything else is an error.
            if text[pos:].strip() == "":
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


# AST nodes: tuples ("num", v) ("im",) ("pi",) ("var", i) ("neg", a)
# ("+"|"-"|"*"|"/"|"^", a, b) ("call", name, a)


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.chart = chart
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}", pos)
        self.advance()

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprError(f"unexpected token {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                node = (val, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                node = (val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            return ("^", base, self.unary())
        return base

    def atom(self):
        kind, val, pos = self.advance()
        if kind == "num":
            return ("num", float(val))
        if kind == "ident":
            if val == "im":
                return ("im",)
            if val == "pi":
                return ("pi",)
            if val in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return ("call", val, arg)
            if val in self.chart.names:
                return ("var", self.chart.index(val))
            raise ExprError(f"unknown identifier {val!r}", pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprError("expected a value", pos)


def parse_expr(text: str, chart: Chart):
    """Parse an expression string into an AST; raises ExprError with position."""
    if not text.strip():
        raise ExprError("empty expression", 0)
    return _Parser(text, chart).parse()


# ---------------------------------------------------------------------------
# Evaluation (AST compiled once into a Python lambda over the coordinates)
# ---------------------------------------------------------------------------


def _div(a: complex, b: complex) -> complex:
    if b == 0:
        raise FieldDomainError("division by zero")
    return a / b


def _log(a: complex) -> complex:
    if a.imag == 0 and a.real <= 0:
        raise FieldDomainError(f"log of nonpositive real {a.real}")
    return cmath.log(a)


def _pow(a: complex, b: complex) -> complex:
    try:
        return a**b
    except ZeroDivisionError:
        raise FieldDomainError("zero raised to a negative power") from None


_EVAL_GLOBALS = {
    "__builtins__": {},
    "_pi": math.pi,
    "_div": _div,
    "_log": _log,
    "_pow": _pow,
    "_fn_sin": cmath.sin,
    "_fn_cos": cmath.cos,
    "_fn_tan": cmath.tan,
    "_fn_exp": cmath.exp,
    "_fn_log": _log,
    "_fn_sqrt": cmath.sqrt,
    "_fn_sinh": cmath.sinh,
    "_fn_cosh": cmath.cosh,
    "_fn_tanh": cmath.tanh,
}


def _emit(node) -> str:
    op = node[0]
    if op == "num":
        return repr(node[1])
    if op == "im":
        return "1j"
    if op == "pi":
        return "_pi"
    if op == "var":
        return f"_x{node[1]}"
    if op == "neg":
        return f"(-{_emit(node[1])})"
    if op in "+-*":
        return f"({_emit(node[1])}{op}{_emit(node[2])})"
    if op == "/":
        return f"_div({_emit(node[1])},{_emit(node[2])})"
    if op == "^":
        return f"_pow({_emit(node[1])},{_emit(node[2])})"
    if op == "call":
        return f"_fn_{node[1]}({_emit(node[2])})"
    raise AssertionError(f"unknown AST node {op!r}")


def compile_ast(ast) -> Callable[[complex, complex, complex, complex], complex]:
    src = f"lambda _x0, _x1, _x2, _x3: ({_emit(ast)})"
    return eval(compile(src, "<field-expr>", "eval"), _EVAL_GLOBALS)


class ScalarExprField:
    """A complex-valued function of the chart coordinates, parsed from text."""

    __slots__ = ("text", "chart", "ast", "_fn")

    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.chart = chart
        self.ast = parse_expr(text, chart)
        self._fn = compile_ast(self.ast)

    def __call__(self, p) -> complex:
        x = np.asarray(p, dtype=float)
        return complex(self._fn(complex(x[0]), complex(x[1]), complex(x[2]), complex(x[3])))

    def __repr__(self) -> str:
        return f"ScalarExprField({self.text!r})"


class ExprBiquatField:
    """A biquaternion field given by four component expressions."""

    __slots__ = ("components", "chart")

    def __init__(self, exprs: Sequence[str], chart: Chart):
        if len(exprs) != 4:
            raise ValueError("a biquaternion field needs exactly 4 component expressions")
        self.chart = chart
        self.components = tuple(ScalarExprField(e, chart) for e in exprs)

    def __call__(self, p) -> Biquaternion:
        vals = []
        for k, comp in enumerate(self.components):
            try:
                vals.append(comp(p))
            except FieldDomainError as exc:
                raise FieldDomainError(f"component {k}: {exc}") from None
        return Biquaternion(*vals)

    def __repr__(self) -> str:
        return f"ExprBiquatField({[c.text for c in self.components]!r})"


def eval_field(f, p) -> Biquaternion:
    """Evaluate any biquaternion field (expression-backed or callable) at p."""
    return f(np.asarray(p, dtype=float))


def partial(f, mu: int, p, fd: FDConfig):
    """Central finite-difference partial derivative along coordinate mu.

    Works for any field whose values support addition, subtraction and
    scalar multiplication (Biquaternion, complex, numpy arrays).
    """
    x = np.asarray(p, dtype=float)
    h = fd.steps[mu]
    e = np.zeros(4)
    e[mu] = h
    if fd.order == 2:
        return (f(x + e) - f(x - e)) * (0.5 / h)
    fp1, fm1 = f(x + e), f(x - e)
    fp2, fm2 = f(x + 2 * e), f(x - 2 * e)
    return (fm2 - fp2 + (fp1 - fm1) * 8.0) * (1.0 / (12.0 * h))
