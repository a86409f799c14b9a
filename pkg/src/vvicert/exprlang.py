"""Small expression language for function pieces, region predicates and kernels.

The grammar is deliberately restricted to rational arithmetic with integer
powers so that every function piece is genuinely smooth and symbolic
differentiation is exact. Nonsmoothness is expressed only through the piece
structure; ``abs`` is accepted inside predicates, never inside piece formulas.

Variables are ``x1..xn`` (``x`` is accepted as an alias for ``x1`` when the
declared dimension is 1). In kernel context ``y1..yn`` are available as well.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatchError,
    DivisionByZeroError,
    NonSmoothOperatorError,
    ParseError,
)

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Neg",
    "Abs",
    "Predicate",
    "Comparison",
    "BoolOp",
    "parse",
    "parse_predicate",
    "evaluate",
    "evaluate_many",
    "differentiate",
    "to_string",
    "predicate_holds",
    "predicate_holds_many",
    "boundary_expressions",
    "EQ_TOLERANCE",
]

# Absolute tolerance for '=' comparisons inside predicates; piece boundaries
# must remain detectable in floating point.
EQ_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    """Base class for expression nodes. Immutable and safe to share."""


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    axis: str  # 'x' or 'y'
    index: int  # 0-based


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True)
class Abs(Expr):
    child: Expr


def _const(v: float) -> Const:
    # Normalize -0.0 so printed round-trips stay identical.
    return Const(v + 0.0)


def _add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _const(a.value + b.value)
    if isinstance(a, Const) and a.value == 0.0:
        return b
    if isinstance(b, Const) and b.value == 0.0:
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _const(a.value - b.value)
    if isinstance(b, Const) and b.value == 0.0:
        return a
    if isinstance(a, Const) and a.value == 0.0:
        return _neg(b)
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _const(a.value * b.value)
    if isinstance(a, Const):
        if a.value == 0.0:
            return _const(0.0)
        if a.value == 1.0:
            return b
    if isinstance(b, Const):
        if b.value == 0.0:
            return _const(0.0)
        if b.value == 1.0:
            return a
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const) and b.value == 1.0:
        return a
    if isinstance(a, Const) and a.value == 0.0 and not (isinstance(b, Const) and b.value == 0.0):
        return _const(0.0)
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return _const(a.value / b.value)
    return Div(a, b)


def _pow(base: Expr, k: int) -> Expr:
    if k == 1:
        return base
    if k == 0:
        return _const(1.0)
    if isinstance(base, Const):
        return _const(base.value ** k)
    return Pow(base, k)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return _const(-a.value)
    if isinstance(a, Neg):
        return a.child
    return Neg(a)


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------

_CMP_OPS = ("<", "<=", "=", ">=", ">")


@dataclass(frozen=True)
class Predicate:
    """Base class for region predicates."""


@dataclass(frozen=True)
class Comparison(Predicate):
    left: Expr
    op: str  # one of _CMP_OPS
    right: Expr


@dataclass(frozen=True)
class BoolOp(Predicate):
    op: str  # 'and' | 'or'
    parts: tuple


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

# Offsets in ParseError refer to the normalized text when unicode operators
# are used; ASCII input is unaffected.
_UNICODE_MAP = str.maketrans({"−": "-", "≤": "<=", "≥": ">="})

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<cmp><=|>=|==|<|>|=)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    src = text.translate(_UNICODE_MAP)
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            stripped = src[pos:].lstrip()
            at = len(src) - len(stripped)
            raise ParseError(f"unexpected character {src[at]!r}", at)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.end() - len(value)
        if kind == "cmp" and value == "==":
            value = "="
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens, dim: int, context: str, allow_abs: bool):
        self.tokens = tokens
        self.i = 0
        self.dim = dim
        self.context = context
        self.allow_abs = allow_abs

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol: str):
        kind, value, pos = self.peek()
        if kind == "op" and value == symbol:
            return self.advance()
        raise ParseError(f"expected '{symbol}'", pos)

    # expression grammar -----------------------------------------------------

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in ("+", "-"):
                self.advance()
                rhs = self.parse_term()
                node = _add(node, rhs) if value == "+" else _sub(node, rhs)
            else:
                return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in ("*", "/"):
                self.advance()
                rhs = self.parse_unary()
                node = _mul(node, rhs) if value == "*" else _div(node, rhs)
            else:
                return node

    def parse_unary(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "op" and value in ("-", "+"):
            self.advance()
            child = self.parse_unary()
            return _neg(child) if value == "-" else child
        return self.parse_power()

    def parse_power(self) -> Expr:
        node = self.parse_atom()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "^":
                self.advance()
                node = _pow(node, self.parse_int_exponent())
            else:
                return node

    def parse_int_exponent(self) -> int:
        sign = 1
        kind, value, pos = self.peek()
        if kind == "op" and value in ("-", "+"):
            self.advance()
            sign = -1 if value == "-" else 1
            kind, value, pos = self.peek()
        if kind != "num" or "." in value:
            raise ParseError("exponent must be an integer literal", pos)
        self.advance()
        return sign * int(value)

    def parse_atom(self) -> Expr:
        kind, value, pos = self.advance()
        if kind == "num":
            return _const(float(value))
        if kind == "op" and value == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if kind == "ident":
            name = value.lower()
            if name == "abs":
                if not self.allow_abs:
                    raise ParseError("abs is only permitted inside predicates", pos)
                self.expect_op("(")
                child = self.parse_expr()
                self.expect_op(")")
                return Abs(child)
            return self.parse_variable(name, pos)
        raise ParseError("expected a number, variable or '('", pos)

    def parse_variable(self, name: str, pos: int) -> Expr:
        m = re.fullmatch(r"([xy])(\d*)", name)
        if m is None:
            raise ParseError(f"unknown identifier '{name}'", pos)
        axis, digits = m.group(1), m.group(2)
        if axis == "y" and self.context != "kernel":
            raise ParseError("'y' variables are only available in kernel context", pos)
        if digits == "":
            if self.dim != 1:
                raise ParseError(
                    f"bare '{axis}' is only valid in dimension 1 (declared dim {self.dim})", pos
                )
            index = 0
        else:
            index = int(digits) - 1
        if not 0 <= index < self.dim:
            raise ParseError(
                f"variable index {index + 1} out of range for dimension {self.dim}", pos
            )
        return Var(axis, index)

    # predicate grammar ------------------------------------------------------

    def parse_predicate(self) -> Predicate:
        node = self.parse_and()
        parts = [node]
        while True:
            kind, value, _ = self.peek()
            if kind == "ident" and value.lower() == "or":
                self.advance()
                parts.append(self.parse_and())
            else:
                break
        return parts[0] if len(parts) == 1 else BoolOp("or", tuple(parts))

    def parse_and(self) -> Predicate:
        node = self.parse_comparison()
        parts = [node]
        while True:
            kind, value, _ = self.peek()
            if kind == "ident" and value.lower() == "and":
                self.advance()
                parts.append(self.parse_comparison())
            else:
                break
        return parts[0] if len(parts) == 1 else BoolOp("and", tuple(parts))

    def parse_comparison(self) -> Predicate:
        left = self.parse_expr()
        kind, value, pos = self.peek()
        if kind != "cmp":
            raise ParseError("expected a comparison operator", pos)
        self.advance()
        right = self.parse_expr()
        return Comparison(left, value, right)


def parse(text: str, dim: int, context: str = "function") -> Expr:
    """Parse an arithmetic expression over x1..x<dim> (plus y1..y<dim> for kernels).

    Raises ParseError with the character offset on malformed syntax, unknown
    identifiers, out-of-range variable indices, or abs outside predicates.
    """
    if context not in ("function", "kernel"):
        raise ValueError(f"context must be 'function' or 'kernel', got {context!r}")
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(_tokenize(text), dim, context, allow_abs=False)
    node = parser.parse_expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", pos)
    return node


def parse_predicate(text: str, dim: int, context: str = "function") -> Predicate:
    """Parse a region predicate: comparisons joined by and/or, abs permitted."""
    if not text or not text.strip():
        raise ParseError("empty predicate", 0)
    parser = _Parser(_tokenize(text), dim, context, allow_abs=True)
    node = parser.parse_predicate()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", pos)
    return node


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _eval(e: Expr, x, y):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        arr = x if e.axis == "x" else y
        if arr is None:
            raise DimensionMismatchError(
                f"variable {e.axis}{e.index + 1} has no bound value"
            )
        return arr[..., e.index]
    if isinstance(e, Add):
        return _eval(e.left, x, y) + _eval(e.right, x, y)
    if isinstance(e, Sub):
        return _eval(e.left, x, y) - _eval(e.right, x, y)
    if isinstance(e, Mul):
        return _eval(e.left, x, y) * _eval(e.right, x, y)
    if isinstance(e, Div):
        num = _eval(e.left, x, y)
        den = _eval(e.right, x, y)
        if np.any(np.asarray(den) == 0.0):
            raise DivisionByZeroError(to_string(e))
        return num / den
    if isinstance(e, Pow):
        base = _eval(e.base, x, y)
        if e.exponent < 0 and np.any(np.asarray(base) == 0.0):
            raise DivisionByZeroError(to_string(e))
        return base ** e.exponent
    if isinstance(e, Neg):
        return -_eval(e.child, x, y)
    if isinstance(e, Abs):
        return np.abs(_eval(e.child, x, y))
    raise TypeError(f"unknown node {type(e).__name__}")


def evaluate(e: Expr, point, y: Optional[np.ndarray] = None) -> float:
    """Evaluate at a single point (1-d array of length dim)."""
    x = np.asarray(point, dtype=float)
    yv = None if y is None else np.asarray(y, dtype=float)
    return float(_eval(e, x, yv))


def evaluate_many(e: Expr, x: np.ndarray, y: Optional[np.ndarray] = None) -> np.ndarray:
    """Vectorized evaluation over rows of x (and y in kernel context)."""
    x = np.asarray(x, dtype=float)
    out = _eval(e, x, None if y is None else np.asarray(y, dtype=float))
    if np.ndim(out) == 0:
        return np.full(x.shape[0], float(out))
    return np.asarray(out, dtype=float)


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------

def differentiate(e: Expr, var: int, axis: str = "x") -> Expr:
    """Exact symbolic partial derivative with respect to x<var+1> (0-based var).

    Raises NonSmoothOperatorError if an abs node is reached.
    """
    if isinstance(e, Const):
        return _const(0.0)
    if isinstance(e, Var):
        return _const(1.0) if (e.axis == axis and e.index == var) else _const(0.0)
    if isinstance(e, Add):
        return _add(differentiate(e.left, var, axis), differentiate(e.right, var, axis))
    if isinstance(e, Sub):
        return _sub(differentiate(e.left, var, axis), differentiate(e.right, var, axis))
    if isinstance(e, Mul):
        return _add(
            _mul(differentiate(e.left, var, axis), e.right),
            _mul(e.left, differentiate(e.right, var, axis)),
        )
    if isinstance(e, Div):
        num = _sub(
            _mul(differentiate(e.left, var, axis), e.right),
            _mul(e.left, differentiate(e.right, var, axis)),
        )
        return _div(num, _pow(e.right, 2))
    if isinstance(e, Pow):
        inner = differentiate(e.base, var, axis)
        return _mul(_mul(_const(float(e.exponent)), _pow(e.base, e.exponent - 1)), inner)
    if isinstance(e, Neg):
        return _neg(differentiate(e.child, var, axis))
    if isinstance(e, Abs):
        raise NonSmoothOperatorError("cannot differentiate through abs")
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PRECEDENCE = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Const: 5, Var: 5, Abs: 5}


def _paren(child: Expr, parent_prec: int, right_side: bool = False) -> str:
    text = to_string(child)
    prec = _PRECEDENCE[type(child)]
    if prec < parent_prec or (right_side and prec == parent_prec):
        return f"({text})"
    return text


def to_string(e: Expr) -> str:
    """Render the expression; parse(to_string(e)) evaluates identically to e."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return f"{e.axis}{e.index + 1}"
    if isinstance(e, Add):
        return f"{_paren(e.left, 1)} + {_paren(e.right, 1)}"
    if isinstance(e, Sub):
        return f"{_paren(e.left, 1)} - {_paren(e.right, 1, right_side=True)}"
    if isinstance(e, Mul):
        return f"{_paren(e.left, 2)}*{_paren(e.right, 2)}"
    if isinstance(e, Div):
        return f"{_paren(e.left, 2)}/{_paren(e.right, 2, right_side=True)}"
    if isinstance(e, Pow):
        return f"{_paren(e.base, 5)}^{e.exponent}"
    if isinstance(e, Neg):
        return f"-{_paren(e.child, 3)}"
    if isinstance(e, Abs):
        return f"abs({to_string(e.child)})"
    raise TypeError(f"unknown node {type(e).__name__}")


def predicate_to_string(p: Predicate) -> str:
    if isinstance(p, Comparison):
        return f"{to_string(p.left)} {p.op} {to_string(p.right)}"
    if isinstance(p, BoolOp):
        return f" {p.op} ".join(predicate_to_string(q) for q in p.parts)
    raise TypeError(f"unknown predicate {type(p).__name__}")


# ---------------------------------------------------------------------------
# Predicate evaluation
# ---------------------------------------------------------------------------

def _compare(diff, op: str, slack: float):
    # Regions are inflated by `slack`: every comparison admits a margin of
    # slack on the unfavourable side. '=' additionally uses EQ_TOLERANCE.
    if op == "<":
        return diff < slack
    if op == "<=":
        return diff <= slack
    if op == ">":
        return diff > -slack
    if op == ">=":
        return diff >= -slack
    if op == "=":
        return np.abs(diff) <= EQ_TOLERANCE + slack
    raise ValueError(f"unknown comparison {op!r}")


def predicate_holds(p: Predicate, point, slack: float = 0.0) -> bool:
    x = np.asarray(point, dtype=float)
    return bool(_pred_eval(p, x, slack))


def predicate_holds_many(p: Predicate, x: np.ndarray, slack: float = 0.0) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = _pred_eval(p, x, slack)
    if np.ndim(out) == 0:
        return np.full(x.shape[0], bool(out))
    return np.asarray(out, dtype=bool)


def _pred_eval(p: Predicate, x, slack: float):
    if isinstance(p, Comparison):
        diff = _eval(p.left, x, None) - _eval(p.right, x, None)
        return _compare(diff, p.op, slack)
    if isinstance(p, BoolOp):
        vals = [_pred_eval(q, x, slack) for q in p.parts]
        out = vals[0]
        for v in vals[1:]:
            out = np.logical_and(out, v) if p.op == "and" else np.logical_or(out, v)
        return out
    raise TypeError(f"unknown predicate {type(p).__name__}")


def boundary_expressions(p: Predicate) -> list:
    """Left-minus-right expressions of every comparison; their zero sets are
    the candidate region boundaries used by the boundary probing heuristics."""
    if isinstance(p, Comparison):
        return [_sub(p.left, p.right)]
    if isinstance(p, BoolOp):
        out = []
        for q in p.parts:
            out.extend(boundary_expressions(q))
        return out
    raise TypeError(f"unknown predicate {type(p).__name__}")
