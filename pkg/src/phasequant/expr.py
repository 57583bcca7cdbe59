"""A small expression language for potentials ``V(x)`` and vector potentials.

Grammar (``^`` is right associative)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
    func   := exp | sin | cos | sqrt | abs

Unary minus binds looser than ``^``, so ``-x^2`` means ``-(x^2)``.
Both ``-`` and the Unicode minus sign are accepted.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
import re

import numpy as np

FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


class ExprSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ExprEvalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("numeric literal must be finite")


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


ExprAst = Num | Var | Neg | Bin | Call

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()−]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    unknown = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "op" and val == "−":
            val = "-"
        if kind == "name" and val != "x" and val not in FUNCTIONS:
            unknown.append((val, start))
        tokens.append((kind, val, start))
        pos = m.end()
    if unknown:
        listing = ", ".join(f"{name!r} (position {p})" for name, p in unknown)
        raise ExprSyntaxError(f"unknown identifier(s): {listing}; "
                              f"allowed are x and {', '.join(sorted(FUNCTIONS))}", unknown[0][1])
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val):
        kind, v, pos = self.take()
        if v != val:
            found = "end of input" if kind == "end" else repr(v)
            raise ExprSyntaxError(f"expected {val!r} but found {found}", pos)

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return Bin("^", base, self.unary())
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val == "x":
                return Var("x")
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(val, arg)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"expected a number, 'x', a function or '(' but found {found}", pos)


def parse_expr(text: str):
    """Parse ``text`` into an AST.

    Raises
    ------
    ExprSyntaxError
        With the character position of the offending token.
    """
    p = _Parser(text)
    if p.peek()[0] == "end":
        raise ExprSyntaxError("empty expression", 0)
    node = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected token {val!r}", pos)
    return node


# binding strength of each node kind, used to place parentheses
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(node):
    if isinstance(node, Bin):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    return _PREC["atom"]


def _wrap(node, need):
    s = render_expr(node)
    return f"({s})" if _prec(node) < need else s


def render_expr(node) -> str:
    """Inverse of :func:`parse_expr` up to whitespace."""
    if isinstance(node, Num):
        if node.value < 0:
            return f"({node.value!r})"
        return repr(float(node.value))
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Call):
        return f"{node.func}({render_expr(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _PREC["neg"])
    if isinstance(node, Bin):
        if node.op in "+-":
            return f"{_wrap(node.left, 1)} {node.op} {_wrap(node.right, 2)}"
        if node.op in "*/":
            return f"{_wrap(node.left, 2)} {node.op} {_wrap(node.right, 3)}"
        return f"{_wrap(node.left, 5)}^{_wrap(node.right, 3)}"
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node, x):
    """Evaluate on a scalar or array ``x`` (vectorised)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(node, x)
    out = np.asarray(out, dtype=float)
    if out.shape != x.shape:
        out = np.broadcast_to(out, x.shape).copy()
    if not np.all(np.isfinite(out)):
        raise ExprEvalError(f"expression {render_expr(node)!r} is not finite on the given points")
    return out if out.ndim else float(out)


def _eval(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.arg, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, x))
    a = _eval(node.left, x)
    b = _eval(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        if np.any(np.abs(b) < 1e-300):
            raise ExprEvalError(f"division by (near) zero in {render_expr(node)!r}")
        return a / b
    return np.power(a, b)


def as_expr(value):
    """Accept an AST, a string or a number."""
    if isinstance(value, (Num, Var, Neg, Bin, Call)):
        return value
    if isinstance(value, str):
        return parse_expr(value)
    if isinstance(value, (int, float)):
        return Num(float(value)) if value >= 0 else Neg(Num(-float(value)))
    raise TypeError(f"cannot interpret {value!r} as an expression")
