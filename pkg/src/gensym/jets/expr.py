"""Expression AST, recursive-descent parser and printer.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := ("-")? power
    power  := atom ("^" factor)?
    atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"

Identifiers that are neither coordinates nor constants are parameters and are
resolved at evaluation time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

# coordinate name -> slot in the 4-variable chart
VARIABLES = {
    "x": 0, "y": 1, "u": 2, "v": 3,
    "x1": 0, "x2": 1, "y1": 2, "y2": 3,
    "z": 2, "t": 3,
}
CONSTANTS = ("pi", "e")
FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "tan", "sec", "sinh", "cosh")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str

    @property
    def index(self) -> int:
        return VARIABLES[self.name]


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Param, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, val, off = self.advance()
        if val != text or kind != "op":
            raise ExprSyntaxError(f"expected {text!r}, got {val or 'end of input'!r}", off)

    def parse(self) -> Expr:
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {val!r}", off)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Neg(self.power())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, val, off = self.advance()
        if kind == "num":
            return Num(float(val))
        if kind == "ident":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "(":
                if val not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {val!r}", off)
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in VARIABLES:
                return Var(val)
            if val in CONSTANTS:
                return Const(val)
            return Param(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", off)


def parse_expr(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises :class:`ExprSyntaxError` carrying the offending offset.
    """
    return _Parser(source).parse()


def to_expr(obj) -> Expr:
    """Accept an AST node, a number or an expression string."""
    if isinstance(obj, (Num, Var, Const, Param, Neg, BinOp, Call)):
        return obj
    if isinstance(obj, (int, float)):
        return Num(float(obj)) if obj >= 0 else Neg(Num(-float(obj)))
    if isinstance(obj, str):
        return parse_expr(obj)
    raise TypeError(f"cannot build an expression from {type(obj).__name__}")


# Printing. Levels: 0 expr, 1 term, 2 factor, 3 power, 4 atom.
def _level(node: Expr) -> int:
    if isinstance(node, BinOp):
        return {"+": 0, "-": 0, "*": 1, "/": 1, "^": 3}[node.op]
    if isinstance(node, Neg):
        return 2
    return 4


def _wrap(node: Expr, min_level: int) -> str:
    text = print_expr(node)
    return f"({text})" if _level(node) < min_level else text


def print_expr(node: Expr) -> str:
    """Render an expression so that ``parse_expr`` rebuilds the same tree."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, (Var, Const, Param)):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({print_expr(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, 3)
    if node.op in "+-":
        return f"{_wrap(node.left, 0)} {node.op} {_wrap(node.right, 1)}"
    if node.op in "*/":
        return f"{_wrap(node.left, 1)}{node.op}{_wrap(node.right, 2)}"
    return f"{_wrap(node.left, 4)}^{_wrap(node.right, 2)}"


def free_params(node: Expr) -> set[str]:
    if isinstance(node, Param):
        return {node.name}
    if isinstance(node, Neg):
        return free_params(node.arg)
    if isinstance(node, Call):
        return free_params(node.arg)
    if isinstance(node, BinOp):
        return free_params(node.left) | free_params(node.right)
    return set()


def has_variables(node: Expr) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Neg, Call)):
        return has_variables(node.arg)
    if isinstance(node, BinOp):
        return has_variables(node.left) or has_variables(node.right)
    return False


# Small builders used when expressions are assembled programmatically.
def add(a, b) -> Expr:
    return BinOp("+", to_expr(a), to_expr(b))


def sub(a, b) -> Expr:
    return BinOp("-", to_expr(a), to_expr(b))


def mul(a, b) -> Expr:
    return BinOp("*", to_expr(a), to_expr(b))
