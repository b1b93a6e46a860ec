"""Immutable syntax tree for the generating-function expression language."""

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    """A named constant resolved at parse time (pi, e, or a config constant)."""

    name: str
    value: float


@dataclass(frozen=True)
class Unary:
    op: str  # '+' or '-'
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Const, Unary, BinOp, Call]

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY_PREC = 3


def children(node):
    if isinstance(node, Unary):
        return (node.operand,)
    if isinstance(node, BinOp):
        return (node.left, node.right)
    if isinstance(node, Call):
        return (node.arg,)
    return ()


def walk(node):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(children(n))


def unparse(node):
    """Render ``node`` back to source text that parses to an identical tree."""
    text, _ = _unparse(node)
    return text


def _unparse(node):
    if isinstance(node, Num):
        return repr(float(node.value)), 5
    if isinstance(node, (Var, Const)):
        return node.name, 5
    if isinstance(node, Call):
        return f"{node.func}({unparse(node.arg)})", 5
    if isinstance(node, Unary):
        inner, p = _unparse(node.operand)
        if p < _UNARY_PREC:
            inner = f"({inner})"
        return f"{node.op}{inner}", _UNARY_PREC
    prec = _PREC[node.op]
    left, lp = _unparse(node.left)
    right, rp = _unparse(node.right)
    if node.op == "^":
        # right-associative: only the left side needs guarding at equal prec
        if lp <= prec:
            left = f"({left})"
        if rp < _UNARY_PREC:
            right = f"({right})"
    else:
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
    return f"{left}{node.op}{right}", prec
