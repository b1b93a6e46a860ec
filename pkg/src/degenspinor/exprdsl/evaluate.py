"""Evaluation of expression trees over complex numbers or dual numbers.

Trees are compiled once into nested closures; the same closure serves plain
and dual evaluation because the arithmetic and function table are generic.
"""

import operator
from functools import lru_cache

from degenspinor.errors import NonAnalyticNode, UnboundVariable
from degenspinor.exprdsl import dual as dm
from degenspinor.exprdsl.ast import BinOp, Call, Const, Num, Unary, Var

_BINARY = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
    "^": dm.power,
}


def _compile(node):
    if isinstance(node, Num):
        v = complex(node.value)
        return lambda env: v
    if isinstance(node, Const):
        v = complex(node.value)
        return lambda env: v
    if isinstance(node, Var):
        name = node.name

        def var(env):
            try:
                return env[name]
            except KeyError:
                raise UnboundVariable(name) from None

        return var
    if isinstance(node, Unary):
        inner = _compile(node.operand)
        if node.op == "-":
            return lambda env: -inner(env)
        return inner
    if isinstance(node, BinOp):
        left, right = _compile(node.left), _compile(node.right)
        fn = _BINARY[node.op]
        return lambda env: fn(left(env), right(env))
    if isinstance(node, Call):
        arg = _compile(node.arg)
        fn = dm.FUNCTIONS[node.func]
        return lambda env: fn(arg(env))
    raise TypeError(f"not an expression node: {node!r}")


@lru_cache(maxsize=512)
def compiled(root):
    return _compile(root)


def evaluate(expr, bindings=None):
    """Complex value of ``expr`` with variables taken from ``bindings``."""
    env = {k: complex(v) for k, v in (bindings or {}).items()}
    return complex(compiled(expr.root)(env))


def evaluate_dual(expr, bindings=None):
    """Value and exact derivative of ``expr``.

    Bindings may be :class:`Dual` or plain numbers; the derivative is taken
    with respect to whichever binding carries a non-zero ``deriv``.
    """
    if expr.has_abs():
        raise NonAnalyticNode(f"abs() in {expr} cannot be differentiated")
    out = compiled(expr.root)(dict(bindings or {}))
    if not isinstance(out, dm.Dual):
        out = dm.Dual(complex(out), 0j)
    return out


def evaluate_generic(expr, bindings):
    """Evaluate without wrapping: plain in, plain out; dual in, dual out."""
    return compiled(expr.root)(bindings)
