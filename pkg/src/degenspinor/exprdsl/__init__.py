"""Tiny arithmetic language for generating functions: parse, evaluate, differentiate, integrate."""

from degenspinor.exprdsl.ast import unparse
from degenspinor.exprdsl.dual import Dual
from degenspinor.exprdsl.evaluate import evaluate, evaluate_dual, evaluate_generic
from degenspinor.exprdsl.parser import Expr, parse
from degenspinor.exprdsl.quadrature import gauss_legendre, integrate

__all__ = [
    "Dual",
    "Expr",
    "evaluate",
    "evaluate_dual",
    "evaluate_generic",
    "gauss_legendre",
    "integrate",
    "parse",
    "unparse",
]
