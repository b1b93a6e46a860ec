"""Recursive-descent parser for the expression language.

Grammar (``^`` binds tighter than unary minus, so ``-2^2 == -4``)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"

Error offsets are byte offsets into the UTF-8 encoding of the source.
"""

import math
import re
from dataclasses import dataclass, field

from degenspinor.errors import ArityError, ExprSyntaxError, UnknownIdentifier
from degenspinor.exprdsl.ast import BinOp, Call, Const, Num, Unary, Var, unparse, walk
from degenspinor.exprdsl.dual import FUNCTIONS

BUILTIN_CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
)


@dataclass(frozen=True)
class Expr:
    """A parsed expression.  Equality is structural (tree only)."""

    root: object
    source: str = field(default="", compare=False)
    variables: tuple = field(default=(), compare=False)

    def free_variables(self):
        return frozenset(n.name for n in walk(self.root) if isinstance(n, Var))

    def has_abs(self):
        return any(isinstance(n, Call) and n.func == "abs" for n in walk(self.root))

    def unparse(self):
        return unparse(self.root)

    def __str__(self):
        return self.source or self.unparse()


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int  # byte offset


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text.encode("utf-8"))))
    return toks


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text, allowed_vars, constants):
        self.toks = _tokenize(text)
        self.i = 0
        self.allowed = set(allowed_vars)
        self.constants = dict(constants)

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        if self.tok.text != text or self.tok.kind == "end":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", self.tok.offset)
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            return Unary(op, self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                return self.call(tok)
            return self.resolve(tok)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExprSyntaxError(f"expected a value, found {found}", tok.offset)

    def call(self, name_tok):
        if name_tok.text not in FUNCTIONS:
            raise UnknownIdentifier(name_tok.text, name_tok.offset)
        self.advance()  # '('
        if self.tok.kind == "op" and self.tok.text == ")":
            raise ArityError(f"{name_tok.text}() takes exactly one argument", self.tok.offset)
        arg = self.expr()
        if self.tok.kind == "op" and self.tok.text == ",":
            raise ArityError(f"{name_tok.text}() takes exactly one argument", self.tok.offset)
        self.expect(")")
        return Call(name_tok.text, arg)

    def resolve(self, tok):
        name = tok.text
        if name in self.allowed:
            return Var(name)
        if name in self.constants:
            return Const(name, float(self.constants[name]))
        if name in BUILTIN_CONSTANTS:
            return Const(name, BUILTIN_CONSTANTS[name])
        if name in FUNCTIONS:
            raise ExprSyntaxError(f"function {name!r} needs an argument list", self.tok.offset)
        raise UnknownIdentifier(name, tok.offset)


def parse(text, allowed_vars=(), constants=None):
    """Parse ``text`` into an :class:`Expr` whose free variables lie in ``allowed_vars``.

    ``constants`` maps extra identifiers to real values; they are folded into
    the tree as :class:`Const` nodes.
    """
    if not isinstance(text, str):
        raise TypeError("expression source must be a string")
    if not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    root = _Parser(text, allowed_vars, constants or {}).parse()
    return Expr(root, text, tuple(allowed_vars))
