"""Forward-mode dual numbers over complex scalars.

A :class:`Dual` carries ``value + deriv * eps`` with ``eps**2 == 0``.  Duals can
be nested for mixed second derivatives: each one has an integer ``tag`` and a
dual with a higher tag treats lower-tagged duals as ordinary scalars.  This
avoids perturbation confusion when differentiating in two directions.

The module-level functions (:func:`exp`, :func:`sin`, ...) accept plain
numbers or duals and are what the expression evaluator and the spinor
builders call, so one code path serves both plain and differentiated
evaluation.
"""

import cmath


class Dual:
    __slots__ = ("value", "deriv", "tag")

    def __init__(self, value, deriv=0.0, tag=0):
        self.value = value
        self.deriv = deriv
        self.tag = tag

    def __repr__(self):
        return f"Dual({self.value!r}, {self.deriv!r}, tag={self.tag})"

    # Returns (a, da, b, db) with both operands lifted to self's tag, or None
    # when ``other`` is a dual of a higher tag (it must then drive the op).
    def _split(self, other):
        if isinstance(other, Dual):
            if other.tag == self.tag:
                return other.value, other.deriv
            if other.tag > self.tag:
                return None
        return other, 0.0

    def __add__(self, other):
        o = self._split(other)
        if o is None:
            return other.__radd__(self)
        return Dual(self.value + o[0], self.deriv + o[1], self.tag)

    def __radd__(self, other):
        return Dual(other + self.value, self.deriv, self.tag)

    def __sub__(self, other):
        o = self._split(other)
        if o is None:
            return other.__rsub__(self)
        return Dual(self.value - o[0], self.deriv - o[1], self.tag)

    def __rsub__(self, other):
        return Dual(other - self.value, -self.deriv, self.tag)

    def __mul__(self, other):
        o = self._split(other)
        if o is None:
            return other.__rmul__(self)
        return Dual(self.value * o[0], self.value * o[1] + self.deriv * o[0], self.tag)

    def __rmul__(self, other):
        return Dual(other * self.value, other * self.deriv, self.tag)

    def __truediv__(self, other):
        o = self._split(other)
        if o is None:
            return other.__rtruediv__(self)
        b, db = o
        return Dual(self.value / b, (self.deriv * b - self.value * db) / (b * b), self.tag)

    def __rtruediv__(self, other):
        v = self.value
        return Dual(other / v, -other * self.deriv / (v * v), self.tag)

    def __neg__(self):
        return Dual(-self.value, -self.deriv, self.tag)

    def __pos__(self):
        return self

    def __pow__(self, other):
        if isinstance(other, Dual):
            if other.tag > self.tag:
                return other.__rpow__(self)
            if other.tag == self.tag:
                return exp(other * log(self))
        n = _as_int(other)
        if n is not None:
            if n == 0:
                return Dual(_one_like(self.value), 0.0 * self.deriv, self.tag)
            return Dual(self.value ** n, n * self.value ** (n - 1) * self.deriv, self.tag)
        return Dual(self.value ** other, other * self.value ** (other - 1) * self.deriv, self.tag)

    def __rpow__(self, other):
        # constant ** dual
        return exp(self * log(other))


def _one_like(x):
    return x ** 0 if isinstance(x, Dual) else 1.0


def _as_int(x):
    """Integral-valued real exponents become ints so powers stay exact."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, float) and x.is_integer() and abs(x) < 2**31:
        return int(x)
    if isinstance(x, complex) and x.imag == 0 and x.real.is_integer() and abs(x.real) < 2**31:
        return int(x.real)
    return None


def power(base, exponent):
    if not isinstance(base, Dual) and not isinstance(exponent, Dual):
        n = _as_int(exponent)
        if n is not None:
            if n < 0 and base == 0:
                raise ZeroDivisionError("zero raised to a negative power")
            return complex(base) ** n
        return complex(base) ** complex(exponent)
    if isinstance(base, Dual):
        return base ** exponent
    return exponent.__rpow__(base)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.value)
        return Dual(e, e * x.deriv, x.tag)
    return cmath.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(log(x.value), x.deriv / x.value, x.tag)
    return cmath.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        r = sqrt(x.value)
        return Dual(r, x.deriv / (2 * r), x.tag)
    return cmath.sqrt(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.value), cos(x.value) * x.deriv, x.tag)
    return cmath.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.value), -sin(x.value) * x.deriv, x.tag)
    return cmath.cos(x)


def tan(x):
    if isinstance(x, Dual):
        t = tan(x.value)
        return Dual(t, (1 + t * t) * x.deriv, x.tag)
    return cmath.tan(x)


def sinh(x):
    if isinstance(x, Dual):
        return Dual(sinh(x.value), cosh(x.value) * x.deriv, x.tag)
    return cmath.sinh(x)


def cosh(x):
    if isinstance(x, Dual):
        return Dual(cosh(x.value), sinh(x.value) * x.deriv, x.tag)
    return cmath.cosh(x)


def tanh(x):
    if isinstance(x, Dual):
        t = tanh(x.value)
        return Dual(t, (1 - t * t) * x.deriv, x.tag)
    return cmath.tanh(x)


def cabs(x):
    if isinstance(x, Dual):
        from degenspinor.errors import NonAnalyticNode

        raise NonAnalyticNode("abs() has no complex derivative")
    return complex(abs(x))


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
    "abs": cabs,
}


def value_of(x):
    """Strip every dual layer and return the underlying complex value."""
    while isinstance(x, Dual):
        x = x.value
    return complex(x)


def deriv_of(x, tag=None):
    """Derivative part of ``x`` for the given tag (0 if ``x`` does not depend on it)."""
    if isinstance(x, Dual) and (tag is None or x.tag == tag):
        return x.deriv
    if isinstance(x, Dual):
        # A higher-tagged dual wrapping our tag: not expected at top level.
        if x.tag > tag:
            return deriv_of(x.value, tag)
    return 0.0


def magnitude(x):
    """Largest modulus over all components of a (possibly nested) dual."""
    if isinstance(x, Dual):
        return max(magnitude(x.value), magnitude(x.deriv))
    return abs(x)


def seed(x, tag=0):
    """A dual seeded with unit derivative."""
    return Dual(x, 1.0, tag)
