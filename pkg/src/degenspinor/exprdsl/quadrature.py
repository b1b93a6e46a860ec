"""Composite 16-point Gauss-Legendre quadrature with panel halving.

The integration interval is mapped onto [0, 1] with fixed nodes, so limits
may be dual numbers and the result stays differentiable in them.
"""

import numpy as np

from degenspinor.errors import NoConvergence
from degenspinor.exprdsl import dual as dm
from degenspinor.exprdsl.evaluate import evaluate_generic

ORDER = 16
MAX_HALVINGS = 30

_x, _w = np.polynomial.legendre.leggauss(ORDER)
# Nodes/weights on [0, 1].
_NODES = tuple(float(v) for v in 0.5 * (_x + 1.0))
_WEIGHTS = tuple(float(v) for v in 0.5 * _w)


def _panel_sum(integrand, lo, width, panels):
    h = 1.0 / panels
    total = 0.0
    for p in range(panels):
        start = p * h
        for node, weight in zip(_NODES, _WEIGHTS):
            tau = start + h * node
            total = total + (weight * h) * integrand(lo + width * tau)
    return total * width


def gauss_legendre(integrand, lo, hi, tol=1e-12, max_halvings=MAX_HALVINGS):
    """Integrate a scalar callable from ``lo`` to ``hi``.

    Stops once two successive panel refinements agree to ``tol`` (absolute,
    measured over every dual component).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    width = hi - lo
    prev = _panel_sum(integrand, lo, width, 1)
    panels = 1
    for _ in range(max_halvings):
        panels *= 2
        cur = _panel_sum(integrand, lo, width, panels)
        if dm.magnitude(cur - prev) < tol:
            return cur
        prev = cur
    raise NoConvergence(f"quadrature did not settle to {tol:g} after {max_halvings} halvings")


def integrate(f, var, lo, hi, fixed=None, tol=1e-12):
    """Integrate expression ``f`` in variable ``var`` over [lo, hi].

    ``fixed`` binds the remaining free variables.  Limits and fixed values may
    be duals; the result then carries the derivative.
    """
    env = dict(fixed or {})

    def integrand(u):
        env[var] = u
        return evaluate_generic(f, env)

    out = gauss_legendre(integrand, lo, hi, tol)
    return out if isinstance(out, dm.Dual) else complex(out)
