"""Generating functions and constants that define one degenerate solution family.

A family is fixed by three real functions of the s-coordinates,

    f1I(s0, s1),  f2R(s0),  f2I(s0),

a real function ``h(t, x, y, z)`` that only moves the 4-potential along the
degeneracy direction, an envelope ``g(s0)``, the separation constant ``k``,
mass, charge and the frame angle phi.  The complex coefficient functions of
the reduced system are recovered as

    A1 = i f1I,   A2 = f2R + i f2I,   A3 = f2R - i f2I.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

import numpy as np

from degenspinor.errors import GeneratorError, NearSingularAngle
from degenspinor.exprdsl import dual as dm
from degenspinor.exprdsl.evaluate import evaluate, evaluate_generic
from degenspinor.exprdsl.parser import Expr, parse
from degenspinor.frame import MIN_COS, make_frame

S_VARS_F1 = ("s0", "s1")
S_VARS_F2 = ("s0",)
EVENT_VARS = ("t", "x", "y", "z")

REALITY_TOL = 1e-12
REALITY_SAMPLES = 100

# Assignment of (k2, k3) in the linear example family.
DERIVED = "derived"  # f2R = k3*s0, f2I = k2*s0  (consistent with the closed-form potentials)
PRINTED = "printed"  # f2R = k2*s0, f2I = k3*s0  (alternative reading; disagrees with the closed-form potentials)
CONVENTIONS = (DERIVED, PRINTED)


@dataclass(frozen=True)
class GaussianEnvelope:
    """g(s0) = c1 exp(-kR s0^2) exp(-i kI s0)."""

    c1: complex = 1.0
    kR: float = 1.0
    kI: float = 2.0

    def __post_init__(self):
        if not self.kR > 0:
            raise GeneratorError(f"kR must be positive, got {self.kR!r}")


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    f1I: Expr
    f2R: Expr
    f2I: Expr
    h: Expr
    envelope: Union[GaussianEnvelope, Expr] = field(default_factory=GaussianEnvelope)
    k: complex = 0.5
    mass: float = 1.0
    charge: float = 1.0
    phi: float = math.pi / 6
    constants: dict = field(default_factory=dict)
    convention: Optional[str] = None  # set by linear_family
    linear_k: Optional[tuple] = None  # (k1, k2, k3) for linear families

    @cached_property
    def frame(self):
        return make_frame(self.phi)

    @cached_property
    def f1I_uses_s1(self):
        return "s1" in self.f1I.free_variables()


def _coerce(text_or_expr, allowed, constants):
    if isinstance(text_or_expr, Expr):
        extra = text_or_expr.free_variables() - set(allowed)
        if extra:
            raise GeneratorError(f"expression {text_or_expr} uses {sorted(extra)}; allowed {list(allowed)}")
        return text_or_expr
    if isinstance(text_or_expr, (int, float)):
        text_or_expr = repr(float(text_or_expr))
    return parse(text_or_expr, allowed, constants)


def _check_real(expr, allowed, rng, label):
    for _ in range(REALITY_SAMPLES):
        args = dict(zip(allowed, rng.uniform(-2.0, 2.0, size=len(allowed))))
        try:
            v = evaluate(expr, args)
        except (ValueError, ZeroDivisionError, OverflowError):
            continue  # singular sample points carry no reality information
        if abs(v.imag) > REALITY_TOL * max(1.0, abs(v.real)):
            raise GeneratorError(f"{label} = {expr} is not real-valued at {args} (value {v})")


def make_generators(
    f1I="0",
    f2R="0",
    f2I="0",
    h="0",
    envelope=None,
    k=0.5,
    mass=1.0,
    charge=1.0,
    phi=math.pi / 6,
    constants=None,
    seed=0,
    convention=None,
    linear_k=None,
):
    """Parse, validate and bundle a generator family.

    String arguments are parsed with their slot's allowed variables; the mass
    is available inside every expression as the constant ``m``.
    """
    consts = {"m": float(mass)}
    consts.update(constants or {})
    k = complex(k)
    if k == 0:
        raise GeneratorError("separation constant k must be non-zero")
    if charge == 0:
        raise GeneratorError("charge must be non-zero")
    if mass < 0:
        raise GeneratorError("mass must be non-negative")
    if abs(math.cos(phi)) < MIN_COS:
        raise NearSingularAngle(f"|cos(phi)| < {MIN_COS:g}")

    exprs = {
        "f1I": _coerce(f1I, S_VARS_F1, consts),
        "f2R": _coerce(f2R, S_VARS_F2, consts),
        "f2I": _coerce(f2I, S_VARS_F2, consts),
        "h": _coerce(h, EVENT_VARS, consts),
    }
    rng = np.random.default_rng(seed)
    allowed = {"f1I": S_VARS_F1, "f2R": S_VARS_F2, "f2I": S_VARS_F2, "h": EVENT_VARS}
    for name, e in exprs.items():
        _check_real(e, allowed[name], rng, name)

    if envelope is None:
        envelope = GaussianEnvelope()
    elif not isinstance(envelope, GaussianEnvelope):
        envelope = _coerce(envelope, S_VARS_F2, consts)

    return GeneratorSet(
        envelope=envelope,
        k=k,
        mass=float(mass),
        charge=float(charge),
        phi=float(phi),
        constants=consts,
        convention=convention,
        linear_k=linear_k,
        **exprs,
    )


def linear_family(k1, k2, k3, h="0", convention=DERIVED, **rest):
    """Generators with every f linear in s0.

    ``convention='derived'`` puts k3 on f2R and k2 on f2I, the assignment under
    which the potentials agree with the linear family's closed forms;
    ``'printed'`` uses the opposite assignment.
    """
    if convention not in CONVENTIONS:
        raise GeneratorError(f"convention must be one of {CONVENTIONS}")
    k_r, k_i = (k3, k2) if convention == DERIVED else (k2, k3)
    return make_generators(
        f1I=f"{float(k1)!r}*s0",
        f2R=f"{float(k_r)!r}*s0",
        f2I=f"{float(k_i)!r}*s0",
        h=h,
        convention=convention,
        linear_k=(float(k1), float(k2), float(k3)),
        **rest,
    )


def _f_values(gen, s0, s1):
    env = {"s0": s0, "s1": s1}
    return (
        evaluate_generic(gen.f1I, env),
        evaluate_generic(gen.f2R, env),
        evaluate_generic(gen.f2I, env),
    )


def a_tilde(gen, which, s):
    """A1, A2 or A3 at s-coordinates ``s`` (generic over dual numbers)."""
    f1, f2r, f2i = _f_values(gen, s.s0, s.s1)
    if which == 1:
        return 1j * f1
    if which == 2:
        return f2r + 1j * f2i
    if which == 3:
        return f2r - 1j * f2i
    raise ValueError(f"which must be 1, 2 or 3, got {which!r}")


def envelope_g(gen, s0):
    env = gen.envelope
    if isinstance(env, GaussianEnvelope):
        return env.c1 * dm.exp(-env.kR * s0 * s0) * dm.exp(-1j * env.kI * s0)
    return evaluate_generic(env, {"s0": s0})


def envelope_kI(gen, default=0.0):
    env = gen.envelope
    return env.kI if isinstance(env, GaussianEnvelope) else default
