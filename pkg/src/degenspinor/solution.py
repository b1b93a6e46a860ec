"""Builders for the degenerate spinor fields.

Every builder is a product of the same phase factor

    exp( i * int_0^{s1} f1I(s0, u) du + f2R(s0) (s2 + s3) + i f2I(s0) (s2 - s3) )

with an amplitude that does not see the potentials.  Fields are plain
closures over ``(t, x, y, z)`` and accept dual numbers, which is how the
verification code gets exact derivatives.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from degenspinor.errors import GeneratorError
from degenspinor.exprdsl import dual as dm
from degenspinor.exprdsl.evaluate import evaluate_generic
from degenspinor.exprdsl.parser import Expr
from degenspinor.exprdsl.quadrature import integrate
from degenspinor.frame import Event, to_s
from degenspinor.generators import envelope_g, envelope_kI

POSITIVE = "positive"
NEGATIVE = "negative"
HELICITIES = (POSITIVE, NEGATIVE)


def base_spinors(phi):
    """The two constant spinors spanning the degenerate family at angle ``phi``."""
    c, s = np.cos(phi), np.sin(phi)
    u = np.array([c, 1 - s, c, 1 - s], dtype=complex)
    v = np.array([-c, 1 + s, c, -1 - s], dtype=complex)
    return u, v


def weyl_base(phi, helicity):
    c, s = np.cos(phi), np.sin(phi)
    if helicity == POSITIVE:
        return np.array([c, 1 - s], dtype=complex)
    if helicity == NEGATIVE:
        return np.array([-c, 1 + s], dtype=complex)
    raise ValueError(f"helicity must be one of {HELICITIES}, got {helicity!r}")


@dataclass(frozen=True)
class SpinorField:
    """A spinor-valued function of an event.

    ``func(t, x, y, z)`` returns a list of components; arguments may be plain
    numbers or duals.  Calling the field with an :class:`Event` returns a
    complex numpy vector.
    """

    func: Callable
    size: int
    kind: str
    gen: object = None

    def __call__(self, event):
        return np.array([dm.value_of(c) for c in self.func(*event)], dtype=complex)

    def raw(self, t, x, y, z):
        return self.func(t, x, y, z)


def phase_exponent(gen, s, lower=None):
    """Exponent of the shared phase factor (purely imaginary for real events)."""
    s0, s1 = s.s0, s.s1
    if gen.f1I_uses_s1 or lower is not None:
        lo = 0.0 if lower is None else evaluate_generic(lower, {"s0": s0})
        phase_int = integrate(gen.f1I, "s1", lo, s1, fixed={"s0": s0})
    else:
        # integrand constant in s1: the antiderivative is exact
        phase_int = evaluate_generic(gen.f1I, {"s0": s0}) * s1
    env = {"s0": s0}
    f2r = evaluate_generic(gen.f2R, env)
    f2i = evaluate_generic(gen.f2I, env)
    return 1j * phase_int + f2r * (s.s2 + s.s3) + 1j * f2i * (s.s2 - s.s3)


def phase_factor(gen, s, lower=None):
    return dm.exp(phase_exponent(gen, s, lower))


def separable_w(gen, s, s2_scale=1.0):
    """g(s0) exp(-(m^2 cos^2 phi / k) s2 + k s3).

    ``s2_scale`` multiplies the s2 coefficient; anything but 1 breaks the
    solution and exists only for negative controls.
    """
    c = gen.frame.cos
    k = gen.k
    a = -(gen.mass**2 * c * c / k) * s2_scale
    return envelope_g(gen, s.s0) * dm.exp(a * s.s2 + k * s.s3)


def massive_coefficients(gen):
    """Constant 4-vector multiplying phase * W in the massive spinor."""
    if gen.mass <= 0:
        raise GeneratorError("the massive builder needs mass > 0")
    u, v = base_spinors(gen.phi)
    coef = 1j * gen.mass * (1 + np.sin(gen.phi)) / gen.k
    return coef * u + v


def massive_spinor(gen, lower=None):
    """Massive degenerate Dirac spinor.  The s3-antiderivative of W is W/k."""
    vec = [complex(c) for c in massive_coefficients(gen)]
    frame = gen.frame

    def psi(t, x, y, z):
        s = to_s(frame, (t, x, y, z))
        amp = phase_factor(gen, s, lower) * separable_w(gen, s)
        return [amp * c for c in vec]

    return SpinorField(psi, 4, "massive", gen)


def _amplitude(w, names):
    """Turn an Expr (or callable, or constant) into ``f(s) -> scalar``."""
    if isinstance(w, Expr):
        extra = w.free_variables() - set(names)
        if extra:
            raise GeneratorError(f"{w} may only depend on {names}, found {sorted(extra)}")
        return lambda s: evaluate_generic(w, {n: getattr(s, n) for n in names})
    if callable(w):
        return w
    value = complex(w)
    return lambda s: value


def plane_wave(coefficient, kI):
    """c * exp(-i kI s0), the bounded amplitude used by the massless presets."""
    coefficient = complex(coefficient)
    return lambda s: coefficient * dm.exp(-1j * kI * s.s0)


def massless_spinor(gen, wt, wr, lower=None):
    """Massless Dirac spinor phase * (WT(s0, s2) u + WR(s0, s3) v); mass is ignored."""
    u, v = base_spinors(gen.phi)
    u = [complex(c) for c in u]
    v = [complex(c) for c in v]
    wt = _amplitude(wt, ("s0", "s2"))
    wr = _amplitude(wr, ("s0", "s3"))
    frame = gen.frame

    def psi(t, x, y, z):
        s = to_s(frame, (t, x, y, z))
        ph = phase_factor(gen, s, lower)
        a, b = ph * wt(s), ph * wr(s)
        return [a * ui + b * vi for ui, vi in zip(u, v)]

    return SpinorField(psi, 4, "massless", gen)


def massless_preset(gen, c_t=1.0, c_r=1.0, kI=None):
    """Massless spinor with plane-wave amplitudes c_T, c_R times exp(-i kI s0)."""
    if kI is None:
        kI = envelope_kI(gen)
    return massless_spinor(gen, plane_wave(c_t, kI), plane_wave(c_r, kI))


def weyl_spinor(gen, helicity, w, lower=None):
    """Two-component spinor phase * W * chi with chi fixed by the helicity.

    W depends on (s0, s2) for positive helicity and on (s0, s3) for negative.
    """
    chi = [complex(c) for c in weyl_base(gen.phi, helicity)]
    names = ("s0", "s2") if helicity == POSITIVE else ("s0", "s3")
    amp = _amplitude(w, names)
    frame = gen.frame

    def psi(t, x, y, z):
        s = to_s(frame, (t, x, y, z))
        a = phase_factor(gen, s, lower) * amp(s)
        return [a * c for c in chi]

    return SpinorField(psi, 2, f"weyl-{helicity}", gen)


def weyl_preset(gen, helicity, coefficient=1.0, kI=None):
    if kI is None:
        kI = envelope_kI(gen)
    return weyl_spinor(gen, helicity, plane_wave(coefficient, kI))


def phase_at(gen, event, lower=None):
    """Phase factor at a real event."""
    return dm.value_of(phase_factor(gen, to_s(gen.frame, Event(*event)), lower))
