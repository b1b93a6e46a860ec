"""Residual operators and the other instruments that check a built solution."""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from degenspinor.algebra import bilinear, gamma, gamma_tilde, pauli
from degenspinor.diff import CENTRAL, DiffConfig, jet
from degenspinor.errors import BelowNoiseFloor, ComplexKUnsupported, NonRealSpin
from degenspinor.exprdsl import dual as dm
from degenspinor.solution import NEGATIVE, POSITIVE, separable_w

SCALE_FLOOR = 1e-300
SPIN_IMAG_TOL = 1e-12
NOISE_FLOOR = 1e-14

_GAMMAS = tuple(gamma(mu) for mu in range(4))
_SIGMAS = tuple(pauli(mu) for mu in range(4))


@dataclass(frozen=True)
class ResidualReport:
    residual: np.ndarray
    abs_norm: float
    rel_norm: float
    mode: str
    step: float
    scale: float


def _report(terms, cfg):
    """``terms`` is (derivative pieces, potential pieces, mass term).  Each
    term's norm is the sum of its per-index pieces, i.e. its size before the
    cancellation the equation asserts; otherwise an identically cancelling
    derivative term would put round-off in both numerator and denominator."""
    deriv, pot, mass = terms
    residual = sum(deriv) + sum(pot) - mass
    norms = [
        sum(float(np.linalg.norm(v)) for v in deriv),
        sum(float(np.linalg.norm(v)) for v in pot),
        float(np.linalg.norm(mass)),
    ]
    scale = max(*norms, SCALE_FLOOR)
    abs_norm = float(np.linalg.norm(residual))
    step = cfg.step if cfg.mode == CENTRAL else 0.0
    return ResidualReport(residual, abs_norm, abs_norm / scale, cfg.mode, step, scale)


def dirac_terms(value, grads, a, m, matrices=_GAMMAS, signs=(1, 1, 1, 1)):
    """Per-index pieces of i M^mu d_mu psi and a_mu M^mu psi (signed per
    index), and the mass term m psi."""
    deriv = [1j * sg * (mat @ g) for sg, mat, g in zip(signs, matrices, grads)]
    pot = [sg * am * (mat @ value) for sg, am, mat in zip(signs, a, matrices)]
    return deriv, pot, m * value


def residual_from_jet(value, grads, a, m, cfg=DiffConfig(), kind="dirac", helicity=POSITIVE):
    if kind == "dirac":
        terms = dirac_terms(value, grads, a, m)
    else:
        signs = (1, 1, 1, 1) if helicity == POSITIVE else (-1, 1, 1, 1)
        terms = dirac_terms(value, grads, a, 0.0, _SIGMAS, signs)
    return _report(terms, cfg)


def dirac_residual(psi, pot, m, event, cfg=DiffConfig()):
    """Left side of i gamma^mu d_mu psi + a_mu gamma^mu psi - m psi at ``event``.

    ``psi`` is a :class:`~degenspinor.solution.SpinorField`; ``pot`` maps an
    event to four potential components.
    """
    value, grads = jet(psi.raw, event, cfg)
    return residual_from_jet(value, grads, tuple(pot(event)), m, cfg)


def weyl_residual(psi, pot, helicity, event, cfg=DiffConfig()):
    """Weyl residual.  Negative helicity flips the sign of the time-derivative
    and a0 terms relative to the positive-helicity operator."""
    if helicity not in (POSITIVE, NEGATIVE):
        raise ValueError(f"unknown helicity {helicity!r}")
    value, grads = jet(psi.raw, event, cfg)
    return residual_from_jet(value, grads, tuple(pot(event)), 0.0, cfg, "weyl", helicity)


def shift_defect(value, grads, a, kappa, s_value, m, kind="dirac", helicity=POSITIVE):
    """Change of the residual vector when a -> a + s kappa, relative to the
    larger of the two residual scales and the raw size |s| |kappa| |psi| of
    the added term.  Round-off level means the shift is invisible."""
    base = residual_from_jet(value, grads, a, m, kind=kind, helicity=helicity)
    shifted = tuple(ai + s_value * complex(ki).real for ai, ki in zip(a, kappa))
    rep = residual_from_jet(value, grads, shifted, m, kind=kind, helicity=helicity)
    raw = abs(s_value) * float(np.linalg.norm(np.asarray(kappa, dtype=complex))) * float(np.linalg.norm(value))
    scale = max(base.scale, rep.scale, raw, SCALE_FLOOR)
    return float(np.linalg.norm(rep.residual - base.residual)) / scale


def degeneracy_conditions(psi):
    """(psi^+ gamma~ psi, psi^T gamma^2 psi)."""
    psi = np.asarray(psi, dtype=complex)
    return bilinear(psi, gamma_tilde(), psi, "dagger"), bilinear(psi, _GAMMAS[2], psi, "transpose")


class SpinTriple(NamedTuple):
    Sx: float
    Sy: float
    Sz: float


_SPIN_OPS = (
    0.5j * _GAMMAS[2] @ _GAMMAS[3],
    0.5j * _GAMMAS[3] @ _GAMMAS[1],
    0.5j * _GAMMAS[1] @ _GAMMAS[2],
)


_SPIN_OPS_2 = tuple(0.5 * _SIGMAS[i] for i in (1, 2, 3))


def spin_expectation(psi, tol=SPIN_IMAG_TOL):
    """Unnormalized spin projections (i/2) psi^+ gamma^j gamma^k psi.

    Two-component spinors use sigma/2, the same operator restricted to one
    chirality block.
    """
    psi = np.asarray(psi, dtype=complex)
    ops = _SPIN_OPS_2 if psi.shape == (2,) else _SPIN_OPS
    vals = [bilinear(psi, op, psi) for op in ops]
    scale = max(1.0, float(np.vdot(psi, psi).real))
    for v in vals:
        if abs(v.imag) > tol * scale:
            raise NonRealSpin(f"spin bilinear has imaginary part {v.imag:.3g}")
    return SpinTriple(*(v.real for v in vals))


def massive_spin_closed_form(mass, k, phi):
    """Callable norm2 -> SpinTriple for the massive family (real k only)."""
    k = complex(k)
    if k.imag != 0:
        raise ComplexKUnsupported("the massive spin closed forms assume real k")
    k = k.real
    m2c = mass**2 * (1 + math.cos(2 * phi))
    bracket = (m2c - 2 * k * k) / (m2c + 2 * k * k)

    def spin(norm2):
        return SpinTriple(
            0.5 * math.cos(phi) * bracket * norm2,
            0.0,
            0.5 * math.sin(phi) * bracket * norm2,
        )

    return spin


def massless_spin_closed_form(c_t, c_r, phi):
    """Constant spin projections of the plane-wave massless spinor."""
    t2, r2 = abs(complex(c_t)) ** 2, abs(complex(c_r)) ** 2
    common = r2 - t2 + (t2 + r2) * math.sin(phi)
    return SpinTriple(-2 * math.cos(phi) * common, 0.0, -2 * math.sin(phi) * common)


def spin_closed_form(gen, c_t=None, c_r=None):
    """Closed-form spin for a family: massive (callable of |psi|^2) or, when
    ``c_t``/``c_r`` are given, the massless constants."""
    if c_t is not None or c_r is not None:
        return massless_spin_closed_form(c_t or 0.0, c_r or 0.0, gen.phi)
    return massive_spin_closed_form(gen.mass, gen.k, gen.phi)


def pde35_residual(gen, s, s2_scale=1.0):
    """d_s2 d_s3 W + m^2 cos^2(phi) W via nested duals (s2 inner, s3 outer)."""
    s2 = dm.Dual(complex(s.s2), 1.0, tag=1)
    s3 = dm.Dual(complex(s.s3), 1.0, tag=2)
    w = separable_w(gen, s._replace(s2=s2, s3=s3), s2_scale)
    d3 = w.deriv if isinstance(w, dm.Dual) and w.tag == 2 else 0.0
    d23 = d3.deriv if isinstance(d3, dm.Dual) and d3.tag == 1 else 0.0
    c = gen.frame.cos
    return complex(d23) + gen.mass**2 * c * c * dm.value_of(w)


def pde35_relative(gen, s, s2_scale=1.0):
    """|pde35_residual| divided by the size of its two terms."""
    r = pde35_residual(gen, s, s2_scale)
    c = gen.frame.cos
    w = dm.value_of(separable_w(gen, s))
    scale = max(gen.mass**2 * c * c * abs(w), SCALE_FLOOR)
    return abs(r) / scale


AXES = {
    "+t": (1, 0, 0, 0),
    "-t": (-1, 0, 0, 0),
    "+x": (0, 1, 0, 0),
    "-x": (0, -1, 0, 0),
    "+y": (0, 0, 1, 0),
    "-y": (0, 0, -1, 0),
    "+z": (0, 0, 0, 1),
    "-z": (0, 0, 0, -1),
}


@dataclass(frozen=True)
class DecayReport:
    axis: str
    radii: tuple
    magnitudes: tuple
    origin: float
    strictly_decreasing: bool
    ratio: float


def decay_probe(psi, axis, radii):
    """|psi| along a coordinate axis at the given increasing radii."""
    radii = tuple(float(r) for r in radii)
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    direction = np.array(AXES[axis], dtype=float)
    origin = float(np.linalg.norm(psi((0.0, 0.0, 0.0, 0.0))))
    mags = tuple(float(np.linalg.norm(psi(tuple(r * direction)))) for r in radii)
    decreasing = all(b < a for a, b in zip(mags, mags[1:]))
    ratio = mags[-1] / origin if origin > 0 else math.inf
    return DecayReport(axis, radii, mags, origin, decreasing, ratio)


def convergence_order(r_h, r_h2):
    """log2(r_h / r_h2) for residuals at step h and h/2."""
    if r_h <= NOISE_FLOOR or r_h2 <= NOISE_FLOOR:
        raise BelowNoiseFloor(f"residuals {r_h:.3g}, {r_h2:.3g} are at the round-off floor")
    return math.log2(r_h / r_h2)
