"""4-potentials, the degeneracy direction, and electromagnetic fields.

Conventions: a_mu = q U_mu, the electric potential is U = a0 / q and the
vector potential is A = -(a1, a2, a3) / q, so

    E = -grad U - dA/dt,    B = curl A.
"""

import math
from typing import NamedTuple

import numpy as np

from degenspinor.algebra import bilinear, gamma, pauli
from degenspinor.diff import CENTRAL, DiffConfig, differentiate
from degenspinor.errors import DegeneracyConditionViolated, NonRealPotential, ZeroSpinor
from degenspinor.exprdsl import dual as dm
from degenspinor.exprdsl.evaluate import evaluate_generic
from degenspinor.frame import to_s
from degenspinor.solution import NEGATIVE, POSITIVE

REALITY_TOL = 1e-12


class PotentialSample(NamedTuple):
    a0: float
    a1: float
    a2: float
    a3: float


class EMSample(NamedTuple):
    E: tuple
    B: tuple


def _event_env(t, x, y, z):
    return {"t": t, "x": x, "y": y, "z": z}


def potential_components(gen, t, x, y, z):
    """a0..a3 as generic scalars (plain or dual) for the family ``gen``."""
    fr = gen.frame
    s = to_s(fr, (t, x, y, z))
    env = {"s0": s.s0, "s1": s.s1}
    f1 = evaluate_generic(gen.f1I, env)
    f2r = evaluate_generic(gen.f2R, env)
    f2i = evaluate_generic(gen.f2I, env)
    h = evaluate_generic(gen.h, _event_env(t, x, y, z))
    return [
        h,
        -h * fr.cos + f1 * fr.sec + f2i * fr.tan,
        f2r * fr.sec,
        -h * fr.sin - f2i,
    ]


def _real_sample(comps):
    vals = [dm.value_of(c) for c in comps]
    worst = max(abs(v.imag) for v in vals)
    if worst > REALITY_TOL * max(1.0, max(abs(v) for v in vals)):
        raise NonRealPotential(f"potential has imaginary part {worst:.3g}")
    return PotentialSample(*(v.real for v in vals))


def potentials(gen, event):
    return _real_sample(potential_components(gen, *event))


def linear_closed_form_components(k1, k2, k3, h, frame, t, x, y, z):
    """Closed-form potentials of the linear family (generic scalars)."""
    c, s, sec, tan = frame.cos, frame.sin, frame.sec, frame.tan
    hv = evaluate_generic(h, _event_env(t, x, y, z))
    return [
        hv,
        -hv * c - (k1 + k2 * s) * (x - t * sec + z * tan),
        -k3 * (x + z * tan - t * sec),
        -hv * s + k2 * (x * c + z * s - t),
    ]


def linear_closed_form(k1, k2, k3, h, frame, event):
    return _real_sample(linear_closed_form_components(k1, k2, k3, h, frame, *event))


def shifted_potentials(p, kappa, s_value):
    """b_mu = a_mu + s kappa_mu.  Complex kappa components must be real to tolerance."""
    out = []
    for a, k in zip(p, kappa):
        k = complex(k)
        if abs(k.imag) > REALITY_TOL:
            raise NonRealPotential(f"kappa component {k} is not real")
        out.append(a + s_value * k.real)
    return PotentialSample(*out)


def kappa_dirac(psi):
    """Degeneracy direction from transpose bilinears of a 4-spinor."""
    psi = np.asarray(psi, dtype=complex)
    g0, g1, g2, g3 = (gamma(mu) for mu in range(4))
    den = bilinear(psi, g2, psi, "transpose")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(den) <= 1e-12 * norm2 or norm2 == 0:
        raise DegeneracyConditionViolated("psi^T gamma^2 psi vanishes; no degeneracy direction")
    return (
        1.0 + 0j,
        -bilinear(psi, g0 @ g1 @ g2, psi, "transpose") / den,
        -bilinear(psi, g0, psi, "transpose") / den,
        bilinear(psi, g0 @ g2 @ g3, psi, "transpose") / den,
    )


def kappa_weyl(psi, helicity):
    """Degeneracy direction of a 2-spinor; the spatial sign flips with helicity."""
    psi = np.asarray(psi, dtype=complex)
    norm2 = float(np.vdot(psi, psi).real)
    if norm2 == 0:
        raise ZeroSpinor("kappa is undefined for the zero spinor")
    if helicity == POSITIVE:
        sign = -1.0
    elif helicity == NEGATIVE:
        sign = 1.0
    else:
        raise ValueError(f"unknown helicity {helicity!r}")
    return (1.0 + 0j, *(sign * bilinear(psi, pauli(i), psi) / norm2 for i in (1, 2, 3)))


def fields_from_gradients(grad, charge):
    """E and B from d a_mu / d x^nu.  ``grad[nu][mu]``, nu ordered (t, x, y, z)."""
    g = np.asarray(grad, dtype=complex).real
    q = charge
    dt, dx, dy, dz = g
    # A = -(a1, a2, a3)/q
    e_field = (
        (-dx[0] + dt[1]) / q,
        (-dy[0] + dt[2]) / q,
        (-dz[0] + dt[3]) / q,
    )
    b_field = (
        -(dy[3] - dz[2]) / q,
        -(dz[1] - dx[3]) / q,
        -(dx[2] - dy[1]) / q,
    )
    return EMSample(tuple(float(v) for v in e_field), tuple(float(v) for v in b_field))


AUTO_CENTRAL = DiffConfig(CENTRAL, 1e-5)


def auto_diff(gen):
    """Dual mode unless some generator uses ``abs``, which duals cannot carry."""
    exprs = (gen.f1I, gen.f2R, gen.f2I, gen.h)
    return AUTO_CENTRAL if any(e.has_abs() for e in exprs) else DiffConfig()


def em_fields(gen, event, diff=None):
    """E and B from numerical (dual or central) derivatives of the potentials."""
    if diff is None:
        diff = auto_diff(gen)
    field = lambda t, x, y, z: potential_components(gen, t, x, y, z)  # noqa: E731
    grad = [differentiate(field, event, mu, diff) for mu in range(4)]
    return fields_from_gradients(grad, gen.charge)


def _h_gradient(h, event):
    grad = []
    for mu in range(4):
        args = [float(v) for v in event]
        args[mu] = dm.Dual(args[mu], 1.0)
        out = evaluate_generic(h, _event_env(*args))
        grad.append(complex(dm.deriv_of(out, 0)).real)
    return grad


def em_fields_linear(k1, k2, k3, h, q, frame, event):
    """Closed-form E and B for the linear family with arbitrary h.

    Only h is divided by the charge; the k-terms enter as written, so this
    agrees with :func:`em_fields` for unit charge.
    """
    c, s, sec, tan = frame.cos, frame.sin, frame.sec, frame.tan
    ht, hx, hy, hz = (v / q for v in _h_gradient(h, event))
    e_field = (
        k1 * sec + k2 * tan - c * ht - hx,
        k3 * sec - hy,
        -(k2 + s * ht + hz),
    )
    b_field = (
        -k3 * tan + s * hy,
        k2 * sec + k1 * tan + c * hz - s * hx,
        k3 - c * hy,
    )
    return EMSample(tuple(e_field), tuple(b_field))


def field_direction_defect(sample, phi):
    """|E x (cos phi, 0, sin phi)| and |B| for the pure-h, time-only case."""
    direction = np.array([math.cos(phi), 0.0, math.sin(phi)])
    return float(np.linalg.norm(np.cross(sample.E, direction))), float(np.linalg.norm(sample.B))
