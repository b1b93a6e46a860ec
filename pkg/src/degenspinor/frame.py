"""The phi-parameterized coordinate change and the operator-transformation check.

Spacetime events are mapped to the complex "s-coordinates" through

    (s1, s2, s3, s0)^T = Pi^{-1} (x, y, z, t)^T

where Pi has columns chosen so that the first-order operators of the reduced
Dirac system become plain partial derivatives in s1, s2, s3.  s0 and s1 are
real for real events; s2 and s3 are complex conjugate up to sign.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from degenspinor.errors import NearSingularAngle, NonRealEvent, SingularMatrix
from degenspinor.exprdsl.evaluate import evaluate

MIN_COS = 1e-6
IMAG_TOL = 1e-10


class Event(NamedTuple):
    t: object
    x: object
    y: object
    z: object


class SCoords(NamedTuple):
    s0: object
    s1: object
    s2: object
    s3: object


def pi_matrix(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array(
        [
            [c, 0, 0, 0],
            [0, -1j * c, -1j * c, 0],
            [s, -1, 1, 0],
            [1, -s, s, 1],
        ],
        dtype=complex,
    )


def pi_inverse_matrix(phi):
    c, s = math.cos(phi), math.sin(phi)
    sec, tan = 1.0 / c, s / c
    return np.array(
        [
            [sec, 0, 0, 0],
            [0.5 * tan, 0.5j * sec, -0.5, 0],
            [-0.5 * tan, 0.5j * sec, 0.5, 0],
            [-c, 0, -s, 1],
        ],
        dtype=complex,
    )


def _sparse_rows(m, real_rows=()):
    """Row-wise (column, coefficient) lists with zeros dropped."""
    rows = []
    for i, row in enumerate(m):
        entries = []
        for j, v in enumerate(row):
            if v != 0:
                entries.append((j, float(v.real) if i in real_rows else complex(v)))
        rows.append(tuple(entries))
    return tuple(rows)


@dataclass(frozen=True, eq=False)
class Frame:
    phi: float
    pi: np.ndarray
    pi_inv: np.ndarray
    _to_s_rows: tuple = field(init=False, repr=False)
    _from_s_rows: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_to_s_rows", _sparse_rows(self.pi_inv, real_rows=(0, 3)))
        object.__setattr__(self, "_from_s_rows", _sparse_rows(self.pi))

    @property
    def cos(self):
        return math.cos(self.phi)

    @property
    def sin(self):
        return math.sin(self.phi)

    @property
    def sec(self):
        return 1.0 / math.cos(self.phi)

    @property
    def tan(self):
        return math.tan(self.phi)

    def kappa(self):
        """The potential-shift direction (1, -cos phi, 0, -sin phi)."""
        return (1.0, -self.cos, 0.0, -self.sin)


def make_frame(phi):
    phi = float(phi)
    if abs(math.cos(phi)) < MIN_COS:
        raise NearSingularAngle(f"|cos(phi)| < {MIN_COS:g} at phi={phi!r}; sec(phi) diverges")
    pi = pi_matrix(phi)
    pi_inv = pi_inverse_matrix(phi)
    # closed-form inverse must agree with the numerical one
    defect = np.abs(pi @ pi_inv - np.eye(4)).max()
    scale = max(1.0, np.abs(pi_inv).max())
    if defect > 1e-12 * scale:
        raise AssertionError(f"closed-form Pi inverse is inconsistent (defect {defect:.3g})")
    numeric = np.linalg.inv(pi)
    if np.abs(numeric - pi_inv).max() > 1e-9 * scale * np.linalg.cond(pi):
        raise AssertionError("closed-form Pi inverse disagrees with numerical inverse")
    for m in (pi, pi_inv):
        m.flags.writeable = False
    return Frame(phi, pi, pi_inv)


def _apply(rows, vec):
    out = []
    for entries in rows:
        acc = 0.0
        for j, c in entries:
            acc = acc + c * vec[j]
        out.append(acc)
    return out


def to_s(frame, event):
    """s-coordinates of an event.  Works on plain numbers and dual numbers."""
    t, x, y, z = event
    s1, s2, s3, s0 = _apply(frame._to_s_rows, (x, y, z, t))
    return SCoords(s0, s1, s2, s3)


def from_s(frame, s):
    """Inverse of :func:`to_s`; the result must be a real event."""
    s0, s1, s2, s3 = (complex(v) for v in s)
    x, y, z, t = _apply(frame._from_s_rows, (s1, s2, s3, s0))
    vals = [complex(v) for v in (t, x, y, z)]
    worst = max(abs(v.imag) for v in vals)
    if worst > IMAG_TOL:
        raise NonRealEvent(f"s-coordinates map to a complex event (|Im| = {worst:.3g})")
    return Event(*(v.real for v in vals))


def operator_transform_residual(a, u, point, step, variables=("x1", "x2", "x3", "x4")):
    """Check that D = A^T grad_x equals grad_s after the substitution x = A s.

    Returns max_i |D_i U - d U~/d s_i| with both sides from central
    differences, so the result is O(step^2) for smooth ``u``.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n) or len(point) != n or len(variables) != n:
        raise ValueError("matrix, point and variable list must agree in dimension")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond >= 1e8:
        raise SingularMatrix(f"condition number {cond:.3g} too large")
    x0 = np.asarray(point, dtype=complex)

    def at(x):
        return evaluate(u, dict(zip(variables, x)))

    eye = np.eye(n)
    grad_x = np.array([(at(x0 + step * eye[j]) - at(x0 - step * eye[j])) / (2 * step) for j in range(n)])
    d_op = a.T @ grad_x

    # U~(s) = U(A s): stepping s_i by h moves x by h * A[:, i]
    grad_s = np.array(
        [(at(x0 + step * a[:, i]) - at(x0 - step * a[:, i])) / (2 * step) for i in range(n)]
    )
    return float(np.abs(d_op - grad_s).max())
