"""Dirac and Pauli matrices in the Dirac-Pauli representation, plus bilinears.

All matrices are small numpy ``complex128`` arrays whose entries are exactly
0, +-1 or +-i.  Functions return fresh, read-only arrays so callers cannot
corrupt the module constants.
"""

import numpy as np

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)

_PAULI = (
    _I2,
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_GAMMA = (
    np.block([[_I2, _Z2], [_Z2, -_I2]]),
    *(np.block([[_Z2, s], [-s, _Z2]]) for s in _PAULI[1:]),
)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

for _m in (*_PAULI, *_GAMMA):
    _m.flags.writeable = False


def _frozen(m):
    m = np.array(m, dtype=complex)
    m.flags.writeable = False
    return m


def _check_index(mu):
    if mu not in (0, 1, 2, 3):
        raise IndexError(f"Lorentz index must be 0..3, got {mu!r}")


def gamma(mu):
    _check_index(mu)
    return _GAMMA[mu]


def pauli(mu):
    """sigma^mu with sigma^0 the 2x2 identity."""
    _check_index(mu)
    return _PAULI[mu]


def gamma_tilde():
    """gamma^0 + i gamma^1 gamma^2 gamma^3, the matrix of the degeneracy condition."""
    return _frozen(_GAMMA[0] + 1j * _GAMMA[1] @ _GAMMA[2] @ _GAMMA[3])


def slash4(coeffs):
    """Plain component sum  sum_mu c_mu gamma^mu  (no index raising)."""
    if len(coeffs) != 4:
        raise ValueError("slash4 needs exactly four coefficients")
    out = np.zeros((4, 4), dtype=complex)
    for c, g in zip(coeffs, _GAMMA):
        if c != 0:
            out = out + c * g
    return _frozen(out)


def slash2(coeffs):
    if len(coeffs) != 4:
        raise ValueError("slash2 needs exactly four coefficients")
    out = np.zeros((2, 2), dtype=complex)
    for c, s in zip(coeffs, _PAULI):
        if c != 0:
            out = out + c * s
    return _frozen(out)


def bilinear(left, m, right, mode="dagger"):
    """Return ``left^+ M right`` (mode='dagger') or ``left^T M right`` (mode='transpose')."""
    left = np.asarray(left, dtype=complex)
    right = np.asarray(right, dtype=complex)
    if mode == "dagger":
        left = left.conj()
    elif mode != "transpose":
        raise ValueError(f"mode must be 'dagger' or 'transpose', got {mode!r}")
    return complex(left @ np.asarray(m) @ right)


def kernel_matrix(phi):
    """gamma^0 - cos(phi) gamma^1 - sin(phi) gamma^3.

    Annihilates every spinor of the two-parameter degenerate family at angle
    ``phi``; contracting a 4-potential shift along this direction leaves the
    Dirac operator's action on such spinors unchanged.
    """
    c, s = np.cos(phi), np.sin(phi)
    return _frozen(_GAMMA[0] - c * _GAMMA[1] - s * _GAMMA[3])


def clifford_defect():
    """Largest entry of {gamma^mu, gamma^nu} - 2 eta^{mu nu} I over all index pairs."""
    worst = 0.0
    eye = np.eye(4)
    for mu in range(4):
        for nu in range(4):
            anti = _GAMMA[mu] @ _GAMMA[nu] + _GAMMA[nu] @ _GAMMA[mu]
            worst = max(worst, float(np.abs(anti - 2 * METRIC[mu, nu] * eye).max()))
    return worst
