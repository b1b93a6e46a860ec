"""Degenerate solutions of the Dirac and Weyl equations in electromagnetic fields.

A single spinor built here solves its equation for a whole line of
4-potentials a + s kappa.  The package builds such families from four
generating functions, computes the potentials and fields they imply, and
verifies everything numerically.
"""

from degenspinor.algebra import gamma, gamma_tilde, kernel_matrix, pauli
from degenspinor.diff import DiffConfig
from degenspinor.empot import em_fields, em_fields_linear, kappa_dirac, kappa_weyl, potentials, shifted_potentials
from degenspinor.frame import Event, from_s, make_frame, to_s
from degenspinor.generators import GaussianEnvelope, linear_family, make_generators
from degenspinor.solution import (
    NEGATIVE,
    POSITIVE,
    massive_spinor,
    massless_preset,
    massless_spinor,
    weyl_preset,
    weyl_spinor,
)
from degenspinor.verify import dirac_residual, spin_expectation, weyl_residual

__version__ = "0.1.0"

__all__ = [
    "DiffConfig",
    "Event",
    "GaussianEnvelope",
    "NEGATIVE",
    "POSITIVE",
    "dirac_residual",
    "em_fields",
    "em_fields_linear",
    "from_s",
    "gamma",
    "gamma_tilde",
    "kappa_dirac",
    "kappa_weyl",
    "kernel_matrix",
    "linear_family",
    "make_frame",
    "make_generators",
    "massive_spinor",
    "massless_preset",
    "massless_spinor",
    "pauli",
    "potentials",
    "shifted_potentials",
    "spin_expectation",
    "to_s",
    "weyl_preset",
    "weyl_residual",
    "weyl_spinor",
]
