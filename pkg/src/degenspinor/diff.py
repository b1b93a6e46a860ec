"""Partial derivatives of vector-valued event functions, exact or by central differences."""

from dataclasses import dataclass

import numpy as np

from degenspinor.exprdsl import dual as dm

DIRECTIONS = ("t", "x", "y", "z")
DUAL = "dual"
CENTRAL = "central"


@dataclass(frozen=True)
class DiffConfig:
    mode: str = DUAL
    step: float = 1e-4

    def __post_init__(self):
        if self.mode not in (DUAL, CENTRAL):
            raise ValueError(f"mode must be 'dual' or 'central', got {self.mode!r}")
        if not 1e-8 <= self.step <= 1e-1:
            raise ValueError(f"step must lie in [1e-8, 1e-1], got {self.step!r}")


def _index(direction):
    if isinstance(direction, int):
        if direction not in range(4):
            raise ValueError(f"direction index must be 0..3, got {direction}")
        return direction
    try:
        return DIRECTIONS.index(direction)
    except ValueError:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}") from None


def values(field, event):
    return np.array([dm.value_of(c) for c in field(*event)], dtype=complex)


def differentiate(field, event, direction, cfg=DiffConfig()):
    """d field / d direction at ``event``.

    ``field(t, x, y, z)`` returns a sequence of scalars and must accept duals
    in dual mode.
    """
    mu = _index(direction)
    event = [float(v) for v in event]
    if cfg.mode == DUAL:
        args = list(event)
        args[mu] = dm.Dual(event[mu], 1.0)
        out = field(*args)
        return np.array([complex(dm.deriv_of(c, 0)) for c in out], dtype=complex)
    h = cfg.step
    plus, minus = list(event), list(event)
    plus[mu] += h
    minus[mu] -= h
    return (values(field, plus) - values(field, minus)) / (2 * h)


def jet(field, event, cfg=DiffConfig()):
    """Value and the four partial derivatives (rows ordered t, x, y, z)."""
    value = values(field, event)
    grads = np.array([differentiate(field, event, mu, cfg) for mu in range(4)])
    return value, grads
