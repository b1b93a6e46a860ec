"""Run configuration: JSON loading, schema validation and object construction."""

import json
import math
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from degenspinor.diff import DiffConfig
from degenspinor.errors import ConfigError, GeneratorError, NearSingularAngle
from degenspinor.exprdsl import parse
from degenspinor.generators import DERIVED, GaussianEnvelope, envelope_kI, linear_family, make_generators
from degenspinor.solution import (
    NEGATIVE,
    POSITIVE,
    massive_spinor,
    massless_spinor,
    plane_wave,
    weyl_spinor,
)

KINDS = ("massive", "massless", "weyl+", "weyl-")
AXES = ("t", "x", "y", "z")
DEFAULT_AXIS = (-2.0, 2.0, 5)
DEFAULT_RANDOM_EVENTS = 100
DEFAULT_SHIFTS = 10


def schema():
    text = resources.files("degenspinor").joinpath("config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def load(path):
    """Read a JSON config file; I/O and syntax problems become ConfigError."""
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def validate(doc):
    validator = jsonschema.Draft202012Validator(schema())
    errs = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errs:
        e = errs[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {e.message}")
    for axis, spec in doc.get("grid", {}).items():
        if spec[0] > spec[1]:
            raise ConfigError(f"grid axis {axis}: min {spec[0]} exceeds max {spec[1]}")


def _complex(v, default):
    if v is None:
        return complex(default)
    if isinstance(v, list):
        return complex(v[0], v[1])
    return complex(v)


@dataclass(frozen=True)
class Run:
    """Everything a subcommand needs, built from a validated document."""

    doc: dict
    seed: int
    kind: str
    gen: object
    field: object
    grid: dict
    diff: object
    tables: tuple
    directory: str
    random_events: int
    shifts: int
    potential_offset: tuple

    @property
    def helicity(self):
        return {"weyl+": POSITIVE, "weyl-": NEGATIVE}.get(self.kind)

    def grid_events(self):
        """Grid points in row-major (t, x, y, z) order."""
        axes = [np.linspace(*self.grid[a][:2], int(self.grid[a][2])) for a in AXES]
        mesh = np.meshgrid(*axes, indexing="ij")
        return [tuple(float(v) for v in p) for p in np.stack(mesh, axis=-1).reshape(-1, 4)]

    def sample_events(self, rng, n=None):
        """Uniform random events inside the grid box."""
        lo = np.array([self.grid[a][0] for a in AXES])
        hi = np.array([self.grid[a][1] for a in AXES])
        pts = rng.uniform(lo, hi, size=(n or self.random_events, 4))
        return [tuple(float(v) for v in p) for p in pts]


def _generators(doc):
    frame = doc.get("frame", {})
    particle = doc.get("particle", {})
    gens = doc.get("generators", {})
    sp = doc.get("solutionparams", {})
    if "g" in sp:
        envelope = sp["g"]
    else:
        env = sp.get("envelope", {})
        envelope = GaussianEnvelope(_complex(env.get("c1"), 1.0), float(env.get("kR", 1.0)), float(env.get("kI", 2.0)))
    common = dict(
        h=gens.get("h", "0"),
        envelope=envelope,
        k=_complex(sp.get("k"), 0.5),
        mass=float(particle.get("mass", 1.0)),
        charge=float(particle.get("charge", 1.0)),
        phi=float(frame.get("phi", math.pi / 6)),
        constants=doc.get("constants"),
    )
    if "linear" in gens:
        lin = gens["linear"]
        return linear_family(
            lin["k1"], lin["k2"], lin["k3"], convention=lin.get("swap_convention", DERIVED), **common
        )
    return make_generators(
        f1I=gens.get("f1I", "0"), f2R=gens.get("f2R", "0"), f2I=gens.get("f2I", "0"), **common
    )


def _field(gen, kind, sp):
    consts = gen.constants
    kI = envelope_kI(gen)
    c_t = _complex(sp.get("c_T"), 1.0)
    c_r = _complex(sp.get("c_R"), 1.0)

    def amp(key, names, coefficient):
        if key in sp:
            return parse(sp[key], names, consts)
        return plane_wave(coefficient, kI)

    if kind == "massive":
        return massive_spinor(gen)
    if kind == "massless":
        return massless_spinor(gen, amp("WT", ("s0", "s2"), c_t), amp("WR", ("s0", "s3"), c_r))
    if kind == "weyl+":
        return weyl_spinor(gen, POSITIVE, amp("W", ("s0", "s2"), c_t))
    return weyl_spinor(gen, NEGATIVE, amp("W", ("s0", "s3"), c_r))


def build(doc, seed=None, out=None):
    """Validate ``doc`` and construct the run.  Bad values raise ConfigError;
    malformed expressions propagate as parse errors."""
    validate(doc)
    particle = doc.get("particle", {})
    kind = particle.get("kind", "massive").replace("−", "-")
    try:
        gen = _generators(doc)
        field = _field(gen, kind, doc.get("solutionparams", {}))
    except (GeneratorError, NearSingularAngle) as exc:
        raise ConfigError(str(exc)) from exc
    grid = {a: tuple(doc.get("grid", {}).get(a, DEFAULT_AXIS)) for a in AXES}
    d = doc.get("diff")
    diff = None if d is None else DiffConfig(d.get("mode", "dual"), float(d.get("step", 1e-4)))
    outputs = doc.get("outputs", {})
    checks = doc.get("checks", {})
    return Run(
        doc=doc,
        seed=int(doc.get("seed", 0) if seed is None else seed),
        kind=kind,
        gen=gen,
        field=field,
        grid=grid,
        diff=diff,
        tables=tuple(outputs.get("tables", ("spinor",))),
        directory=out or outputs.get("directory", "out"),
        random_events=int(checks.get("random_events", DEFAULT_RANDOM_EVENTS)),
        shifts=int(checks.get("shifts", DEFAULT_SHIFTS)),
        potential_offset=tuple(float(v) for v in checks.get("potential_offset", (0.0, 0.0, 0.0, 0.0))),
    )
