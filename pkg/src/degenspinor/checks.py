"""The acceptance checks, runnable from tests and from ``degenspinor selftest``.

Each ``check_*`` function takes a seeded :class:`numpy.random.Generator` and
returns a :class:`CheckResult` carrying the measured value and the tolerance
it was held to.
"""

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from degenspinor import corpus, errors
from degenspinor.algebra import kernel_matrix
from degenspinor.diff import CENTRAL, DiffConfig, jet
from degenspinor.empot import (
    em_fields,
    em_fields_linear,
    field_direction_defect,
    kappa_dirac,
    kappa_weyl,
    linear_closed_form,
    potentials,
)
from degenspinor.exprdsl import evaluate, parse
from degenspinor.frame import Event, operator_transform_residual, to_s
from degenspinor.generators import DERIVED, PRINTED, GaussianEnvelope, linear_family
from degenspinor.solution import (
    NEGATIVE,
    POSITIVE,
    base_spinors,
    massive_spinor,
    massless_preset,
    separable_w,
    weyl_preset,
)
from degenspinor.verify import (
    convergence_order,
    decay_probe,
    degeneracy_conditions,
    dirac_residual,
    massless_spin_closed_form,
    pde35_relative,
    pde35_residual,
    shift_defect,
    spin_closed_form,
    spin_expectation,
    weyl_residual,
)


@dataclass(frozen=True)
class Defaults:
    phi: float = math.pi / 6
    mass: float = 1.0
    charge: float = 1.0
    k: float = 0.5
    c1: float = 1.0
    kR: float = 1.0
    kI: float = 2.0
    k1: float = 0.3
    k2: float = -0.2
    k3: float = 0.7
    h: str = "sin(t)"
    c_t: complex = 1.0
    c_r: complex = 0.5
    box: float = 2.0

    def family(self, convention=DERIVED, **over):
        kw = dict(
            h=self.h,
            convention=convention,
            envelope=GaussianEnvelope(self.c1, self.kR, self.kI),
            k=self.k,
            mass=self.mass,
            charge=self.charge,
            phi=self.phi,
        )
        kw.update(over)
        ks = (kw.pop("k1", self.k1), kw.pop("k2", self.k2), kw.pop("k3", self.k3))
        return linear_family(*ks, **kw)


DEFAULTS = Defaults()


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    measured: dict
    tolerance: dict
    detail: str = ""
    seconds: float = 0.0
    findings: dict = field(default_factory=dict)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        meas = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{status}] {self.number:2d} {self.name}: {meas}"

    def to_dict(self):
        return asdict(self)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def random_events(rng, n, box=DEFAULTS.box):
    return [Event(*map(float, row)) for row in rng.uniform(-box, box, size=(n, 4))]


_SHIFT_TERMS = (
    "sin(t)",
    "cos(x)",
    "t*x",
    "y*z",
    "exp(-t^2)",
    "x^2",
    "tanh(z)",
    "sin(x+y)",
    "t*y*z",
    "cosh(0.5*z)",
    "exp(0.3*x)*cos(y)",
)


def random_shift_expression(rng):
    """A random smooth real function of (t, x, y, z) as expression source."""
    i, j = rng.choice(len(_SHIFT_TERMS), size=2, replace=False)
    a, b, c = (round(float(v), 3) for v in rng.uniform(-3, 3, size=3))
    return f"{a}*{_SHIFT_TERMS[i]} + {b}*{_SHIFT_TERMS[j]} + {c}"


def _kappa_defect(kappa, phi):
    target = (1.0, -math.cos(phi), 0.0, -math.sin(phi))
    return max(abs(complex(a) - b) for a, b in zip(kappa, target))


# 1 ---------------------------------------------------------------------------

def check_kernel_identity(rng, samples=10_000):
    phi = rng.uniform(-math.pi, math.pi, size=samples)
    bad = np.abs(np.cos(phi)) <= 1e-3
    phi[bad] += 0.1
    t = rng.normal(size=samples) + 1j * rng.normal(size=samples)
    r = rng.normal(size=samples) + 1j * rng.normal(size=samples)
    worst = 0.0
    for p, tt, rr in zip(phi, t, r):
        u, v = base_spinors(p)
        psi = tt * u + rr * v
        worst = max(worst, float(np.linalg.norm(kernel_matrix(p) @ psi) / np.linalg.norm(psi)))
    return CheckResult(
        1, "kernel annihilates degenerate-family spinors", worst <= 1e-12,
        {"max_rel_kernel_norm": worst, "samples": samples}, {"max": 1e-12},
    )


# 2 ---------------------------------------------------------------------------

def _grid(n=5, box=DEFAULTS.box):
    axis = np.linspace(-box, box, n)
    return [Event(*map(float, p)) for p in np.array(np.meshgrid(axis, axis, axis, axis, indexing="ij")).reshape(4, -1).T]


def check_degeneracy_invariance(rng, n_shifts=10, grid_n=5, d=DEFAULTS):
    gen = d.family()
    shifts = [parse(random_shift_expression(rng), ("t", "x", "y", "z")) for _ in range(n_shifts)]
    fields = {
        "dirac": (massive_spinor(gen), None),
        "weyl+": (weyl_preset(gen, POSITIVE), POSITIVE),
        "weyl-": (weyl_preset(gen, NEGATIVE), NEGATIVE),
    }
    worst = {name: 0.0 for name in fields}
    worst_kappa = 0.0
    for e in _grid(grid_n):
        a = potentials(gen, e)
        svals = [evaluate(s, e._asdict()).real for s in shifts]
        for name, (psi, hel) in fields.items():
            value, grads = jet(psi.raw, e)
            if hel is None:
                kappa, m, kind = kappa_dirac(value), gen.mass, "dirac"
            else:
                kappa, m, kind = kappa_weyl(value, hel), 0.0, "weyl"
            worst_kappa = max(worst_kappa, _kappa_defect(kappa, gen.phi))
            for sv in svals:
                diff = shift_defect(value, grads, a, kappa, sv, m, kind, hel or POSITIVE)
                worst[name] = max(worst[name], diff)
    measured = {f"max_rel_diff_{k}": v for k, v in worst.items()}
    measured["events"] = grid_n**4
    measured["shifts"] = n_shifts
    return CheckResult(
        2, "residual invariant under potential shifts along kappa",
        all(v <= 1e-13 for v in worst.values()), measured, {"max": 1e-13},
        detail=f"kappa extracted per event; max kappa defect {worst_kappa:.2e}",
    )


# 3 ---------------------------------------------------------------------------

def check_massive_solution(rng, n_events=100, n_order=10, d=DEFAULTS):
    gen = d.family()
    psi = massive_spinor(gen)
    pot = lambda e: potentials(gen, e)  # noqa: E731
    events = random_events(rng, n_events)
    worst = max(dirac_residual(psi, pot, gen.mass, e).rel_norm for e in events)
    orders = []
    for e in events[:n_order]:
        r1 = dirac_residual(psi, pot, gen.mass, e, DiffConfig(CENTRAL, 1e-3)).rel_norm
        r2 = dirac_residual(psi, pot, gen.mass, e, DiffConfig(CENTRAL, 5e-4)).rel_norm
        orders.append(convergence_order(r1, r2))
    ok = worst <= 1e-10 and all(1.8 <= o <= 2.2 for o in orders)
    return CheckResult(
        3, "massive spinor solves the Dirac equation", ok,
        {"max_dual_rel_norm": worst, "min_order": min(orders), "max_order": max(orders)},
        {"dual_max": 1e-10, "order": [1.8, 2.2]},
    )


# 4 ---------------------------------------------------------------------------

def sign_findings(d=DEFAULTS):
    """Measured s2 - s3 and amplitude exponent against both sign variants."""
    gen = d.family()
    fr = gen.frame
    e = Event(2.0, 1.0, 1.0, 1.0)
    s = to_s(fr, e)
    diff = complex(s.s2 - s.s3)
    minus = e.x * fr.tan - e.z
    plus = e.x * fr.tan + e.z
    w = complex(separable_w(gen, s))
    g_abs = abs(complex(GaussianEnvelope(d.c1, d.kR, d.kI).c1) * math.exp(-d.kR * complex(s.s0).real ** 2))
    rate = (d.mass**2 * fr.cos**2 + d.k**2) / (2 * d.k)
    measured = math.log(abs(w) / g_abs)
    return {
        "event": list(e),
        "s2_minus_s3": [diff.real, diff.imag],
        "x_tan_minus_z": minus,
        "x_tan_plus_z": plus,
        "s2_minus_s3_matches": "x*tan(phi) - z" if abs(diff - minus) < 1e-12 else "x*tan(phi) + z" if abs(diff - plus) < 1e-12 else "neither",
        "amplitude_log_modulus": measured,
        "amplitude_exponent_with_minus_z": -rate * minus,
        "amplitude_exponent_with_plus_z": -rate * plus,
        "amplitude_matches": "minus_z" if abs(measured + rate * minus) < 1e-10 else "plus_z" if abs(measured + rate * plus) < 1e-10 else "neither",
    }


def check_linear_example(rng, n_events=50, d=DEFAULTS):
    results = {}
    for conv in (DERIVED, PRINTED):
        gen = d.family(convention=conv)
        psi = massive_spinor(gen)
        pot = lambda e, g=gen: linear_closed_form(d.k1, d.k2, d.k3, g.h, g.frame, e)  # noqa: E731
        rels = [dirac_residual(psi, pot, gen.mass, e).rel_norm for e in random_events(rng, n_events)]
        results[conv] = (max(rels), min(rels))
    ok = results[DERIVED][0] <= 1e-10 and results[PRINTED][1] > 1e-3
    findings = {
        "linear_family_assignment": {
            "derived": {"f2R": "k3*s0", "f2I": "k2*s0", "max_rel_norm": results[DERIVED][0]},
            "printed": {"f2R": "k2*s0", "f2I": "k3*s0", "min_rel_norm": results[PRINTED][1]},
            "consistent_assignment": DERIVED if ok else "undetermined",
        },
        "s_difference_sign": sign_findings(d),
    }
    return CheckResult(
        4, "linear example against closed-form potentials", ok,
        {"derived_max_rel": results[DERIVED][0], "printed_min_rel": results[PRINTED][1]},
        {"derived_max": 1e-10, "printed_min": 1e-3},
        findings=findings,
    )


# 5 ---------------------------------------------------------------------------

def check_massless_and_weyl(rng, n_events=50, d=DEFAULTS):
    gen = d.family()
    pot = lambda e: linear_closed_form(d.k1, d.k2, d.k3, gen.h, gen.frame, e)  # noqa: E731
    events = random_events(rng, n_events)
    ml = massless_preset(gen, d.c_t, d.c_r)
    worst = {"massless": max(dirac_residual(ml, pot, 0.0, e).rel_norm for e in events)}
    wrong = {}
    for hel, other in ((POSITIVE, NEGATIVE), (NEGATIVE, POSITIVE)):
        w = weyl_preset(gen, hel)
        worst[f"weyl_{hel}"] = max(weyl_residual(w, pot, hel, e).rel_norm for e in events)
        wrong[f"weyl_{hel}_wrong_eq"] = min(weyl_residual(w, pot, other, e).rel_norm for e in events)
    ok = all(v <= 1e-10 for v in worst.values()) and all(v > 1e-3 for v in wrong.values())
    measured = {f"max_{k}": v for k, v in worst.items()}
    measured.update({f"min_{k}": v for k, v in wrong.items()})
    return CheckResult(
        5, "massless Dirac and Weyl spinors", ok, measured, {"max": 1e-10, "wrong_helicity_min": 1e-3},
    )


# 6 ---------------------------------------------------------------------------

def check_kappa(rng, n_events=50, d=DEFAULTS):
    gen = d.family()
    builders = {
        "massive": (massive_spinor(gen), None),
        "massless": (massless_preset(gen, d.c_t, d.c_r), None),
        "weyl+": (weyl_preset(gen, POSITIVE), POSITIVE),
        "weyl-": (weyl_preset(gen, NEGATIVE), NEGATIVE),
    }
    worst = {}
    for name, (psi, hel) in builders.items():
        w = 0.0
        for e in random_events(rng, n_events):
            v = psi(e)
            kappa = kappa_dirac(v) if hel is None else kappa_weyl(v, hel)
            w = max(w, _kappa_defect(kappa, gen.phi))
        worst[name] = w
    return CheckResult(
        6, "extracted kappa is (1, -cos phi, 0, -sin phi)",
        all(v <= 1e-12 for v in worst.values()),
        {f"max_defect_{k}": v for k, v in worst.items()}, {"max": 1e-12},
    )


# 7 ---------------------------------------------------------------------------

def check_degeneracy_preconditions(rng, samples=2000, d=DEFAULTS):
    gt_worst = 0.0
    g2_worst = 0.0
    for _ in range(samples):
        phi = rng.uniform(-math.pi, math.pi)
        if abs(math.cos(phi)) < 1e-3:
            continue
        t = complex(*rng.normal(size=2))
        r = complex(*rng.normal(size=2))
        u, v = base_spinors(phi)
        psi = t * u + r * v
        c_gamma, c_g2 = degeneracy_conditions(psi)
        gt_worst = max(gt_worst, abs(c_gamma) / float(np.vdot(psi, psi).real))
        g2_worst = max(g2_worst, abs(c_g2 - 8j * t * r * math.cos(phi)))
    gen = d.family()
    psi_field = massive_spinor(gen)
    for e in random_events(rng, 50):
        psi = psi_field(e)
        c_gamma, _ = degeneracy_conditions(psi)
        gt_worst = max(gt_worst, abs(c_gamma) / float(np.vdot(psi, psi).real))
    ok = gt_worst <= 1e-12 and g2_worst <= 1e-10
    return CheckResult(
        7, "degeneracy preconditions", ok,
        {"max_gamma_tilde_rel": gt_worst, "max_g2_closed_form_err": g2_worst},
        {"gamma_tilde_max": 1e-12, "g2_max": 1e-10},
    )


# 8 ---------------------------------------------------------------------------

def _rel(a, b):
    va = np.array([*a.E, *a.B])
    vb = np.array([*b.E, *b.B])
    return float(np.linalg.norm(va - vb) / max(np.linalg.norm(vb), 1.0))


def check_fields(rng, n_events=100, d=DEFAULTS):
    worst_central = 0.0
    worst_dual = 0.0
    events = random_events(rng, n_events)
    for h in ("0", "t^2", "sin(t)*x", "x*y*z"):
        gen = d.family(h=h)
        for e in events:
            closed = em_fields_linear(d.k1, d.k2, d.k3, gen.h, gen.charge, gen.frame, e)
            worst_dual = max(worst_dual, _rel(em_fields(gen, e), closed))
            worst_central = max(worst_central, _rel(em_fields(gen, e, DiffConfig(CENTRAL, 1e-5)), closed))
    special = d.family(h="t^2", k1=0.0, k2=0.0, k3=0.0)
    cross_worst = 0.0
    b_worst = 0.0
    for e in events:
        cross, b = field_direction_defect(em_fields(special, e), special.phi)
        cross_worst = max(cross_worst, cross)
        b_worst = max(b_worst, b)
    ok = worst_central <= 1e-8 and worst_dual <= 1e-12 and cross_worst <= 1e-12 and b_worst <= 1e-12
    return CheckResult(
        8, "electromagnetic fields: closed form vs numeric", ok,
        {
            "max_rel_central": worst_central,
            "max_rel_dual": worst_dual,
            "time_only_E_cross_dir": cross_worst,
            "time_only_B_norm": b_worst,
        },
        {"central": 1e-8, "dual": 1e-12, "time_only": 1e-12},
    )


# 9 ---------------------------------------------------------------------------

def check_spin(rng, n_events=50, d=DEFAULTS):
    events = random_events(rng, n_events)
    gen = d.family()
    psi = massive_spinor(gen)
    closed = spin_closed_form(gen)
    sy = 0.0
    massive_err = 0.0
    for e in events:
        v = psi(e)
        n2 = float(np.vdot(v, v).real)
        got = spin_expectation(v)
        want = closed(n2)
        sy = max(sy, abs(got.Sy))
        massive_err = max(massive_err, max(abs(g - w) for g, w in zip(got, want)) / n2)

    zero_gen = d.family(k=d.mass * math.cos(d.phi))
    zero_psi = massive_spinor(zero_gen)
    zero_worst = 0.0
    for e in events:
        got = spin_expectation(zero_psi(e))
        zero_worst = max(zero_worst, max(abs(v) for v in got))

    ml = massless_preset(gen, d.c_t, d.c_r)
    want = massless_spin_closed_form(d.c_t, d.c_r, gen.phi)
    spins = [spin_expectation(ml(e)) for e in events]
    massless_err = max(max(abs(g - w) for g, w in zip(s, want)) for s in spins)
    spread = max(max(abs(a - b) for a, b in zip(s, spins[0])) for s in spins)
    sy = max(sy, max(abs(s.Sy) for s in spins))

    ok = sy <= 1e-12 and massive_err <= 1e-10 and zero_worst <= 1e-12 and massless_err <= 1e-12 and spread <= 1e-12
    return CheckResult(
        9, "spin projections", ok,
        {
            "max_abs_Sy": sy,
            "massive_closed_form_rel_err": massive_err,
            "k_eq_m_cos_phi_max": zero_worst,
            "massless_closed_form_err": massless_err,
            "massless_event_spread": spread,
        },
        {"Sy": 1e-12, "massive": 1e-10, "zero": 1e-12, "massless": 1e-12, "spread": 1e-12},
    )


# 10 --------------------------------------------------------------------------

def check_localization(rng, d=DEFAULTS):
    gen = d.family()
    radii = (5.0, 10.0, 15.0, 20.0)
    psi = massive_spinor(gen)
    reports = [decay_probe(psi, axis, radii) for axis in ("+t", "-t", "+x", "-x", "+z", "-z")]
    massive_ok = all(r.strictly_decreasing and r.ratio < 1e-6 for r in reports)
    ml = massless_preset(gen, d.c_t, d.c_r)
    flat = 0.0
    for axis in ("+t", "-t", "+x", "-x", "+z", "-z"):
        r = decay_probe(ml, axis, radii)
        flat = max(flat, max(abs(m - r.origin) for m in r.magnitudes) / r.origin)
    return CheckResult(
        10, "massive spinor localized along axes, massless not", massive_ok and flat <= 1e-12,
        {
            "max_ratio_r20": max(r.ratio for r in reports),
            "all_strictly_decreasing": all(r.strictly_decreasing for r in reports),
            "massless_max_rel_variation": flat,
        },
        {"ratio": 1e-6, "massless_variation": 1e-12},
    )


# 11 --------------------------------------------------------------------------

TRANSFORM_CORPUS = (
    "sin(x1)*exp(x2)",
    "x1*x2 + x3^2*x4",
    "cos(x1 + x2)*x3",
    "exp(0.5*x1*x4) - x2^3",
    "1/(2 + x1^2 + x3^2)",
)


def random_invertible(rng, n=4, max_cond=100.0):
    """Random complex matrix with unit spectral norm and bounded condition number.

    The central-difference error scales like step^2 |A|^3, so unit norm keeps
    the 1e-8 bound at step 1e-4 about the method rather than about the draw.
    """
    while True:
        a = np.eye(n) + 0.5 * (rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n)))
        if np.linalg.cond(a) < max_cond:
            return a / np.linalg.norm(a, 2)


def check_operator_transform(rng, n_matrices=20):
    exprs = [parse(t, ("x1", "x2", "x3", "x4")) for t in TRANSFORM_CORPUS]
    worst = 0.0
    orders = []
    for _ in range(n_matrices):
        a = random_invertible(rng)
        point = rng.uniform(-0.5, 0.5, 4)
        for u in exprs:
            worst = max(worst, operator_transform_residual(a, u, point, 1e-4))
            r1 = operator_transform_residual(a, u, point, 1e-3)
            r2 = operator_transform_residual(a, u, point, 5e-4)
            orders.append(convergence_order(r1, r2))
    ok = worst <= 1e-8 and all(1.5 <= o <= 2.5 for o in orders)
    return CheckResult(
        11, "coordinate change turns D_i into d/ds_i", ok,
        {"max_residual_h1e-4": worst, "min_order": min(orders), "max_order": max(orders)},
        {"max": 1e-8, "order": [1.5, 2.5]},
    )


# 12 --------------------------------------------------------------------------

def check_pde35(rng, n_points=100, d=DEFAULTS):
    gen = d.family()
    worst = 0.0
    control = math.inf
    for e in random_events(rng, n_points):
        s = to_s(gen.frame, e)
        worst = max(worst, abs(pde35_residual(gen, s)))
        control = min(control, pde35_relative(gen, s, s2_scale=1.1))
    return CheckResult(
        12, "separable W solves its second-order equation", worst <= 1e-12 and control > 1e-3,
        {"max_abs_residual": worst, "perturbed_min_rel": control},
        {"max": 1e-12, "perturbed_min": 1e-3},
    )


# 13 --------------------------------------------------------------------------

def check_parser(rng=None):
    roundtrip_fail = []
    for text in corpus.EXPRESSIONS:
        e = parse(text, corpus.VARIABLES, corpus.CONSTANTS)
        if parse(e.unparse(), corpus.VARIABLES, corpus.CONSTANTS) != e:
            roundtrip_fail.append(text)
    error_fail = []
    for text, cls, offset in corpus.MALFORMED:
        try:
            parse(text, corpus.VARIABLES, corpus.CONSTANTS)
            error_fail.append((text, "no error"))
        except errors.ExprParseError as exc:
            if type(exc).__name__ != cls or exc.offset != offset:
                error_fail.append((text, f"{type(exc).__name__}@{exc.offset}"))
    ok = not roundtrip_fail and not error_fail
    return CheckResult(
        13, "expression parser corpus", ok,
        {
            "roundtrip_ok": len(corpus.EXPRESSIONS) - len(roundtrip_fail),
            "malformed_ok": len(corpus.MALFORMED) - len(error_fail),
        },
        {"roundtrip": len(corpus.EXPRESSIONS), "malformed": len(corpus.MALFORMED)},
        detail="; ".join(map(str, roundtrip_fail + error_fail)),
    )


ALL_CHECKS = (
    check_kernel_identity,
    check_degeneracy_invariance,
    check_massive_solution,
    check_linear_example,
    check_massless_and_weyl,
    check_kappa,
    check_degeneracy_preconditions,
    check_fields,
    check_spin,
    check_localization,
    check_operator_transform,
    check_pde35,
    check_parser,
)


def run_all(seed=0, checks=ALL_CHECKS):
    """Run every check with its own child generator so results do not depend on order."""
    children = np.random.SeedSequence(seed).spawn(len(checks))
    results = []
    for fn, child in zip(checks, children):
        start = time.perf_counter()
        res = fn(np.random.default_rng(child))
        res.seconds = time.perf_counter() - start
        results.append(res)
    return results
