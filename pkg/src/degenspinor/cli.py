"""Command-line front end.

    degenspinor <subcommand> --config run.json [--out DIR] [--seed N] [--timing]

Exit codes: 0 success, 1 a verification check failed, 2 bad configuration,
3 malformed expression.
"""

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from degenspinor import __version__, checks
from degenspinor import config as cfgmod
from degenspinor.checks import CheckResult
from degenspinor.diff import CENTRAL, jet
from degenspinor.empot import (
    AUTO_CENTRAL,
    auto_diff,
    em_fields,
    em_fields_linear,
    kappa_dirac,
    kappa_weyl,
    potentials,
)
from degenspinor.errors import (
    ConfigError,
    DegeneracyConditionViolated,
    ExprParseError,
    VerificationFailure,
    ZeroSpinor,
)
from degenspinor.exprdsl import evaluate, parse
from degenspinor.generators import DERIVED, GaussianEnvelope
from degenspinor.verify import (
    decay_probe,
    degeneracy_conditions,
    dirac_residual,
    massless_spin_closed_form,
    shift_defect,
    spin_closed_form,
    spin_expectation,
    weyl_residual,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3

DUAL_RESIDUAL_TOL = 1e-10
CENTRAL_RESIDUAL_COEF = 1e2  # 1e-6 at the default step 1e-4
SHIFT_TOL = 1e-13
ALGEBRA_TOL = 1e-12
DECAY_AXES = ("+t", "-t", "+x", "-x", "+z", "-z")
DECAY_RADII = (5.0, 10.0, 15.0, 20.0)

SPINOR_HEADER = ("t", "x", "y", "z", "re0", "im0", "re1", "im1", "re2", "im2", "re3", "im3", "abs")
FIELDS_HEADER = ("t", "x", "y", "z", "a0", "a1", "a2", "a3", "Ex", "Ey", "Ez", "Bx", "By", "Bz")
SPIN_HEADER = ("t", "x", "y", "z", "Sx", "Sy", "Sz")


# serialization ---------------------------------------------------------------

def jsonable(v):
    """Plain JSON types; complex -> [re, im], non-finite floats -> strings."""
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [jsonable(float(v.real)), jsonable(float(v.imag))]
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    return v


def _num(v):
    return repr(float(v))


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(v) for v in row])


def write_report(path, report):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(jsonable(report), fh, indent=2, allow_nan=False)
        fh.write("\n")


# helpers ---------------------------------------------------------------------

def field_diff(run):
    """The configured derivative mode, or dual unless an expression uses abs."""
    if run.diff is not None:
        return run.diff
    auto = auto_diff(run.gen)
    for key in ("WT", "WR", "W"):
        src = run.doc.get("solutionparams", {}).get(key)
        if src is not None and parse(src, ("s0", "s2", "s3"), run.gen.constants).has_abs():
            return AUTO_CENTRAL
    return auto


def residual_tol(diff):
    if diff.mode == CENTRAL:
        return max(DUAL_RESIDUAL_TOL, CENTRAL_RESIDUAL_COEF * diff.step**2)
    return DUAL_RESIDUAL_TOL


def offset_potentials(run):
    off = run.potential_offset

    def pot(event):
        return tuple(a + o for a, o in zip(potentials(run.gen, event), off))

    return pot


def residual_at(run, pot, event, diff):
    if run.kind in ("weyl+", "weyl-"):
        return weyl_residual(run.field, pot, run.helicity, event, diff)
    m = run.gen.mass if run.kind == "massive" else 0.0
    return dirac_residual(run.field, pot, m, event, diff)


def extract_kappa(run, value):
    if run.helicity is None:
        return kappa_dirac(value)
    return kappa_weyl(value, run.helicity)


def _kappa_target(phi):
    return (1.0, -math.cos(phi), 0.0, -math.sin(phi))


def _uses_presets(run):
    sp = run.doc.get("solutionparams", {})
    return not any(k in sp for k in ("WT", "WR", "W"))


def _rngs(seed, n):
    return [np.random.default_rng(c) for c in np.random.SeedSequence(seed).spawn(n)]


def _result(number, name, passed, measured, tolerance, detail=""):
    return CheckResult(number, name, bool(passed), measured, tolerance, detail)


# subcommands -----------------------------------------------------------------

def spinor_header(run):
    """Four components for Dirac spinors, two for Weyl spinors."""
    if run.field.size == 2:
        return SPINOR_HEADER[:8] + SPINOR_HEADER[-1:]
    return SPINOR_HEADER


def spinor_rows(run):
    for e in run.grid_events():
        v = run.field(e)
        parts = []
        for c in v:
            parts += [c.real, c.imag]
        yield (*e, *parts, float(np.linalg.norm(v)))


def fields_rows(run):
    diff = field_diff(run)
    pot = offset_potentials(run)
    for e in run.grid_events():
        f = em_fields(run.gen, e, diff)
        yield (*e, *pot(e), *f.E, *f.B)


def spin_rows(run):
    for e in run.grid_events():
        yield (*e, *spin_expectation(run.field(e)))


TABLES = {
    "spinor": ("spinor.csv", spinor_header, spinor_rows),
    "fields": ("fields.csv", lambda run: FIELDS_HEADER, fields_rows),
    "spin": ("spin.csv", lambda run: SPIN_HEADER, spin_rows),
}


def _emit(run, names):
    out = Path(run.directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in names:
        fname, header, rows = TABLES[name]
        write_csv(out / fname, header(run), rows(run))
        written.append(fname)
    return written


def cmd_build(run):
    written = _emit(run, run.tables)
    n = len(run.grid_events())
    finite = all(np.all(np.isfinite(run.field(e))) for e in run.grid_events())
    res = [_result(1, "spinor finite on grid", finite, {"grid_points": n}, {})]
    return res, written


def check_residual(run, events, number=1):
    diff = field_diff(run)
    pot = offset_potentials(run)
    rels = [residual_at(run, pot, e, diff).rel_norm for e in events]
    tol = residual_tol(diff)
    eq = "Weyl" if run.helicity else "Dirac"
    return _result(
        number, f"{eq} residual", max(rels) <= tol,
        {"max_rel_norm": max(rels), "events": len(events), "mode": diff.mode},
        {"max": tol},
    )


def check_degeneracy(run, events, number=2):
    phi = run.gen.phi
    target = _kappa_target(phi)
    kdef = 0.0
    gt = 0.0
    g2_min = math.inf
    try:
        for e in events:
            v = run.field(e)
            n2 = max(float(np.vdot(v, v).real), 1e-300)
            if run.helicity is None:
                c_gt, c_g2 = degeneracy_conditions(v)
                gt = max(gt, abs(c_gt) / n2)
                g2_min = min(g2_min, abs(c_g2) / n2)
            k = extract_kappa(run, v)
            kdef = max(kdef, max(abs(complex(a) - b) for a, b in zip(k, target)))
    except (DegeneracyConditionViolated, ZeroSpinor) as exc:
        return _result(number, "degeneracy conditions", False, {"events": len(events)}, {}, str(exc))
    measured = {"max_kappa_defect": kdef}
    ok = kdef <= ALGEBRA_TOL
    if run.helicity is None:
        measured.update({"max_gamma_tilde_rel": gt, "min_gamma2_rel": g2_min})
        ok = ok and gt <= ALGEBRA_TOL and g2_min > ALGEBRA_TOL
    return _result(number, "degeneracy conditions", ok, measured, {"max": ALGEBRA_TOL, "gamma2_min": ALGEBRA_TOL})


def check_spin(run, events, number=3):
    sy = 0.0
    closed_err = None
    closed = None
    detail = ""
    if run.kind == "massive":
        if run.gen.k.imag == 0:
            closed = spin_closed_form(run.gen)
        else:
            detail = "closed form skipped: complex k"
    elif run.kind == "massless" and _uses_presets(run):
        sp = run.doc.get("solutionparams", {})
        c_t = cfgmod._complex(sp.get("c_T"), 1.0)
        c_r = cfgmod._complex(sp.get("c_R"), 1.0)
        const = massless_spin_closed_form(c_t, c_r, run.gen.phi)
        closed = lambda n2: const  # noqa: E731
    for e in events:
        v = run.field(e)
        n2 = float(np.vdot(v, v).real)
        s = spin_expectation(v)
        sy = max(sy, abs(s.Sy) / max(1.0, n2))
        if closed is not None:
            err = max(abs(a - b) for a, b in zip(s, closed(n2))) / max(1.0, n2)
            closed_err = err if closed_err is None else max(closed_err, err)
    measured = {"max_Sy_rel": sy}
    ok = sy <= ALGEBRA_TOL
    if closed_err is not None:
        measured["closed_form_rel_err"] = closed_err
        ok = ok and closed_err <= DUAL_RESIDUAL_TOL
    return _result(number, "spin projections", ok, measured, {"Sy": ALGEBRA_TOL, "closed_form": DUAL_RESIDUAL_TOL}, detail)


def check_decay(run, number=4):
    reports = [decay_probe(run.field, a, DECAY_RADII) for a in DECAY_AXES]
    ok = all(r.strictly_decreasing and r.ratio < 1e-6 for r in reports)
    return _result(
        number, "localization along axes", ok,
        {"max_ratio_r20": max(r.ratio for r in reports), "all_strictly_decreasing": all(r.strictly_decreasing for r in reports)},
        {"ratio": 1e-6},
    )


def cmd_verify(run):
    rng = _rngs(run.seed, 1)[0]
    events = run.sample_events(rng)
    res = [check_residual(run, events), check_degeneracy(run, events), check_spin(run, events)]
    if run.kind == "massive" and isinstance(run.gen.envelope, GaussianEnvelope):
        res.append(check_decay(run))
    return res, []


def cmd_fields(run):
    written = _emit(run, ["fields"])
    res = []
    gen = run.gen
    if gen.linear_k is not None and gen.convention == DERIVED and gen.charge == 1.0:
        diff = field_diff(run)
        tol = 1e-12 if diff.mode != CENTRAL else 1e-8
        worst = 0.0
        for e in run.grid_events():
            a = em_fields(gen, e, diff)
            b = em_fields_linear(*gen.linear_k, gen.h, gen.charge, gen.frame, e)
            va, vb = np.array([*a.E, *a.B]), np.array([*b.E, *b.B])
            worst = max(worst, float(np.linalg.norm(va - vb) / max(np.linalg.norm(vb), 1.0)))
        res.append(_result(1, "fields match linear closed form", worst <= tol, {"max_rel": worst, "mode": diff.mode}, {"max": tol}))
    return res, written


def cmd_spin(run):
    written = _emit(run, ["spin"])
    return [check_spin(run, run.grid_events(), 1)], written


def cmd_sweep(run):
    ev_rng, shift_rng = _rngs(run.seed, 2)
    events = run.sample_events(ev_rng)
    sources = [checks.random_shift_expression(shift_rng) for _ in range(run.shifts)]
    shifts = [parse(s, ("t", "x", "y", "z")) for s in sources]
    diff = field_diff(run)
    pot = offset_potentials(run)
    m = run.gen.mass if run.kind == "massive" else 0.0
    kind = "weyl" if run.helicity else "dirac"
    worst = 0.0
    try:
        for e in events:
            value, grads = jet(run.field.raw, e, diff)
            kappa = extract_kappa(run, value)
            a = pot(e)
            env = dict(zip(("t", "x", "y", "z"), e))
            for s in shifts:
                sv = evaluate(s, env).real
                worst = max(worst, shift_defect(value, grads, a, kappa, sv, m, kind, run.helicity or "positive"))
    except (DegeneracyConditionViolated, ZeroSpinor) as exc:
        return [_result(2, "residual invariant under shifts", False, {}, {}, str(exc))], []
    res = [
        check_residual(run, events, 1),
        _result(
            2, "residual invariant under shifts", worst <= SHIFT_TOL,
            {"max_rel_change": worst, "events": len(events), "shifts": len(shifts)},
            {"max": SHIFT_TOL},
            detail="; ".join(sources),
        ),
    ]
    return res, []


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "fields": cmd_fields,
    "spin": cmd_spin,
    "sweep": cmd_sweep,
}


def _findings(seed):
    rng = _rngs(seed, 1)[0]
    res = checks.check_linear_example(rng, n_events=10)
    return {"reference_parameters": "built-in defaults", **res.findings}


def _check_dict(r, timing):
    d = r.to_dict()
    d.pop("findings")
    if not timing:
        d.pop("seconds")
    return d


def run_subcommand(name, run, timing=False):
    start = time.perf_counter()
    results, written = COMMANDS[name](run)
    report = {
        "tool": "degenspinor",
        "version": __version__,
        "subcommand": name,
        "seed": run.seed,
        "passed": all(r.passed for r in results),
        "checks": [_check_dict(r, timing) for r in results],
        "outputs": written,
        "findings": _findings(run.seed),
        "config": run.doc,
    }
    if timing:
        report["wall_time_s"] = time.perf_counter() - start
    return results, report


def run_selftest(seed, directory, timing=False):
    start = time.perf_counter()
    results = checks.run_all(seed)
    findings = next(r.findings for r in results if r.findings)
    report = {
        "tool": "degenspinor",
        "version": __version__,
        "subcommand": "selftest",
        "seed": seed,
        "passed": all(r.passed for r in results),
        "checks": [_check_dict(r, timing) for r in results],
        "outputs": [],
        "findings": {"reference_parameters": "built-in defaults", **findings},
        "config": {"seed": seed, "defaults": asdict(checks.DEFAULTS)},
    }
    if timing:
        report["wall_time_s"] = time.perf_counter() - start
    return results, report


def _parser():
    p = argparse.ArgumentParser(prog="degenspinor", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "build": "sample the spinor (and any other configured tables) on the grid",
        "verify": "residual, degeneracy, spin and decay checks at random events",
        "fields": "potentials and E/B fields on the grid",
        "spin": "spin projections on the grid",
        "sweep": "re-verify under random shifts of the potentials along kappa",
        "selftest": "run the acceptance checks with built-in defaults",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", required=name != "selftest", help="JSON run configuration")
        sp.add_argument("--out", help="output directory (overrides outputs.directory)")
        sp.add_argument("--seed", type=int, help="seed for randomized checks (overrides config)")
        sp.add_argument("--timing", action="store_true", help="record wall time (outputs are then not byte-stable)")
    return p


def _execute(args):
    if args.seed is not None and not 0 <= args.seed < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    if args.command == "selftest":
        doc = {}
        if args.config:
            doc = cfgmod.load(args.config)
            cfgmod.validate(doc)
        seed = args.seed if args.seed is not None else doc.get("seed", 0)
        directory = args.out or doc.get("outputs", {}).get("directory", "out")
        results, report = run_selftest(seed, directory, args.timing)
    else:
        doc = cfgmod.load(args.config)
        run = cfgmod.build(doc, seed=args.seed, out=args.out)
        directory = run.directory
        results, report = run_subcommand(args.command, run, args.timing)
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    write_report(out / "report.json", report)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise VerificationFailure("failed: " + ", ".join(failed))


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        _execute(args)
    except ExprParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
