import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from degenspinor import cli
from degenspinor import config as cfgmod
from degenspinor.errors import ConfigError

ROOT = Path(__file__).resolve().parents[1]
PHI = math.pi / 6

LINEAR = {
    "seed": 5,
    "particle": {"kind": "massive"},
    "generators": {"h": "sin(t)", "linear": {"k1": 0.3, "k2": -0.2, "k3": 0.7}},
    "grid": {"t": [-1, 1, 3], "x": [-1, 1, 2], "y": [0, 0, 1], "z": [-1, 1, 2]},
    "outputs": {"tables": ["spinor", "fields", "spin"]},
    "checks": {"random_events": 15, "shifts": 3},
}


def write(tmp_path, doc, name="run.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


def run(tmp_path, sub, doc, out="out", *extra):
    code = cli.main([sub, "--config", write(tmp_path, doc), "--out", str(tmp_path / out), *extra])
    return code, tmp_path / out


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], [[float(v) for v in r] for r in rows[1:]]


def test_schema_shipped_in_docs():
    packaged = cfgmod.schema()
    with open(ROOT / "docs" / "config.schema.json") as fh:
        assert json.load(fh) == packaged


def test_build_tables(tmp_path):
    code, out = run(tmp_path, "build", LINEAR)
    assert code == 0
    header, rows = read_csv(out / "spinor.csv")
    assert tuple(header) == cli.SPINOR_HEADER
    assert len(rows) == 3 * 2 * 1 * 2
    # row-major in (t, x, y, z): z varies fastest
    assert [r[:4] for r in rows[:2]] == [[-1, -1, 0, -1], [-1, -1, 0, 1]]
    assert tuple(read_csv(out / "fields.csv")[0]) == cli.FIELDS_HEADER
    assert tuple(read_csv(out / "spin.csv")[0]) == cli.SPIN_HEADER
    for r in rows:
        amps = np.array(r[4:12]).reshape(4, 2)
        assert r[12] == pytest.approx(np.linalg.norm(amps))


@pytest.mark.parametrize("sub", ["build", "verify", "fields", "spin", "sweep"])
def test_deterministic_outputs(tmp_path, sub):
    c1, o1 = run(tmp_path, sub, LINEAR, "a")
    c2, o2 = run(tmp_path, sub, LINEAR, "b")
    assert c1 == c2 == 0
    names = sorted(p.name for p in o1.iterdir())
    assert names == sorted(p.name for p in o2.iterdir())
    for n in names:
        assert (o1 / n).read_bytes() == (o2 / n).read_bytes()


def test_report_contents(tmp_path):
    code, out = run(tmp_path, "verify", LINEAR)
    report = json.loads((out / "report.json").read_text())
    assert code == 0 and report["passed"]
    assert list(report)[:4] == ["tool", "version", "subcommand", "seed"]
    assert report["seed"] == 5
    assert "wall_time_s" not in report
    names = [c["name"] for c in report["checks"]]
    assert names == ["Dirac residual", "degeneracy conditions", "spin projections", "localization along axes"]
    f = report["findings"]
    assert f["linear_family_assignment"]["consistent_assignment"] == "derived"
    assert f["s_difference_sign"]["s2_minus_s3_matches"] == "x*tan(phi) - z"
    assert f["s_difference_sign"]["amplitude_matches"] == "minus_z"
    assert report["config"] == LINEAR


def test_seed_flag_and_timing(tmp_path):
    code, out = run(tmp_path, "verify", LINEAR, "o", "--seed", "9", "--timing")
    report = json.loads((out / "report.json").read_text())
    assert code == 0 and report["seed"] == 9
    assert report["wall_time_s"] > 0


def test_perturbed_potential_fails(tmp_path):
    doc = dict(LINEAR, checks={"random_events": 10, "potential_offset": [0, 0, 0.1, 0]})
    code, out = run(tmp_path, "verify", doc)
    assert code == cli.EXIT_VERIFY
    report = json.loads((out / "report.json").read_text())
    flagged = [c["name"] for c in report["checks"] if not c["passed"]]
    assert flagged == ["Dirac residual"]


@pytest.mark.parametrize(
    "doc",
    [
        {"bogus": 1},
        {"particle": {"kind": "tachyon"}},
        {"grid": {"t": [1, 0, 2]}},
        {"grid": {"t": [0, 1, 0]}},
        {"solutionparams": {"k": 0}},
        {"solutionparams": {"envelope": {"kR": -1}}},
        {"frame": {"phi": math.pi / 2}},
        {"generators": {"f1I": "s0", "linear": {"k1": 1, "k2": 0, "k3": 0}}},
        {"diff": {"mode": "central", "step": 1.0}},
        {"generators": {"f1I": "sqrt(s0)"}},
        "{not json",
    ],
)
def test_config_errors_exit_2(tmp_path, doc):
    code, _ = run(tmp_path, "verify", doc)
    assert code == cli.EXIT_CONFIG


def test_missing_config_exit_2(tmp_path):
    assert cli.main(["build", "--config", str(tmp_path / "nope.json")]) == cli.EXIT_CONFIG


@pytest.mark.parametrize(
    "doc",
    [
        {"generators": {"h": "sin(t"}},
        {"generators": {"h": "q*t"}},
        {"generators": {"f2R": "s1"}},
        {"particle": {"kind": "weyl+"}, "solutionparams": {"W": "cos(s0,s2)"}},
    ],
)
def test_parse_errors_exit_3(tmp_path, doc):
    code, _ = run(tmp_path, "verify", doc)
    assert code == cli.EXIT_PARSE


def test_time_only_fields(tmp_path):
    doc = {
        "generators": {"h": "t^2", "linear": {"k1": 0, "k2": 0, "k3": 0}},
        "grid": {"t": [-1, 1, 3], "x": [-1, 1, 2], "y": [-1, 1, 2], "z": [-1, 1, 2]},
    }
    code, out = run(tmp_path, "fields", doc)
    assert code == 0
    _, rows = read_csv(out / "fields.csv")
    direction = np.array([math.cos(PHI), 0, math.sin(PHI)])
    for r in rows:
        e, b = np.array(r[8:11]), np.array(r[11:14])
        assert np.all(b == 0)
        assert np.linalg.norm(np.cross(e, direction)) <= 1e-12
        np.testing.assert_allclose(e, -2 * r[0] * direction, atol=1e-12)


@pytest.mark.parametrize("kind", ["massless", "weyl+", "weyl-", "weyl−"])
def test_other_kinds(tmp_path, kind):
    doc = {
        "particle": {"kind": kind},
        "generators": {"h": "t*x", "f1I": "s0*s1 + sin(s1)", "f2R": "0.3*s0", "f2I": "cos(s0)"},
        "solutionparams": {"c_T": [1, 0.5], "c_R": 0.5},
        "grid": {"t": [0, 1, 2], "x": [0, 0, 1], "y": [0, 0, 1], "z": [0, 0, 1]},
        "checks": {"random_events": 8, "shifts": 2},
    }
    for sub in ("verify", "sweep", "build"):
        code, out = run(tmp_path, sub, doc)
        assert code == 0, sub
    header, rows = read_csv(out / "spinor.csv")
    assert len(header) == (13 if kind == "massless" else 9)


def test_custom_amplitudes(tmp_path):
    doc = {
        "particle": {"kind": "massless"},
        "generators": {"linear": {"k1": 0.3, "k2": -0.2, "k3": 0.7}},
        "solutionparams": {"WT": "exp(s2)*cos(s0)", "WR": "s3^2 + 1"},
        "checks": {"random_events": 10},
    }
    code, out = run(tmp_path, "verify", doc)
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert "closed_form_rel_err" not in report["checks"][2]["measured"]


def test_abs_expression_uses_central(tmp_path):
    doc = {"generators": {"h": "abs(x)*t", "linear": {"k1": 0.3, "k2": -0.2, "k3": 0.7}}, "checks": {"random_events": 10}}
    code, out = run(tmp_path, "verify", doc)
    report = json.loads((out / "report.json").read_text())
    assert code == 0
    assert report["checks"][0]["measured"]["mode"] == "central"
    assert report["checks"][0]["tolerance"]["max"] == pytest.approx(cli.CENTRAL_RESIDUAL_COEF * 1e-5**2)


def test_envelope_expression(tmp_path):
    doc = {"solutionparams": {"g": "exp(-s0^2)*cos(s0)"}, "generators": {"h": "t"}, "checks": {"random_events": 10}}
    code, out = run(tmp_path, "verify", doc)
    report = json.loads((out / "report.json").read_text())
    assert code == 0
    # decay is only asserted for the Gaussian envelope
    assert len(report["checks"]) == 3


def test_selftest_in_process(tmp_path):
    code = cli.main(["selftest", "--out", str(tmp_path), "--seed", "1"])
    report = json.loads((tmp_path / "report.json").read_text())
    assert code == 0
    assert [c["number"] for c in report["checks"]] == list(range(1, 14))
    assert all(c["passed"] for c in report["checks"])


def test_build_validates_before_constructing():
    with pytest.raises(ConfigError):
        cfgmod.build({"grid": {"x": [2, 1, 3]}})


def test_jsonable_handles_special_values():
    assert cli.jsonable({"a": 1 + 2j, "b": math.inf, "c": np.float64(0.5), "d": (np.int64(3),)}) == {
        "a": [1.0, 2.0],
        "b": "inf",
        "c": 0.5,
        "d": [3],
    }


def test_documented_example_config(tmp_path):
    code = cli.main(["verify", "--config", str(ROOT / "docs" / "example.json"), "--out", str(tmp_path)])
    assert code == 0
