import math

import numpy as np
import pytest

from degenspinor.algebra import gamma
from degenspinor.diff import DiffConfig, differentiate, jet
from degenspinor.empot import linear_closed_form, potential_components, potentials
from degenspinor.errors import BelowNoiseFloor, ComplexKUnsupported, NonAnalyticNode
from degenspinor.exprdsl import dual as dm
from degenspinor.frame import SCoords, to_s
from degenspinor.generators import GaussianEnvelope, make_generators
from degenspinor.solution import (
    NEGATIVE,
    POSITIVE,
    SpinorField,
    base_spinors,
    massive_spinor,
    massless_preset,
    weyl_preset,
)
from degenspinor.verify import (
    convergence_order,
    decay_probe,
    degeneracy_conditions,
    dirac_residual,
    massive_spin_closed_form,
    massless_spin_closed_form,
    pde35_relative,
    pde35_residual,
    spin_closed_form,
    spin_expectation,
    weyl_residual,
)

PHI = math.pi / 6
RNG_EVENTS = np.random.default_rng(2).uniform(-2, 2, size=(100, 4))


def test_diff_config_validation():
    with pytest.raises(ValueError):
        DiffConfig("forward")
    with pytest.raises(ValueError):
        DiffConfig("central", 1.0)


def test_differentiate_examples():
    const = lambda t, x, y, z: [2.0 + 0 * t, 1j]  # noqa: E731
    assert np.all(differentiate(const, (0, 0, 0, 0), "t") == 0)
    assert np.abs(differentiate(const, (0, 0, 0, 0), "x", DiffConfig("central"))).max() <= 1e-12
    wave = lambda t, x, y, z: [dm.exp(-1j * t)]  # noqa: E731
    assert differentiate(wave, (0, 0, 0, 0), "t")[0] == pytest.approx(-1j)
    assert differentiate(wave, (0, 0, 0, 0), 0, DiffConfig("central", 1e-5))[0] == pytest.approx(-1j, abs=1e-9)
    with pytest.raises(ValueError):
        differentiate(wave, (0, 0, 0, 0), "w")


def test_dual_needs_analytic_path():
    gen = make_generators(h="abs(x)")
    field = lambda t, x, y, z: potential_components(gen, t, x, y, z)  # noqa: E731
    with pytest.raises(NonAnalyticNode):
        differentiate(field, (0, 1.0, 0, 0), "x")


def test_constant_spinor_zero_residual():
    u, _ = base_spinors(PHI)
    psi = SpinorField(lambda t, x, y, z: list(u), 4, "const")
    rep = dirac_residual(psi, lambda e: (0, 0, 0, 0), 0.0, (1, 2, 3, 4))
    assert rep.rel_norm == 0 and rep.abs_norm == 0


def test_default_massive_family_dual(gen):
    psi = massive_spinor(gen)
    pot = lambda e: potentials(gen, e)  # noqa: E731
    assert max(dirac_residual(psi, pot, 1.0, e).rel_norm for e in RNG_EVENTS) <= 1e-10


def test_perturbed_a2_residual_is_exact(gen):
    psi = massive_spinor(gen)

    def pot(e):
        a = potentials(gen, e)
        return (a[0], a[1], a[2] + 0.1, a[3])

    for e in RNG_EVENTS[:10]:
        rep = dirac_residual(psi, pot, 1.0, e)
        want = 0.1 * np.linalg.norm(gamma(2) @ psi(e))
        assert rep.abs_norm == pytest.approx(want, rel=1e-9)
        assert rep.rel_norm > 1e-3


def test_central_order(gen):
    psi = massive_spinor(gen)
    pot = lambda e: potentials(gen, e)  # noqa: E731
    e = RNG_EVENTS[0]
    r1 = dirac_residual(psi, pot, 1.0, e, DiffConfig("central", 1e-3)).rel_norm
    r2 = dirac_residual(psi, pot, 1.0, e, DiffConfig("central", 5e-4)).rel_norm
    assert 1.8 <= convergence_order(r1, r2) <= 2.2
    assert dirac_residual(psi, pot, 1.0, e, DiffConfig("central", 1e-4)).rel_norm <= 1e-6


def test_weyl_wrong_helicity_plane_wave():
    gen = make_generators(envelope=GaussianEnvelope(1, 1, 1.0))
    zero = lambda e: (0, 0, 0, 0)  # noqa: E731
    for hel, other in ((POSITIVE, NEGATIVE), (NEGATIVE, POSITIVE)):
        psi = weyl_preset(gen, hel)
        assert weyl_residual(psi, zero, other, (0.3, 0.1, -0.2, 0.5)).rel_norm > 0.1
    with pytest.raises(ValueError):
        weyl_residual(psi, zero, "up", (0, 0, 0, 0))


def test_weyl_under_linear_potentials(gen, defaults):
    d = defaults
    pot = lambda e: linear_closed_form(d.k1, d.k2, d.k3, gen.h, gen.frame, e)  # noqa: E731
    for hel in (POSITIVE, NEGATIVE):
        psi = weyl_preset(gen, hel)
        assert max(weyl_residual(psi, pot, hel, e).rel_norm for e in RNG_EVENTS) <= 1e-10


def test_degeneracy_condition_examples():
    u, v = base_spinors(PHI)
    c_gamma, c_g2 = degeneracy_conditions(u + v)
    assert abs(c_gamma) <= 1e-12
    assert c_g2 == pytest.approx(6.9282032j, abs=1e-7)
    c_gamma, _ = degeneracy_conditions(np.array([1, 0, 0, 0]))
    assert c_gamma == 1


def test_spin_examples(gen):
    assert spin_expectation(np.array([1, 0, 0, 0])) == (0, 0, 0.5)
    v = massive_spinor(gen)((0.2, 0.4, -0.1, 0.3))
    n2 = np.vdot(v, v).real
    s = spin_expectation(v)
    assert s.Sx / n2 == pytest.approx(0.21650635, abs=1e-8)
    assert s.Sz / n2 == pytest.approx(0.125, abs=1e-12)
    assert abs(s.Sy) <= 1e-12 * n2
    assert s.Sx / s.Sz == pytest.approx(1 / math.tan(PHI))


def test_spin_vanishes_at_special_k(defaults):
    g = defaults.family(k=math.cos(PHI))
    psi = massive_spinor(g)
    for e in RNG_EVENTS[:20]:
        assert max(map(abs, spin_expectation(psi(e)))) <= 1e-12


def test_massless_spin_closed_forms():
    s = massless_spin_closed_form(1, 0, PHI)
    assert s.Sx == pytest.approx(0.8660254, abs=1e-7)
    assert s.Sz == pytest.approx(0.5)
    assert s.Sy == 0
    s = massless_spin_closed_form(0.7, 0.7, PHI)
    assert s.Sx == pytest.approx(-2 * math.cos(PHI) * 2 * 0.49 * math.sin(PHI))


def test_massless_spin_constant(gen):
    psi = massless_preset(gen, 1 + 0.5j, -0.3)
    want = spin_closed_form(gen, 1 + 0.5j, -0.3)
    for e in RNG_EVENTS[:30]:
        got = spin_expectation(psi(e))
        assert max(abs(a - b) for a, b in zip(got, want)) <= 1e-12


def test_complex_k_refused():
    with pytest.raises(ComplexKUnsupported):
        massive_spin_closed_form(1.0, 0.5 + 0.1j, PHI)


def test_pde35(gen):
    for e in RNG_EVENTS[:50]:
        s = to_s(gen.frame, e)
        assert abs(pde35_residual(gen, s)) <= 1e-12
        assert pde35_relative(gen, s, s2_scale=1.1) > 1e-3
    massless = make_generators(mass=0.0)
    s = SCoords(0.3, 0.1, 0.2 + 0.1j, -0.2 + 0.1j)
    assert pde35_residual(massless, s) == 0


@pytest.mark.parametrize("axis", ["+t", "-t", "+x", "-x", "+z", "-z"])
def test_decay_along_axes(gen, axis):
    r = decay_probe(massive_spinor(gen), axis, (5, 10, 15, 20))
    assert r.strictly_decreasing
    assert r.ratio < 1e-6


def test_massless_does_not_decay(gen):
    r = decay_probe(massless_preset(gen, 1, 0.5), "+x", (5, 10, 15, 20))
    assert max(abs(m - r.origin) for m in r.magnitudes) <= 1e-12 * r.origin


def test_decay_probe_radii_must_increase(gen):
    with pytest.raises(ValueError):
        decay_probe(massive_spinor(gen), "+x", (5, 3))


def test_convergence_order():
    assert convergence_order(4e-6, 1e-6) == pytest.approx(2.0)
    with pytest.raises(BelowNoiseFloor):
        convergence_order(1e-15, 1e-16)


def test_jet_shapes(gen):
    value, grads = jet(massive_spinor(gen).raw, (0.1, 0.2, 0.3, 0.4))
    assert value.shape == (4,) and grads.shape == (4, 4)
