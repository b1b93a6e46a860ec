import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degenspinor import corpus
from degenspinor.errors import (
    ArityError,
    ExprParseError,
    ExprSyntaxError,
    NonAnalyticNode,
    UnboundVariable,
    UnknownIdentifier,
)
from degenspinor.exprdsl import Dual, evaluate, evaluate_dual, integrate, parse
from degenspinor.exprdsl import dual as dm
from degenspinor.exprdsl.ast import BinOp, Const, Var
from degenspinor.exprdsl.evaluate import evaluate_generic
from degenspinor.exprdsl.quadrature import gauss_legendre

V = corpus.VARIABLES
C = corpus.CONSTANTS


def ev(text, **b):
    return evaluate(parse(text, tuple(b), C), b)


def test_constant_resolution():
    e = parse("k1*s0", ("s0",), {"k1": 0.3})
    assert e.root == BinOp("*", Const("k1", 0.3), Var("s0"))


def test_reference_values():
    assert evaluate(parse("s0^2*exp(-s0)", ("s0",)), {"s0": 1}) == pytest.approx(0.36787944, abs=1e-8)
    assert ev("2+3*4") == 14
    assert evaluate(parse("x*x", ("x",)), {"x": 1j}) == -1
    assert ev("tanh(0.5)").real == pytest.approx(0.46211716, abs=1e-8)


@pytest.mark.parametrize(
    "text, value",
    [("2+3*4^2", 50), ("-2^2", -4), ("(-2)^2", 4), ("2^3^2", 512), ("2^-1", 0.5), ("x-y-z", -4), ("8/2/2", 2)],
)
def test_precedence(text, value):
    assert evaluate(parse(text, ("x", "y", "z")), {"x": 1, "y": 2, "z": 3}) == value


def test_syntax_error_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse("sin(", ("s0",))
    assert info.value.offset == 4


@pytest.mark.parametrize("text, cls, offset", corpus.MALFORMED)
def test_malformed_corpus(text, cls, offset):
    with pytest.raises(ExprParseError) as info:
        parse(text, V, C)
    assert type(info.value).__name__ == cls
    assert info.value.offset == offset


def test_error_classes():
    with pytest.raises(UnknownIdentifier) as info:
        parse("x + q", ("x",))
    assert info.value.name == "q"
    with pytest.raises(ArityError):
        parse("sin(1,2)")


def test_variables_beat_constants():
    e = parse("m", ("m",), {"m": 5.0})
    assert e.root == Var("m")


@pytest.mark.parametrize("text", corpus.EXPRESSIONS)
def test_round_trip(text):
    e = parse(text, V, C)
    assert parse(e.unparse(), V, C) == e


def test_corpus_size():
    assert len(corpus.EXPRESSIONS) == 50
    assert len(set(corpus.EXPRESSIONS)) == 50
    assert len(corpus.MALFORMED) >= 10


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        evaluate(parse("x+1", ("x",)), {})


def test_native_arithmetic_errors():
    with pytest.raises(ZeroDivisionError):
        ev("1/0")


def test_dual_examples():
    d = evaluate_dual(parse("s0^2", ("s0",)), {"s0": Dual(3.0, 1.0)})
    assert (d.value, d.deriv) == (9, 6)
    d = evaluate_dual(parse("sin(s0)*exp(s0)", ("s0",)), {"s0": Dual(0.0, 1.0)})
    assert (d.value, d.deriv) == (0, 1)
    with pytest.raises(NonAnalyticNode):
        evaluate_dual(parse("abs(s0)", ("s0",)), {"s0": Dual(1.0, 1.0)})


def _smooth_at(text, point):
    e = parse(text, V, C)
    b = {v: point for v in e.free_variables()}
    try:
        return e, b, evaluate(e, b)
    except (ZeroDivisionError, ValueError, OverflowError):
        return None


@pytest.mark.parametrize("text", [t for t in corpus.EXPRESSIONS if "abs" not in t])
def test_dual_matches_central_difference(text):
    got = _smooth_at(text, 0.7)
    assert got is not None
    e, b, _ = got
    for var in e.free_variables():
        h = 1e-5
        plus, minus = dict(b), dict(b)
        plus[var] += h
        minus[var] -= h
        fd = (evaluate(e, plus) - evaluate(e, minus)) / (2 * h)
        db = dict(b)
        db[var] = Dual(b[var], 1.0)
        exact = dm.deriv_of(evaluate_dual(e, db))
        assert abs(exact - fd) <= 1e-7 * max(1.0, abs(exact))


@pytest.mark.parametrize(
    "text, deriv",
    [("u*u*u - 3*u + 1", lambda u: 3 * u * u - 3), ("x^2*y", None), ("t^2", lambda t: 2 * t)],
)
def test_dual_exact_for_polynomials(text, deriv):
    e = parse(text, V, C)
    var = sorted(e.free_variables())[0]
    b = {v: 1.3 for v in e.free_variables()}
    b[var] = Dual(1.3, 1.0)
    got = dm.deriv_of(evaluate_dual(e, b))
    want = deriv(1.3) if deriv else 2 * 1.3 * 1.3
    assert abs(got - want) <= 1e-13


def test_nested_duals_mixed_partial():
    e = parse("x^2*y^3", ("x", "y"))
    out = evaluate_generic(e, {"x": Dual(1.5, 1.0, tag=1), "y": Dual(2.0, 1.0, tag=2)})
    # d2/dxdy = 6 x y^2
    assert dm.deriv_of(dm.deriv_of(out, 2), 1) == pytest.approx(6 * 1.5 * 4)


def test_integrate_examples():
    f = parse("s0*u", ("s0", "u"))
    assert integrate(f, "u", 0, 1, fixed={"s0": 2}) == pytest.approx(1.0, abs=1e-12)
    assert integrate(parse("sin(u)", ("u",)), "u", 0, 2) == pytest.approx(1 - math.cos(2), abs=1e-12)


def test_integral_derivative_in_upper_limit():
    val = integrate(parse("1", ("u",)), "u", 0.0, Dual(0.8, 1.0))
    assert dm.deriv_of(val) == pytest.approx(1.0, abs=1e-12)


def test_gauss_legendre_oscillatory():
    val = gauss_legendre(lambda u: math.cos(40 * u), 0.0, 3.0)
    assert val == pytest.approx(math.sin(120) / 40, abs=1e-11)


@settings(max_examples=50)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_integral_additivity(a, b, c):
    f = parse("exp(-u^2)*cos(3*u)", ("u",))
    whole = integrate(f, "u", a, c)
    parts = integrate(f, "u", a, b) + integrate(f, "u", b, c)
    assert abs(whole - parts) <= 1e-11


def test_has_abs_and_free_variables():
    e = parse("abs(x) + y", ("x", "y", "z"))
    assert e.has_abs()
    assert e.free_variables() == {"x", "y"}
