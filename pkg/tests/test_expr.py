"""Expression parsing, evaluation, and symbolic differentiation."""
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from canal4.errors import DomainError, ExprSyntaxError, UnknownFunctionError
from canal4.expr import (Const, differentiate, evaluate, parse, variables_of)


def test_parse_linear():
    e = parse("2*s")
    assert evaluate(e, s=3.0) == 6.0


def test_parse_example_component():
    e = parse("2*sinh(s)")
    assert evaluate(e, s=1.0) == pytest.approx(2 * math.sinh(1.0), rel=1e-15)


def test_double_star_is_syntax_error():
    with pytest.raises(ExprSyntaxError) as err:
        parse("2**s")
    assert err.value.offset == 2


def test_unknown_function():
    with pytest.raises(UnknownFunctionError):
        parse("sech(s)")


def test_unknown_variable_offset():
    with pytest.raises(ExprSyntaxError):
        parse("2*t")          # only s allowed by default


def test_precedence():
    assert evaluate(parse("2+3*4"), s=0.0) == 14.0
    assert evaluate(parse("2*s^2"), s=3.0) == 18.0
    assert evaluate(parse("-s^2"), s=2.0) == -4.0       # ^ binds before unary -
    assert evaluate(parse("2-3-4"), s=0.0) == -5.0      # left associative
    assert evaluate(parse("16/4/2"), s=0.0) == 2.0
    assert evaluate(parse("s^-2"), s=2.0) == 0.25


def test_nonconstant_exponent_rejected():
    with pytest.raises(ExprSyntaxError):
        parse("2^s")


def test_eval_domain_errors():
    with pytest.raises(DomainError):
        evaluate(parse("sqrt(s)"), s=-1.0)
    with pytest.raises(DomainError):
        evaluate(parse("log(s)"), s=0.0)
    with pytest.raises(DomainError):
        evaluate(parse("1/s"), s=0.0)
    with pytest.raises(DomainError):
        evaluate(parse("exp(s)"), s=1e6)   # overflow reported, not inf


def test_eval_cosh():
    assert evaluate(parse("2*cosh(s)"), s=0.0) == 2.0


def test_differentiate_basics():
    assert differentiate(parse("2*s")) == Const(2.0)
    d = differentiate(parse("sinh(s)"))
    assert evaluate(d, s=0.7) == pytest.approx(math.cosh(0.7), rel=1e-15)
    # second derivative of a linear radius vanishes identically
    assert differentiate(differentiate(parse("2*s"))) == Const(0.0)


def test_differentiate_quotient_and_power():
    e = parse("(s^2+1)/(s+2)")
    d = differentiate(e)
    h = 1e-6
    fd = (evaluate(e, s=1.3 + h) - evaluate(e, s=1.3 - h)) / (2 * h)
    assert evaluate(d, s=1.3) == pytest.approx(fd, abs=1e-8)


def test_multivariable_internal_parse():
    e = parse("w*cos(t) + s", ("s", "t", "w"))
    assert variables_of(e) == frozenset(("s", "t", "w"))
    assert evaluate(e, s=1.0, t=0.0, w=2.0) == 3.0


# ---------------------------------------------------------------------------
# random expression battery: symbolic derivative vs central finite difference

_FUNCS = ("sin", "cos", "sinh", "cosh", "tanh", "exp", "sqrt", "log")


def _random_expr(rng, depth):
    if depth == 0:
        return random.Random(rng.random()).choice(
            [f"{rng.uniform(0.3, 2.5):.4f}", "s", "s"])
    kind = rng.randrange(6)
    if kind == 0:
        return f"({_random_expr(rng, depth - 1)} + {_random_expr(rng, depth - 1)})"
    if kind == 1:
        return f"({_random_expr(rng, depth - 1)} - {_random_expr(rng, depth - 1)})"
    if kind == 2:
        return f"({_random_expr(rng, depth - 1)} * {_random_expr(rng, depth - 1)})"
    if kind == 3:
        # keep the denominator positive
        return f"({_random_expr(rng, depth - 1)} / ({_random_expr(rng, depth - 1)}^2 + 1))"
    if kind == 4:
        fn = _FUNCS[rng.randrange(len(_FUNCS))]
        arg = _random_expr(rng, depth - 1)
        if fn in ("sqrt", "log"):
            arg = f"(({arg})^2 + 0.5)"
        if fn == "exp":
            arg = f"(({arg}) / 4)"
        return f"{fn}({arg})"
    return f"({_random_expr(rng, depth - 1)})^{rng.choice([2, 3, 0.5, -1])}"


def test_derivative_matches_finite_difference_battery():
    rng = random.Random(987)
    checked = 0
    while checked < 100:
        text = _random_expr(rng, rng.randint(1, 3))
        e = parse(text)
        d = differentiate(e)
        s = rng.uniform(0.3, 1.5)
        h = 1e-5
        try:
            vm, vp = evaluate(e, s=s - h), evaluate(e, s=s + h)
            val = evaluate(e, s=s)
            dv = evaluate(d, s=s)
        except DomainError:
            continue
        if max(abs(vm), abs(vp), abs(val), abs(dv)) > 1e5:
            continue
        fd = (vp - vm) / (2 * h)
        assert abs(dv - fd) <= 1e-6 * (1.0 + abs(dv)), text
        checked += 1


def test_print_parse_round_trip():
    rng = random.Random(2718)
    for _ in range(60):
        text = _random_expr(rng, rng.randint(1, 3))
        e = parse(text)
        e2 = parse(str(e))
        for s in (0.4, 0.9, 1.4):
            try:
                a = evaluate(e, s=s)
            except DomainError:
                continue
            assert evaluate(e2, s=s) == pytest.approx(a, rel=1e-12, abs=1e-12)


@settings(max_examples=60)
@given(st.floats(min_value=-2, max_value=2, allow_nan=False),
       st.floats(min_value=0.2, max_value=2, allow_nan=False))
def test_polynomial_identity(a, b):
    e = parse(f"({a!r}) + ({b!r})*s^2")
    s = 0.7
    assert evaluate(e, s=s) == pytest.approx(a + b * s * s, rel=1e-12, abs=1e-12)
