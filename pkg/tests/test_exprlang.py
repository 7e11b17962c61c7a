import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclyap.exprlang import (
    EvalError,
    ExprError,
    ExprSyntaxError,
    UnknownIdentifierError,
    WrongVariableError,
    parse,
)


@pytest.mark.parametrize(
    "src, var, x, expected",
    [
        ("(2*t+1)/2", "t", 0.5, 1.0),
        ("ln(2+y)/gamma(6)", "y", 0.0, math.log(2) / 120),
        ("1/(y+20)", "y", 0.0, 0.05),
        ("2^3^2", "t", 0.0, 512.0),
        ("t", "t", 3.25, 3.25),
        ("gamma(6)", "t", 0.0, 120.0),
        ("-y^2", "y", 2.0, -4.0),
        ("2^-1", "t", 0.0, 0.5),
        ("-2^2", "t", 0.0, -4.0),
        ("(-2)^2", "t", 0.0, 4.0),
        ("1-2-3", "t", 0.0, -4.0),
        ("8/4/2", "t", 0.0, 1.0),
        ("2*3+4*5", "t", 0.0, 26.0),
        ("1.5e1 + .5", "t", 0.0, 15.5),
        ("sqrt(abs(-16)) + exp(0)", "t", 0.0, 5.0),
        ("--t", "t", 3.0, 3.0),
        ("+t", "t", 3.0, 3.0),
    ],
)
def test_golden_values(src, var, x, expected):
    assert parse(src, var)(x) == pytest.approx(expected, rel=1e-15)


def test_paper_nonlinearity():
    assert parse("ln(2+y)/gamma(6)", "y")(0.0) == pytest.approx(0.0057762, abs=1e-7)


@pytest.mark.parametrize(
    "src, offset, exc",
    [
        ("1+", 2, ExprSyntaxError),
        ("(1+2", 4, ExprSyntaxError),
        ("1+2)", 3, ExprSyntaxError),
        ("3 $ 4", 2, ExprSyntaxError),
        ("sqrt 2", 5, ExprSyntaxError),
        ("ln(1,2)", 4, ExprSyntaxError),
        ("2 ** 3", 3, ExprSyntaxError),
        ("foo(1)", 0, UnknownIdentifierError),
        ("t + x", 4, UnknownIdentifierError),
        ("t + y", 4, WrongVariableError),
        ("é + 1", 0, ExprSyntaxError),
        ("1 + é", 4, ExprSyntaxError),
        ("ln(é)", 3, ExprSyntaxError),
    ],
)
def test_error_positions(src, offset, exc):
    with pytest.raises(exc) as info:
        parse(src, "t")
    assert info.value.offset == offset


def test_byte_offsets_count_utf8():
    with pytest.raises(ExprSyntaxError) as info:
        parse("\u30001 + $", "t")
    # U+3000 is whitespace, three bytes in UTF-8
    assert info.value.offset == 7


def test_empty():
    with pytest.raises(ExprSyntaxError):
        parse("   ", "t")


@pytest.mark.parametrize(
    "src, x",
    [("ln(t)", -1.0), ("ln(t)", 0.0), ("sqrt(t)", -4.0), ("gamma(t)", 0.0), ("gamma(t)", -1.5),
     ("1/t", 0.0), ("t^0.5", -2.0), ("exp(t)", 1e4), ("10^t", 400.0), ("0^t", -1.0)],
)
def test_eval_errors(src, x):
    with pytest.raises(EvalError):
        parse(src, "t")(x)


def test_deep_nesting_is_a_syntax_error():
    with pytest.raises(ExprSyntaxError, match="nested"):
        parse("(" * 500 + "1" + ")" * 500, "t")
    with pytest.raises(ExprSyntaxError):
        parse("-" * 900 + "1", "t")


def test_determinism():
    e = parse("ln(2+y)/gamma(6) + y^1.5", "y")
    values = {e(0.37).hex() for _ in range(50)}
    assert len(values) == 1


exprs = st.recursive(
    st.one_of(
        st.floats(min_value=0, max_value=100, allow_nan=False).map(repr),
        st.just("t"),
    ),
    lambda sub: st.one_of(
        st.tuples(sub, st.sampled_from("+-*/^"), sub).map(lambda p: f"({p[0]}{p[1]}{p[2]})"),
        sub.map(lambda s: f"-{s}"),
        st.tuples(st.sampled_from(["ln", "exp", "sqrt", "abs", "gamma"]), sub).map(lambda p: f"{p[0]}({p[1]})"),
    ),
    max_leaves=12,
)


@settings(max_examples=200, deadline=None)
@given(exprs, st.floats(min_value=-5, max_value=5))
def test_print_round_trip(src, x):
    e = parse(src, "t")
    again = parse(str(e), "t")
    assert again.root == e.root
    try:
        expected = e(x)
    except EvalError:
        with pytest.raises(EvalError):
            again(x)
        return
    assert again(x) == expected


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_parser_totality_on_arbitrary_text(src):
    try:
        e = parse(src, "y")
    except ExprError:
        return
    try:
        e(0.5)
    except ExprError:
        pass
