from __future__ import annotations

import pytest

from loophom.expr import ParseError, parse_expression, parse_homogeneous
from loophom.qsk import context, pi0_spec, qs0_context


@pytest.mark.parametrize("text", [
    "Q[2,1][nu] * Q[1][nu] + [2 nu]",
    "Q[1][nu]^2",
    "[0]",
    "[3 nu]",
])
def test_render_parse_round_trip(text):
    ctx = context(pi0_spec(3))
    e = parse_expression(text, ctx)
    assert parse_expression(e.render(), ctx) == e


def test_whitespace_is_insignificant():
    ctx = context(pi0_spec(3))
    assert parse_expression("Q[ 2 , 1 ][ nu ]*Q[1][nu]", ctx) == parse_expression("Q[2,1][nu] * Q[1][nu]", ctx)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_expression("Q[1] + ", qs0_context())
    assert (info.value.line, info.value.column) == (1, 6)


def test_unclosed_bracket():
    with pytest.raises(ParseError):
        parse_expression("Q[1", qs0_context())


def test_unknown_generator():
    with pytest.raises(ParseError, match="unknown generator"):
        parse_expression("y(3)", qs0_context())


def test_inhomogeneous_input_splits():
    parts = parse_homogeneous("Q[1][1] + Q[2][1] + Q[3][1]", qs0_context())
    assert [p.dim for p in parts] == [1, 2, 3]


def test_x_classes_parse_in_qs0():
    e = parse_expression("x(1) * x(2)", qs0_context())
    assert e.dim == 3
