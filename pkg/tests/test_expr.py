import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superbrackets.expr import BinOp, Call, Neg, Num, ParseError, Pow, Var, parse, parse_list, to_source

from exprgen import random_expr


def strip(node):
    """AST without source positions, for structural comparison."""
    if isinstance(node, Num):
        return ("num", node.value)
    if isinstance(node, Var):
        return ("var", node.name)
    if isinstance(node, Neg):
        return ("neg", strip(node.arg))
    if isinstance(node, BinOp):
        return (node.op, strip(node.left), strip(node.right))
    if isinstance(node, Pow):
        return ("^", strip(node.base), node.exponent)
    return (node.kind, node.index, tuple(map(strip, node.head)), tuple(map(strip, node.tail)))


def test_precedence_and_associativity():
    assert strip(parse("a - b - c")) == ("-", ("-", ("var", "a"), ("var", "b")), ("var", "c"))
    assert strip(parse("a + b*c^2")) == ("+", ("var", "a"), ("*", ("var", "b"), ("^", ("var", "c"), 2)))
    assert strip(parse("-a^2")) == ("neg", ("^", ("var", "a"), 2))


def test_operator_calls():
    assert strip(parse("d/dx1(x1)")) == ("partial", "x1", (("var", "x1"),), ())
    hb = parse("hb[2](P; a, b)")
    assert isinstance(hb, Call) and hb.kind == "hb" and hb.index == 2 and len(hb.tail) == 2
    sh = parse("shift(H; r, t)")
    assert sh.kind == "shift" and sh.index == "t"
    assert [strip(n) for n in parse_list("x1, d(x2)")] == [("var", "x1"), ("d", None, (("var", "x2"),), ())]


def test_comments_are_ignored():
    assert strip(parse("x # trailing\n")) == ("var", "x")


@pytest.mark.parametrize(
    "text, col, message",
    [
        ("x1 + * x2", 6, "expected an expression"),
        ("x^y", 3, "exponent must be a non-negative integer"),
        ("(x", 3, "expected ')'"),
        ("x @ y", 3, "unexpected character"),
        ("pb(x)", 3, "pb takes 2 arguments"),
        ("hb[1](P; )", 6, "takes 1 arguments"),
    ],
)
def test_errors_carry_position(text, col, message):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.line == 1 and info.value.col == col
    assert message in info.value.message


def test_literals_print_as_they_parse():
    assert to_source(Num(Fraction(-3, 4))) == "-(3/4)"
    assert to_source(BinOp("*", Num(Fraction(1, 2)), Var("x"))) == "1/2*x"
    assert to_source(Pow(Pow(Var("r"), 2), 5)) == "(r^2)^5"


def test_round_trip_thousand_generated_expressions():
    rng = random.Random(2024)
    for _ in range(1000):
        src = to_source(random_expr(rng))
        assert to_source(parse(src)) == src


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 5))
def test_round_trip_property(seed, depth):
    src = to_source(random_expr(random.Random(seed), depth))
    again = parse(src)
    assert to_source(again) == src
    assert strip(parse(to_source(again))) == strip(again)
