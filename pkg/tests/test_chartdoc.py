from pathlib import Path

import pytest

from superbrackets import ChartMismatchError, format_poly
from superbrackets.chartdoc import eval_text, load_chart, parse_field
from superbrackets.expr import ParseError

GOLDEN = Path(__file__).parent / "golden"


def workspace(name):
    return load_chart((GOLDEN / name).read_text()).workspace


def show(text, ws):
    v = eval_text(text, ws)
    return format_poly(v), v.space.kind


def test_results_land_on_the_smallest_chart():
    ws = workspace("super21.chart")
    assert show("st_x1*st_x2", ws) == ("st_x1*st_x2", "anticotangent")
    assert show("d(x1*y1)", ws) == ("x1*dy1 - y1*dx1", "antitangent")
    assert show("d/dx1(x1^3*y1)", ws) == ("3*x1^2*y1", "base")
    assert show("p_x1 + pi_x1", ws)[1] == "cotangent"


def test_brackets_in_expressions():
    ws = workspace("super21.chart")
    assert show("pb(p_x1, x1^2)", ws)[0] == "2*x1"
    assert show("sb(st_x1, x1*x2)", ws)[0] == "-x2"
    assert show("alpha(st_x1*st_x2)", ws)[0] == "p_x1*pi_x2 - p_x2*pi_x1"
    assert show("koszul(st_x1*st_x2; x1, d(x2))", ws)[0] == "1"
    assert show("koszul(st_x1*st_x2; d(x1), d(x2))", ws)[0] == "0"


def test_let_bindings_and_parameters():
    ws = workspace("shift.chart")
    assert show("H", ws)[0] == "th*p_x"
    assert show("shift(H; x^2, t)", ws)[0] == "th*p_x + 2*x*th*t"


def test_vector_field_syntax():
    ws = workspace("so3.chart")
    Q = parse_field("xi1 = -xi2*xi3; xi2 = xi1*xi3; xi3 = -xi1*xi2", ws)
    assert Q.parity == 1
    assert Q.square().is_zero()


def test_bundle_chart_family_contains_dual_side():
    ws = workspace("bundle.chart")
    assert show("eta1*pi_eta2", ws)[1] == "cotangent"


@pytest.mark.parametrize(
    "doc, where, message",
    [
        ("var x even\nvar x odd", (2, 1), "duplicate name"),
        ("var x maybe", (1, 1), "var <name> even|odd"),
        ("var x even\napply bundle rank=2\nvar y even", (3, 1), "after apply"),
        ("var x even\nlet H = x +", (2, 12), "unexpected end of input"),
        ("var d even", (1, 5), "reserved"),
        ("var x even\nfrob", (2, 1), "unknown directive"),
        ("var x even\napply bundle rank=2 parities=0", (2, 1), "rank does not match"),
    ],
)
def test_chart_errors_point_at_the_line(doc, where, message):
    with pytest.raises(ParseError) as info:
        load_chart(doc)
    assert (info.value.line, info.value.col) == where
    assert message in info.value.message


def test_expression_errors():
    ws = workspace("super21.chart")
    with pytest.raises(ParseError, match="unknown identifier"):
        eval_text("q9", ws)
    with pytest.raises(ParseError, match="division only by a nonzero constant"):
        eval_text("x1/y1", ws)
    with pytest.raises(ChartMismatchError):
        eval_text("d(st_x1)", ws)
