import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superbrackets import (
    ANY,
    MIXED,
    ChartMismatchError,
    ParityError,
    Poly,
    Space,
    Variable,
    embed,
    format_poly,
    parity_of,
    partial,
    restrict_to,
    substitute,
)
from superbrackets.geometry import base_space
from superbrackets.generators import random_poly

M = base_space([("x", 0), ("w", 0), ("y", 1), ("z", 1)])
x, w, y, z = M.vars("x", "w", "y", "z")


def polys(parity=None):
    return st.integers(0, 2**32).map(
        lambda s: random_poly(M, random.Random(s), max_degree=4, parity=parity, rational=True)
    )


def test_odd_variables_anticommute():
    assert y * z == -(z * y)
    assert y * y == M.zero
    assert x * y == y * x


def test_product_normalizes_order_with_sign():
    assert M.product(["z", "y"]) == -(y * z)
    assert M.product(["z", "x", "z"]) == M.zero


def test_left_derivative_signs():
    assert partial(y * z, "z") == -y
    assert partial(y * z, "y") == z
    assert partial(x**3 * y, "x") == 3 * x**2 * y
    assert partial(y * z, "x") == M.zero


def test_parity_reporting():
    assert parity_of(x * y * z) == 0
    assert parity_of(y + x * z) == 1
    assert parity_of(x + y) == MIXED
    assert parity_of(M.zero) == ANY


def test_formatting_is_sorted_and_exact():
    assert format_poly(3 * x**2 - y * z / 2 + 1) == "1 + 3*x^2 - 1/2*y*z"
    assert format_poly(M.zero) == "0"
    assert format_poly(Fraction(-2, 3) * w) == "-2/3*w"


def test_binomial_with_odd_term_truncates():
    assert (x + y) ** 2 == x**2 + 2 * x * y
    assert (y + z) ** 2 == M.zero


def test_substitution_respects_nilpotency():
    assert substitute(y * z, {"y": x * z}, M) == M.zero
    assert substitute(x * w, {"x": w + 1}, M) == w**2 + w


def test_embed_and_restrict_round_trip():
    small = base_space([("x", 0), ("y", 1)])
    f = small.var("x") * small.var("y") + 2
    g = embed(f, M)
    assert g == x * y + 2
    assert restrict_to(g, small) == f


def test_mixing_charts_is_rejected():
    other = base_space([("x", 0)])
    with pytest.raises(ChartMismatchError):
        x + other.var("x")


def test_division_only_by_scalars():
    assert (4 * x) / 2 == 2 * x
    with pytest.raises(TypeError):
        x / y


def test_space_rejects_bad_pairs():
    with pytest.raises(ParityError):
        Space([Variable("a", 0), Variable("b", 1)], [(0, 1, 0)])
    with pytest.raises(ValueError):
        Space([Variable("a", 0), Variable("a", 1)])


@settings(max_examples=150, deadline=None)
@given(polys(), polys(), polys())
def test_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 1), st.integers(0, 1), st.data())
def test_graded_commutativity(pa, pb, data):
    a = data.draw(polys(pa))
    b = data.draw(polys(pb))
    sign = -1 if pa and pb else 1
    assert a * b == (b * a).scale(sign)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 1), st.data(), st.sampled_from(["x", "w", "y", "z"]))
def test_derivative_is_graded_derivation(pa, data, v):
    a = data.draw(polys(pa))
    b = data.draw(polys())
    sign = -1 if pa and M.variable(v).parity else 1
    assert partial(a * b, v) == partial(a, v) * b + (a * partial(b, v)).scale(sign)


def test_poly_equality_ignores_zero_coefficients():
    assert Poly(M, {(1, 0, 0, 0): 0}) == M.zero
    assert not M.zero
