import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superbrackets import (
    ParityError,
    ProvenanceError,
    VectorField,
    anticotangent,
    antitangent,
    base_space,
    canonical_bracket,
    commutator,
    cotangent,
    de_rham,
    embed,
    field_from_linear_hamiltonian,
    hamiltonian_field,
    interior,
    linear_hamiltonian,
    poisson,
    schouten,
    schouten_hamiltonian,
    schouten_sym,
    to_symmetric,
)
from superbrackets.algebra import homogeneous_parity
from superbrackets.generators import random_field, random_poly

M = base_space([("x", 0), ("y", 1)])
T = cotangent(M)
S = anticotangent(M)
A = antitangent(M)


def test_canonical_pairs():
    x, y, px, py = T.vars("x", "y", "p_x", "p_y")
    assert poisson(px, x) == T.one and poisson(x, px) == -T.one
    assert poisson(py, y) == T.one and poisson(y, py) == T.one
    assert poisson(x, y) == T.zero


def test_schouten_on_generators_both_conventions():
    x, y, sx, sy = S.vars("x", "y", "st_x", "st_y")
    assert schouten_sym(sx, x) == S.one and schouten_sym(x, sx) == S.one
    assert schouten_sym(sy, y) == -S.one and schouten_sym(y, sy) == -S.one
    assert schouten(sx, x) == -S.one and schouten(x, sx) == S.one


def test_symmetric_conversion_matches():
    rng = random.Random(3)
    conv = to_symmetric(schouten)
    for _ in range(30):
        a = random_poly(S, rng, parity=rng.randint(0, 1))
        b = random_poly(S, rng, parity=rng.randint(0, 1))
        assert conv(a, b) == schouten_sym(a, b)


def test_schouten_is_derived_from_its_hamiltonian():
    D = schouten_hamiltonian(S)
    assert str(D) == "p_x*pi_st_x - p_y*pi_st_y"
    rng = random.Random(4)
    TS = D.space
    for _ in range(20):
        P = random_poly(S, rng, parity=rng.randint(0, 1))
        Q = random_poly(S, rng, parity=rng.randint(0, 1))
        derived = poisson(poisson(D, embed(P, TS)), embed(Q, TS))
        assert derived == embed(schouten_sym(P, Q), TS)


def test_canonical_bracket_dispatch():
    assert canonical_bracket(*T.vars("p_x", "x")) == poisson(*T.vars("p_x", "x"))
    assert canonical_bracket(*S.vars("st_x", "x")) == schouten_sym(*S.vars("st_x", "x"))
    with pytest.raises(ProvenanceError):
        canonical_bracket(M.var("x"), M.var("y"))


def test_vector_field_action_and_commutator():
    x = M.var("x")
    X = VectorField(M, {"x": x}, 0)
    Y = VectorField(M, {"x": M.one}, 0)
    assert X(x**3) == 3 * x**3
    assert commutator(Y, X) == Y
    with pytest.raises(ParityError):
        X.square()


def test_hamiltonian_field_agrees_with_bracket():
    rng = random.Random(5)
    for _ in range(20):
        H = random_poly(T, rng, parity=rng.randint(0, 1))
        f = random_poly(T, rng)
        assert hamiltonian_field(H)(f) == poisson(H, f)


def test_linear_hamiltonian_round_trip_and_lift():
    rng = random.Random(6)
    for _ in range(20):
        X = random_field(M, rng, rng.randint(0, 1))
        H = linear_hamiltonian(X)
        assert field_from_linear_hamiltonian(H) == X
        f = random_poly(M, rng)
        assert poisson(H, embed(f, T)) == embed(X(f), T)


def test_de_rham_and_interior():
    d = de_rham(A)
    x, y = A.vars("x", "y")
    assert d(x * y) == A.var("dx") * y + x * A.var("dy")
    assert d.square().is_zero()
    X = VectorField(M, {"x": M.var("x")}, 0)
    assert interior(X)(A.var("dx")) == x
    with pytest.raises(ProvenanceError):
        de_rham(M)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_cartan_identities(seed):
    rng = random.Random(seed)
    X = random_field(M, rng, rng.randint(0, 1))
    Y = random_field(M, rng, rng.randint(0, 1))
    d, iX, iY = de_rham(A), interior(X), interior(Y)
    sign = -1 if X.parity else 1
    assert interior(commutator(X, Y)) == commutator(commutator(d, iX), iY).scale(sign)
    assert commutator(iX, iY).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_poisson_jacobi(seed):
    rng = random.Random(seed)
    f, g, h = (random_poly(T, rng, parity=rng.randint(0, 1)) for _ in range(3))
    sign = -1 if homogeneous_parity(f) * homogeneous_parity(g) % 2 else 1
    lhs = poisson(f, poisson(g, h))
    assert lhs == poisson(poisson(f, g), h) + poisson(g, poisson(f, h)).scale(sign)
