import random

import pytest

from superbrackets import (
    PreconditionError,
    ProvenanceError,
    alpha,
    alpha_via_hamiltonian,
    anticotangent,
    antitangent,
    base_space,
    classical_koszul_check,
    de_rham,
    embed,
    higher_koszul,
    higher_poisson,
    koszul_bracket,
    lichnerowicz,
    lichnerowicz_field,
    lichnerowicz_quadratic_field,
    poisson,
    quadratic_coefficients,
    raise_indices,
    schouten_sym,
)
from superbrackets.algebra import homogeneous_parity
from superbrackets.conformance import epsilon_corrected
from superbrackets.fixtures import linear_bivector, master_multivector
from superbrackets.generators import random_poly

PLANE = base_space([("x1", 0), ("x2", 0)])
S = anticotangent(PLANE)
A = antitangent(PLANE)
SUPER = base_space([("x1", 0), ("x2", 0), ("y1", 1)])


def test_quadratic_coefficients_convention():
    P = S.var("st_x1") * S.var("st_x2")
    assert quadratic_coefficients(P) == {("x1", "x2"): -PLANE.one, ("x2", "x1"): PLANE.one}
    with pytest.raises(PreconditionError):
        quadratic_coefficients(S.var("st_x1"))


def test_alpha_of_constant_bivector():
    P = S.var("st_x1") * S.var("st_x2")
    assert str(alpha(P)) == "p_x1*pi_x2 - p_x2*pi_x1"


def test_alpha_routes_agree_on_super_chart():
    SS = anticotangent(SUPER)
    rng = random.Random(8)
    for _ in range(25):
        P = random_poly(SS, rng, parity=rng.randint(0, 1), max_degree=4)
        assert alpha(P) == alpha_via_hamiltonian(P)


def test_alpha_intertwines_brackets():
    SS = anticotangent(SUPER)
    rng = random.Random(9)
    for _ in range(25):
        p = rng.randint(0, 1)
        P = random_poly(SS, rng, parity=p)
        Q = random_poly(SS, rng, parity=rng.randint(0, 1))
        sign = 1 if p else -1
        assert alpha(schouten_sym(P, Q)) == poisson(alpha(P), alpha(Q)).scale(sign)


def test_classical_koszul_identities():
    x1 = PLANE.var("x1")
    for P in (S.var("st_x1") * S.var("st_x2"), embed(x1, S) * S.var("st_x1") * S.var("st_x2")):
        report = classical_koszul_check(P, [x1 * x1, PLANE.var("x2") + x1])
        assert report.ok, report.residuals


def test_koszul_bracket_values():
    P = S.var("st_x1") * S.var("st_x2")
    assert koszul_bracket(P, A.var("x1"), A.var("dx2")) == A.one
    assert koszul_bracket(P, A.var("dx1"), A.var("dx2")) == A.zero


def test_higher_koszul_specializations_with_corrected_sign():
    P = master_multivector()
    M = P.space.parent
    AM = antitangent(M)
    d = de_rham(AM)
    rng = random.Random(10)
    for l in range(1, 5):
        fs = [random_poly(M, rng, parity=rng.randint(0, 1), max_degree=2, min_terms=1) for _ in range(l)]
        e = epsilon_corrected(l, [homogeneous_parity(f) for f in fs])
        hp = embed(higher_poisson(P, fs), AM)
        dfs = [d(embed(f, AM)) for f in fs]
        assert higher_koszul(P, [embed(fs[0], AM)] + dfs[1:]) == hp.scale((-1) ** e)
        assert higher_koszul(P, dfs) == d(hp).scale((-1) ** (e + 1))


def test_higher_koszul_vanishes_on_two_functions():
    P = master_multivector()
    AM = antitangent(P.space.parent)
    f, g = AM.var("x1"), AM.var("x2")
    assert higher_koszul(P, [f, g, AM.var("dx1")]) == AM.zero


def test_lichnerowicz_routes_and_square():
    P = linear_bivector()
    assert not schouten_sym(P, P)
    X = lichnerowicz_field(P)
    Y = lichnerowicz_quadratic_field(P)
    assert X == Y
    assert X.square().is_zero()
    rng = random.Random(11)
    for _ in range(15):
        F = random_poly(P.space, rng, parity=rng.randint(0, 1))
        assert X(F) == lichnerowicz(P, F)


def test_raising_indices_diagram():
    P = linear_bivector()
    B = P.space.parent
    AB = antitangent(B)
    d = de_rham(AB)
    rng = random.Random(12)
    for _ in range(15):
        w = random_poly(AB, rng, parity=rng.randint(0, 1))
        assert raise_indices(P, d(w)) == lichnerowicz(P, raise_indices(P, w))


def test_koszul_needs_multivector_chart():
    with pytest.raises(ProvenanceError):
        alpha(PLANE.var("x1"))
