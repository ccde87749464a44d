import random
from fractions import Fraction

import pytest

from superbrackets import (
    LInftyStructure,
    MasterHamiltonian,
    ParityError,
    ProvenanceError,
    Section,
    VectorField,
    adjoint_image,
    algebroid_brackets,
    anticotangent,
    base_space,
    bialgebroid_compatible,
    commutator,
    cotangent,
    embed,
    encode_linfty,
    extract_linfty,
    higher_poisson,
    higher_schouten,
    schouten_hamiltonian,
    schouten_sym,
    verify_generalized_jacobi,
    with_parameters,
)
from superbrackets.fixtures import SO3, action_algebroid, flat_copy, linfty_fixtures
from superbrackets.generators import random_poly

FIXTURES = {f.name: f for f in linfty_fixtures()}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_jacobi_holds_for_homological_fields_and_fails_after_perturbation(name):
    fx = FIXTURES[name]
    assert commutator(fx.field, fx.field).is_zero()
    assert verify_generalized_jacobi(extract_linfty(fx.field, 4), 4).ok
    bad = verify_generalized_jacobi(extract_linfty(fx.perturbed, 4), 4)
    assert not bad.ok and bad.first_failure is not None


def test_so3_binary_bracket_is_the_lie_bracket():
    L = extract_linfty(FIXTURES["so3"].field, 3)
    assert L.nonzero_arities() == [2]
    for (i, j), out in SO3.items():
        assert L.bracket_basis((i, j)) == {k: Fraction(c) for k, c in out.items()}


def test_curved_fixture_has_a_nullary_bracket():
    L = extract_linfty(FIXTURES["curved"].field, 3)
    assert L.is_curved()
    assert 0 in L.nonzero_arities()


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_encoding_inverts_extraction(name):
    Q = FIXTURES[name].field
    assert encode_linfty(Q.space, extract_linfty(Q, 4)) == Q


def test_bracket_arity_is_bounded_by_extraction():
    L = extract_linfty(FIXTURES["so3"].field, 2)
    with pytest.raises(Exception):
        L.bracket([{0: 1}] * 3)
    assert isinstance(L, LInftyStructure)


def test_extraction_needs_an_odd_field():
    M = base_space([("a", 0)])
    with pytest.raises(ParityError):
        extract_linfty(VectorField(M, {"a": M.var("a")}, 0), 2)


def test_adjoint_image_of_quadratic_field_is_its_commutator():
    Q = flat_copy(FIXTURES["so3"].field)
    V = with_parameters(Q.space, [("s", 1), ("u", 1)])
    Qv = VectorField(V, {Q.space.names[i]: embed(c, V) for i, c in Q.coeffs.items()}, 1)
    eta = {"xi1": V.var("s"), "xi3": V.var("u")}
    eta_field = VectorField(V, eta, 0)
    assert adjoint_image(Qv, eta) == commutator(eta_field, Qv)


def test_higher_poisson_of_a_bivector():
    M = base_space([("x1", 0), ("x2", 0)])
    S = anticotangent(M)
    P = S.var("st_x1") * S.var("st_x2")
    x1, x2 = M.vars("x1", "x2")
    assert higher_poisson(P, [x1, x2]) == M.one
    assert higher_poisson(P, [x2, x1]) == -M.one
    assert higher_poisson(P, []) == M.zero
    assert higher_poisson(P, [x1 * x2, x2]) == x2


def test_higher_schouten_of_d_is_the_schouten_bracket():
    M = base_space([("x", 0), ("y", 1)])
    S = anticotangent(M)
    D = schouten_hamiltonian(S)
    rng = random.Random(7)
    for _ in range(10):
        P = random_poly(S, rng, parity=rng.randint(0, 1))
        Q = random_poly(S, rng, parity=rng.randint(0, 1))
        assert higher_schouten(D, [P, Q]) == schouten_sym(P, Q)


def test_master_hamiltonian_validation():
    M = base_space([("x", 0)])
    with pytest.raises(ProvenanceError):
        MasterHamiltonian(cotangent(M).var("p_x"), "even")
    with pytest.raises(ParityError):
        MasterHamiltonian(anticotangent(M).var("st_x"), "even")
    with pytest.raises(ValueError):
        MasterHamiltonian(anticotangent(M).var("x"), "neither")


def test_action_algebroid():
    Q = action_algebroid()
    M = Q.space.parent
    x = M.var("x")
    e1 = Section((M.one, M.zero), 0)
    e2 = Section((M.zero, M.one), 0)
    a1, br = algebroid_brackets(Q, e1, e2, x)
    a2, _ = algebroid_brackets(Q, e2, e1, x)
    assert a1 == -x and a2 == M.one
    assert br.coeffs == (M.zero, M.one)


def test_bialgebroid_compatibility_of_commuting_hamiltonians():
    M = base_space([("x", 0), ("th", 1)])
    T = cotangent(M)
    H = T.var("th") * T.var("p_x")
    ok, res = bialgebroid_compatible(H, H)
    assert ok and not res
    ok, res = bialgebroid_compatible(H, T.var("x") * T.var("p_th"))
    assert not ok and res
