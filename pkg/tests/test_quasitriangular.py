import random

import pytest

from superbrackets import (
    ChartMismatchError,
    ParityError,
    PreconditionError,
    ShiftDatum,
    base_space,
    build_quasitriangular_bialgebroid,
    classify,
    coboundary_decompose,
    cotangent,
    dual_bundle,
    generalized_ybe_residual,
    master_equation_residual,
    poisson,
    shift,
    vector_bundle,
    with_parameters,
)
from superbrackets.fixtures import SO3, lie_algebra_field
from superbrackets.generators import random_poly
from superbrackets.quasitriangular import shift_function

M = with_parameters(base_space([("x", 0), ("th", 1)]), [("t", 0)])
T = cotangent(M)
x, th, t = M.vars("x", "th", "t")
H = T.var("th") * T.var("p_x")


def test_shift_of_linear_hamiltonian():
    d = ShiftDatum(H, x**2, "t")
    assert str(shift(d)) == "th*p_x + 2*x*th*t"
    assert master_equation_residual(d) == 2 * x * th * t
    assert not generalized_ybe_residual(d)
    assert classify(d) == "quasi-triangular"


def test_shift_by_constant_is_triangular():
    assert classify(ShiftDatum(H, M.const(5))) == "triangular"


def test_shift_preserves_the_bracket():
    d = ShiftDatum(H, x**3 + x * th * th, "t")
    rng = random.Random(13)
    for _ in range(30):
        f = random_poly(T, rng, parity=rng.randint(0, 1))
        g = random_poly(T, rng, parity=rng.randint(0, 1))
        assert shift_function(d, poisson(f, g)) == poisson(shift_function(d, f), shift_function(d, g))


def test_master_hamiltonian_stays_master():
    d = ShiftDatum(H, x**2 + 3 * x, "t")
    assert not poisson(H, H)
    assert not poisson(shift(d), shift(d))


def test_quadratic_decomposition_sums_to_the_shift():
    N = base_space([("a", 1), ("b", 1)])
    TN = cotangent(N)
    Hq = TN.var("a") * TN.var("p_a") * TN.var("p_b")
    d = ShiftDatum(Hq, N.var("a") * N.var("b"))
    h0, h1, h2 = coboundary_decompose(d)
    assert h0 + h1 + h2 == shift(d)
    with pytest.raises(PreconditionError):
        coboundary_decompose(ShiftDatum(H, x))


def test_datum_validation():
    with pytest.raises(PreconditionError):
        ShiftDatum(H, th)
    with pytest.raises(ParityError):
        ShiftDatum(T.var("p_x"), x)
    with pytest.raises(ChartMismatchError):
        ShiftDatum(H, base_space([("x", 0)]).var("x"))
    with pytest.raises(PreconditionError):
        ShiftDatum(H, x, "x")


def test_so3_bialgebra_is_quasitriangular_with_expected_weights():
    pt = base_space([])
    Q = lie_algebra_field(vector_bundle(pt, [0, 0, 0]), SO3)
    D = dual_bundle(pt, [1, 1, 1])
    rep = build_quasitriangular_bialgebroid(Q, D.var("eta1") * D.var("eta2"))
    assert rep.weights == {"H_E": [1, 2], "r": [2, 0], "H_Estar": [2, 1]}
    assert rep.compatible
    assert rep.kind == "quasi-triangular"
    assert str(rep.master_residual) == "-eta1*eta2*eta3"
