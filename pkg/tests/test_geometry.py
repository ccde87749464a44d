import random

import pytest

from superbrackets import (
    ANY,
    MIXED,
    ProvenanceError,
    anticotangent,
    antitangent,
    base_space,
    canonical_bracket,
    cotangent,
    dual_bundle,
    mx_transform,
    vector_bundle,
    weight_of,
    with_parameters,
)
from superbrackets.generators import random_poly
from superbrackets.geometry import weight_components

M = base_space([("x", 0), ("y", 1)])


def names(space):
    return list(space.names)


def test_cotangent_momenta_have_equal_parity_and_even_pairs():
    T = cotangent(M)
    assert names(T) == ["x", "y", "p_x", "p_y"]
    assert T.parities == (0, 1, 0, 1)
    assert T.bracket_parity() == 0
    assert T.parent == M


def test_anticotangent_flips_parity_and_pairs_are_odd():
    S = anticotangent(M)
    assert names(S) == ["x", "y", "st_x", "st_y"]
    assert S.parities == (0, 1, 1, 0)
    assert S.bracket_parity() == 1


def test_antitangent_adds_differentials_without_pairs():
    A = antitangent(M)
    assert names(A) == ["x", "y", "dx", "dy"]
    assert A.parities == (0, 1, 1, 0)
    assert A.pairs == ()


def test_constructions_are_cached_and_hashable():
    assert cotangent(M) is cotangent(M)
    assert cotangent(antitangent(M)) == cotangent(antitangent(base_space([("x", 0), ("y", 1)])))


def test_parameters_never_get_momenta():
    P = with_parameters(M, [("t", 0)])
    assert "p_t" not in cotangent(P).index
    assert "st_t" not in anticotangent(P).index
    with pytest.raises(ProvenanceError):
        with_parameters(cotangent(M), [("t", 0)])


def test_bundle_charts():
    E = vector_bundle(M, [0, 1])
    assert names(E) == ["x", "y", "xi1", "xi2"]
    assert E.parities == (0, 1, 1, 0)
    assert vector_bundle(M, [0], shifted=False).parities == (0, 1, 0)
    assert names(dual_bundle(M, [1])) == ["x", "y", "eta1"]
    with pytest.raises(ProvenanceError):
        vector_bundle(cotangent(M), [0])


def test_weights_on_double_bundle():
    T = cotangent(vector_bundle(M, [0]))
    w = {v.name: v.weight for v in T.variables}
    assert w == {"x": (0, 0), "y": (0, 0), "xi1": (0, 1), "p_x": (1, 1), "p_y": (1, 1), "pi_xi1": (1, 0)}
    xi, pi, px = T.vars("xi1", "pi_xi1", "p_x")
    assert weight_of(xi * px) == (1, 2)
    assert weight_of(xi + px) == MIXED
    assert weight_of(T.zero) == ANY
    assert set(weight_components(xi + px)) == {(0, 1), (1, 1)}


def test_mx_relabeling_exchanges_fiber_and_momentum():
    T = cotangent(vector_bundle(M, [0, 1]))
    mx = mx_transform(T)
    assert names(mx.target) == ["x", "y", "eta1", "eta2", "p_x", "p_y", "pi_eta1", "pi_eta2"]
    assert dict(mx.signs) == {"xi1": 1, "xi2": -1}
    f = T.var("xi1") * T.var("pi_xi2") + T.var("p_x")
    assert mx.backward(mx.forward(f)) == f


@pytest.mark.parametrize("construction", [cotangent, anticotangent])
def test_mx_preserves_the_bracket(construction):
    T = construction(vector_bundle(M, [0, 1]))
    mx = mx_transform(T)
    rng = random.Random(1)
    for _ in range(30):
        f = random_poly(T, rng, parity=rng.randint(0, 1))
        g = random_poly(T, rng, parity=rng.randint(0, 1))
        assert mx(canonical_bracket(f, g)) == canonical_bracket(mx(f), mx(g))


def test_mx_swaps_weights():
    T = cotangent(vector_bundle(M, [0]))
    mx = mx_transform(T)
    rng = random.Random(2)
    for _ in range(20):
        f = random_poly(T, rng, max_terms=1, min_terms=1)
        w = weight_of(f)
        assert weight_of(mx(f)) == (w[1], w[0])


def test_mx_needs_a_bundle():
    with pytest.raises(ProvenanceError):
        mx_transform(cotangent(M))
