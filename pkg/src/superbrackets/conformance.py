"""Named, reproducible identity checks covering every construction of the package.

Each :class:`IdentityCase` pairs a generator of instances (seeded random or
an enumerated fixture list) with a check returning named residuals.  An
identity holds on an instance when every residual is zero; residual sizes
are counted in nonzero terms.  Failing random instances are shrunk, first
by polynomial degree and then by the number of variables involved.

Run the whole suite with ``python3 -m superbrackets.conformance`` or
:func:`run_suite`; :func:`mutation_report` repeats it with each pinned sign
convention flipped.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable

from . import conventions
from .algebra import Poly, Space, embed, format_poly, homogeneous_parity, partial, restrict_to, set_zero, substitute
from .axioms import (
    Shifted,
    field_parity,
    jacobi_residual,
    leibniz_residual,
    linearity_residual,
    poly_parity_fn,
    shifted_bracket,
    shifted_bracket_symmetric,
    shifted_parity,
    symmetry_residual,
)
from .brackets import (
    VectorField,
    commutator,
    de_rham,
    embed_field,
    field_from_linear_hamiltonian,
    interior,
    linear_hamiltonian,
    poisson,
    schouten,
    schouten_hamiltonian,
    schouten_sym,
    to_symmetric,
)
from .errors import SuperBracketsError
from .fixtures import (
    AFFINE,
    SO3,
    action_algebroid,
    chart_2_1,
    constant_bivector,
    flat_copy,
    lie_algebra_field,
    linear_bivector,
    linfty_fixtures,
    master_multivector,
    plane,
    super_base,
    super_constant_bivector,
)
from .generators import random_field, random_poly
from .geometry import (
    anticotangent,
    antitangent,
    base_space,
    cotangent,
    mx_transform,
    vector_bundle,
    weight_of,
    with_parameters,
)
from .homotopy import (
    BracketFamily,
    MasterHamiltonian,
    Section,
    adjoint_image,
    algebroid_brackets,
    anchor,
    bialgebroid_compatible,
    encode_linfty,
    extract_linfty,
    function_jacobi_residual,
    higher_poisson,
    higher_schouten,
    section_bracket,
    symmetric_form,
    verify_generalized_jacobi,
)
from .koszul import (
    alpha,
    alpha_via_hamiltonian,
    classical_koszul_check,
    higher_koszul,
    koszul_bracket,
    lichnerowicz,
    lichnerowicz_field,
    lichnerowicz_quadratic_field,
    quadratic_coefficients,
    raise_indices,
)
from .quasitriangular import (
    ShiftDatum,
    build_quasitriangular_bialgebroid,
    classify,
    coboundary_decompose,
    generalized_ybe_residual,
    master_equation_residual,
    shift,
    shift_function,
)

MANIFEST = Path(__file__).with_name("conformance_manifest.json")
DEFAULT_SEED = 0


@dataclass(frozen=True)
class IdentityCase:
    """One identity bound to a fixture and a generator.

    ``generate(rng, i)`` returns the i-th instance as a tuple; ``check(*inst)``
    returns a dict of named residuals.  ``expect`` is ``"holds"`` for the
    identities the package guarantees and ``"fails"`` for documented
    negative results (the residual must be nonzero on some instance).
    """

    id: str
    anchor: str
    tags: tuple
    fixture: str
    generate: Callable
    check: Callable
    samples: int
    expect: str = "holds"
    shrink: bool = True

    def manifest_entry(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "tags": list(self.tags),
            "fixture": self.fixture,
            "samples": self.samples,
            "expect": self.expect,
        }


CASES: list[IdentityCase] = []


def case(id, anchor, tags, fixture, samples, expect="holds", shrink=True):
    """Register ``generate`` (decorated) together with the check passed via ``.check``."""

    def wrap(generate):
        def with_check(check):
            CASES.append(IdentityCase(id, anchor, tuple(tags), fixture, generate, check, samples, expect, shrink))
            return check

        generate.check = with_check
        return generate

    return wrap


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


def _par(f: Poly) -> int:
    return homogeneous_parity(f)


def _rp(space, rng, parity=None, degree=3, terms=4, **kw):
    if parity is None:
        parity = rng.randint(0, 1)
    return random_poly(space, rng, max_degree=degree, max_terms=terms, parity=parity, **kw)


# ----------------------------------------------------------------------
# graded polynomial ring


@case("ring.associativity", "graded ring: associativity of the product", ["ring"], "2|2 chart", 200)
def _ring_assoc(rng, i):
    M = super_base()
    return tuple(_rp(M, rng, degree=4, rational=True) for _ in range(3))


@_ring_assoc.check
def _(a, b, c):
    return {"assoc": (a * b) * c - a * (b * c)}


@case("ring.unit", "graded ring: the constant 1 is a two-sided unit", ["ring"], "2|2 chart", 200)
def _ring_unit(rng, i):
    return (_rp(super_base(), rng, degree=4, rational=True),)


@_ring_unit.check
def _(a):
    one = a.space.one
    return {"left": one * a - a, "right": a * one - a}


@case("ring.commutativity", "graded ring: ab = (-1)^(ab) ba", ["ring"], "2|2 chart", 200)
def _ring_comm(rng, i):
    M = super_base()
    return (_rp(M, rng, degree=4), _rp(M, rng, degree=4))


@_ring_comm.check
def _(a, b):
    return {"comm": a * b - (b * a).scale(_sgn(_par(a) * _par(b)))}


@case("ring.odd-square", "graded ring: odd elements square to zero", ["ring"], "2|2 chart", 200)
def _ring_sq(rng, i):
    return (_rp(super_base(), rng, parity=1, degree=4, terms=5),)


@_ring_sq.check
def _(a):
    return {"square": a * a}


@case("ring.leibniz", "graded ring: partial derivatives are graded derivations", ["ring"], "2|2 chart", 100)
def _ring_leib(rng, i):
    M = super_base()
    return (_rp(M, rng), _rp(M, rng), rng.choice(M.names))


@_ring_leib.check
def _(a, b, z):
    pz = a.space.variable(z).parity
    return {"leibniz": partial(a * b, z) - partial(a, z) * b - (a * partial(b, z)).scale(_sgn(pz * _par(a)))}


@case("ring.substitute", "graded ring: substitution is an algebra homomorphism", ["ring"], "2|2 chart", 100)
def _ring_subst(rng, i):
    M = super_base()
    images = tuple(_rp(M, rng, parity=v.parity, degree=2, terms=2) for v in M.variables)
    return (_rp(M, rng), _rp(M, rng), images)


@_ring_subst.check
def _(a, b, images):
    im = dict(zip(a.space.names, images))
    return {
        "product": substitute(a * b, im) - substitute(a, im) * substitute(b, im),
        "sum": substitute(a + b, im) - substitute(a, im) - substitute(b, im),
    }


# ----------------------------------------------------------------------
# canonical brackets


def _triple(space, rng, degree=3):
    return tuple(_rp(space, rng, degree=degree) for _ in range(3))


@case("poisson.axioms", "canonical even bracket: bilinearity, antisymmetry, Jacobi", ["poisson"], "T*(2|2)", 50)
def _poisson_axioms(rng, i):
    T = cotangent(super_base())
    a, b, c = _triple(T, rng)
    a2 = _rp(T, rng, parity=_par(a))
    return (a, b, c, a2, Fraction(rng.randint(-3, 3), rng.randint(1, 3)))


@_poisson_axioms.check
def _(a, b, c, a2, q):
    par = poly_parity_fn()
    return {
        "symmetry": symmetry_residual("even", poisson, a, b, par),
        "jacobi": jacobi_residual("even", poisson, a, b, c, par),
        "linearity": linearity_residual(poisson, a, a2, b, q),
    }


@case("poisson.leibniz", "canonical even bracket: Leibniz rule", ["poisson"], "T*(2|2)", 50)
def _poisson_leib(rng, i):
    return _triple(cotangent(super_base()), rng)


@_poisson_leib.check
def _(a, b, c):
    return {"leibniz": leibniz_residual(0, poisson, a, b, c, poly_parity_fn())}


@case(
    "poisson.initial",
    "canonical even bracket: (f,g) = 0, (X.p, f) = X f, (X.p, Y.p) = [X,Y].p",
    ["poisson", "initial"],
    "T*(2|2)",
    50,
)
def _poisson_init(rng, i):
    M = super_base()
    return (
        _rp(M, rng),
        _rp(M, rng),
        random_field(M, rng, rng.randint(0, 1)),
        random_field(M, rng, rng.randint(0, 1)),
    )


@_poisson_init.check
def _(f, g, X, Y):
    T = cotangent(f.space)
    return {
        "functions": poisson(embed(f, T), embed(g, T)),
        "field-function": poisson(linear_hamiltonian(X), embed(f, T)) - embed(X(f), T),
        "field-field": poisson(linear_hamiltonian(X), linear_hamiltonian(Y)) - linear_hamiltonian(commutator(X, Y)),
    }


@case("poisson.odd-square", "canonical even bracket: (F,F) = 2 dF/dp_a dF/dx^a for odd F", ["poisson"], "T*(2|2)", 50)
def _poisson_sq(rng, i):
    return (_rp(cotangent(super_base()), rng, parity=1, degree=4, terms=5),)


@_poisson_sq.check
def _(F):
    T = F.space
    s = T.zero
    for c, m, _ in T.pairs:
        s = s + partial(F, m) * partial(F, c)
    return {"square": poisson(F, F) - s.scale(2)}


@case("poisson.ad-square", "odd Hamiltonian: (H,(H,f)) = 1/2 ((H,H),f)", ["poisson"], "T*(2|2)", 50)
def _poisson_ad(rng, i):
    T = cotangent(super_base())
    return (_rp(T, rng, parity=1), _rp(T, rng))


@_poisson_ad.check
def _(H, f):
    return {"ad-square": poisson(H, poisson(H, f)) - poisson(poisson(H, H), f).scale(Fraction(1, 2))}


@case("schouten.axioms", "Schouten bracket: odd antisymmetry, Jacobi, Leibniz", ["schouten"], "Pi T*(2|2)", 50)
def _schouten_axioms(rng, i):
    return _triple(anticotangent(super_base()), rng)


@_schouten_axioms.check
def _(a, b, c):
    par = poly_parity_fn()
    return {
        "symmetry": symmetry_residual("odd", schouten, a, b, par),
        "jacobi": jacobi_residual("odd", schouten, a, b, c, par),
        "leibniz": leibniz_residual(1, schouten, a, b, c, par),
    }


@case(
    "schouten.symmetric",
    "Schouten bracket: derived symmetric version and sign conversion round trip",
    ["schouten"],
    "Pi T*(2|2)",
    50,
)
def _schouten_sym(rng, i):
    return _triple(anticotangent(super_base()), rng)


@_schouten_sym.check
def _(a, b, c):
    par = poly_parity_fn()
    back = schouten_sym(a, b).scale(_sgn(_par(a)))
    return {
        "symmetry": symmetry_residual("symmetric", schouten_sym, a, b, par),
        "jacobi": jacobi_residual("symmetric", schouten_sym, a, b, c, par),
        "to-symmetric": to_symmetric(schouten)(a, b) - schouten_sym(a, b),
        "round-trip": back - schouten(a, b),
    }


@case("schouten.derived", "Schouten bracket as the derived bracket ((D,P),Q)", ["schouten"], "Pi T*(2|2)", 50)
def _schouten_derived(rng, i):
    S = anticotangent(super_base())
    return (_rp(S, rng), _rp(S, rng))


@_schouten_derived.check
def _(a, b):
    S = a.space
    T = cotangent(S)
    D = schouten_hamiltonian(S)
    derived = restrict_to(poisson(poisson(D, embed(a, T)), embed(b, T)), S)
    return {"derived": derived - schouten_sym(a, b), "DD": poisson(D, D)}


@case(
    "parity-shift.brackets",
    "parity shift: Pi[X,Y] and (-1)^X Pi[X,Y] give the odd and symmetric conventions",
    ["axioms", "parity-shift"],
    "vector fields on 2|2",
    30,
)
def _pshift(rng, i):
    M = super_base()
    return tuple(random_field(M, rng, rng.randint(0, 1)) for _ in range(3))


@_pshift.check
def _(X, Y, Z):
    a, b, c = Shifted(X), Shifted(Y), Shifted(Z)
    return {
        "even-symmetry": symmetry_residual("even", commutator, X, Y, field_parity),
        "even-jacobi": jacobi_residual("even", commutator, X, Y, Z, field_parity),
        "odd-symmetry": symmetry_residual("odd", shifted_bracket, a, b, shifted_parity),
        "odd-jacobi": jacobi_residual("odd", shifted_bracket, a, b, c, shifted_parity),
        "sym-symmetry": symmetry_residual("symmetric", shifted_bracket_symmetric, a, b, shifted_parity),
        "sym-jacobi": jacobi_residual("symmetric", shifted_bracket_symmetric, a, b, c, shifted_parity),
    }


# ----------------------------------------------------------------------
# differential forms


@case("forms.d-square", "de Rham field: d is odd and d^2 = 0", ["forms"], "Pi T(2|2)", 1, shrink=False)
def _d_square(rng, i):
    return (de_rham(antitangent(super_base())),)


@_d_square.check
def _(d):
    return {"d^2": commutator(d, d), "parity": d.parity - 1}


@case(
    "forms.cartan",
    "Cartan formula i_[X,Y] = (-1)^X [[d, i_X], i_Y] and [i_X, i_Y] = 0",
    ["forms", "cartan"],
    "Pi T(2|2)",
    40,
)
def _cartan(rng, i):
    M = super_base()
    return (random_field(M, rng, rng.randint(0, 1)), random_field(M, rng, rng.randint(0, 1)))


@_cartan.check
def _(X, Y):
    d = de_rham(antitangent(X.space))
    iX, iY = interior(X), interior(Y)
    return {
        "cartan": interior(commutator(X, Y)) - commutator(commutator(d, iX), iY).scale(_sgn(X.parity)),
        "interior-commute": commutator(iX, iY),
    }


@case("forms.lie-derivative", "Cartan: [d, i_X] acts on functions as X", ["forms", "cartan"], "Pi T(2|2)", 40)
def _lie(rng, i):
    M = super_base()
    return (random_field(M, rng, rng.randint(0, 1)), _rp(M, rng))


@_lie.check
def _(X, f):
    A = antitangent(X.space)
    L = commutator(de_rham(A), interior(X))
    return {"lie": L(embed(f, A)) - embed(X(f), A)}


# ----------------------------------------------------------------------
# homological vector fields and L-infinity algebras


def _linfty_gen(rng, i):
    return (linfty_fixtures()[i],)


def _linfty_check(fx):
    L = extract_linfty(fx.field, 4)
    Lp = extract_linfty(fx.perturbed, 4)
    good = verify_generalized_jacobi(L, 4)
    bad = verify_generalized_jacobi(Lp, 4)
    return {
        "Q^2": commutator(fx.field, fx.field),
        "jacobi": sum(good.residuals.values()),
        "perturbed-detected": 0 if not bad.ok else 1,
        "perturbed-Q^2-nonzero": 0 if not commutator(fx.perturbed, fx.perturbed).is_zero() else 1,
    }


CASES.append(
    IdentityCase(
        "linfty.iff",
        "higher derived brackets: generalized Jacobi identities hold if and only if Q^2 = 0",
        ("linfty",),
        "homological fields on <= 4 generators",
        _linfty_gen,
        _linfty_check,
        len(linfty_fixtures()),
        shrink=False,
    )
)


_W = None


def _small_chart() -> Space:
    global _W
    if _W is None:
        _W = base_space([("a", 0), ("b", 1), ("e", 1)])
    return _W


@case("linfty.random-iff", "higher derived brackets: detector agrees with Q^2 = 0", ["linfty"], "1|2 chart", 30)
def _linfty_rand(rng, i):
    return (random_field(_small_chart(), rng, 1, max_degree=3, max_terms=2),)


@_linfty_rand.check
def _(X):
    # Q^2 has degree <= 2 deg(Q) - 1, which is seen at arity <= 2 deg(Q)
    sq = commutator(X, X).is_zero()
    N = max(2, 2 * max((c.degree() for c in X.coeffs.values()), default=0))
    ok = verify_generalized_jacobi(extract_linfty(X, N), N).ok
    return {"agree": 0 if sq == ok else 1}


@case("linfty.encode", "structure constants: extraction and Taylor encoding are inverse", ["linfty"], "1|2 chart", 30)
def _linfty_enc(rng, i):
    return (random_field(_small_chart(), rng, 1, max_degree=3, max_terms=2),)


@_linfty_enc.check
def _(X):
    return {"round-trip": encode_linfty(X.space, extract_linfty(X, 4)) - X}


def _lie_gen(rng, i):
    return (("so3", SO3, 3), ("affine", AFFINE, 2))[i]


def _lie_check(name, structure, n):
    g = vector_bundle(base_space([]), [0] * n)
    Q = lie_algebra_field(g, structure)
    L = extract_linfty(Q, 3)
    bad = 0
    for (i, j), out in structure.items():
        got = L.bracket_basis((i, j))
        if {k: v for k, v in got.items()} != {k: Fraction(v) for k, v in out.items()}:
            bad += 1
    return {"Q^2": commutator(Q, Q), "binary": bad, "only-binary": 0 if L.nonzero_arities() == [2] else 1}


CASES.append(
    IdentityCase(
        "linfty.lie",
        "Lie algebra case: quadratic Q gives only the binary bracket, equal to the Lie bracket",
        ("linfty",),
        "so(3), affine algebra",
        _lie_gen,
        _lie_check,
        2,
        shrink=False,
    )
)


@case("linfty.curved", "curved structures: Q(0) != 0 gives a 0-ary bracket", ["linfty"], "curved fixture", 1, shrink=False)
def _curved(rng, i):
    return ([f for f in linfty_fixtures() if f.name == "curved"][0].field,)


@_curved.check
def _(Q):
    L = extract_linfty(Q, 4)
    return {"curved": 0 if L.is_curved() else 1, "jacobi": sum(verify_generalized_jacobi(L, 4).residuals.values())}


# adjoint representation


def _adjoint_setup(Q: VectorField):
    V = Q.space
    W = with_parameters(V, [("e_" + n, V.variable(n).parity) for n in V.names])
    QW = embed_field(Q, W)
    eta = {n: W.var("e_" + n) for n in V.names}
    return W, QW, eta


def _adjoint_gen(rng, i):
    return (flat_copy(linfty_fixtures()[i].field),)


def _adjoint_check(Q):
    W, QW, eta = _adjoint_setup(Q)
    img = adjoint_image(QW, eta)
    # Taylor oracle: exp(eta.d) Q^k - Q^k - Q^k(eta), eta.d the even constant-coefficient shift
    shift_op = VectorField(W, {n: v for n, v in eta.items()}, 0)
    at_eta = {n: v for n, v in eta.items()}
    cs = {}
    for k, c in QW.coeffs.items():
        total, term, n = W.zero, c, 1
        while True:
            term = shift_op(term).scale(Fraction(1, n))
            if not term.terms:
                break
            total = total + term
            n += 1
        cs[k] = total - substitute(c, at_eta)
    oracle = VectorField(W, cs, 1)
    quad = all(
        all(sum(m[i] for i in range(len(Q.space.names))) == 2 for m in c.terms) for c in Q.coeffs.values()
    )
    # eta = 0 leaves -Q(0), which vanishes unless Q is curved
    origin = {k: W.const(c.constant_term()) for k, c in QW.coeffs.items() if c.constant_term()}
    out = {"taylor": img - oracle, "zero-point": adjoint_image(QW, {}) + VectorField(W, origin, 1)}
    if quad:
        out["commutator"] = img - commutator(shift_op, QW)
    return out


CASES.append(
    IdentityCase(
        "adjoint.taylor",
        "adjoint map: Q^eta - Q - Q(eta) equals its Taylor expansion; ad for quadratic Q",
        ("linfty", "adjoint"),
        "homological fields on <= 4 generators",
        _adjoint_gen,
        _adjoint_check,
        len(linfty_fixtures()),
        shrink=False,
    )
)


# ----------------------------------------------------------------------
# homotopy Poisson and homotopy Schouten brackets


@case(
    "hpoisson.jacobi",
    "homotopy Poisson brackets: higher Jacobi identities up to arity 4 for [[P,P]] = 0",
    ["homotopy", "hpoisson"],
    "curved P on 2|1",
    12,
)
def _hp_jac(rng, i):
    M = chart_2_1()
    n = 1 + i % 4
    return tuple(_rp(M, rng, degree=2, terms=2, min_terms=1) for _ in range(n))


@_hp_jac.check
def _(*fs):
    P = master_multivector()
    g = symmetric_form(BracketFamily(MasterHamiltonian(P, "even")))
    ps = [(_par(f) + 1) % 2 for f in fs]
    return {"PP": schouten_sym(P, P), "jacobi": function_jacobi_residual(g, list(fs), ps)}


@case(
    "hpoisson.multiderivation",
    "homotopy Poisson brackets: derivation in the last argument",
    ["homotopy", "hpoisson"],
    "curved P on 2|1",
    30,
)
def _hp_md(rng, i):
    M = chart_2_1()
    k = 1 + i % 3
    return tuple(_rp(M, rng, degree=2, terms=2, min_terms=1) for _ in range(k + 1))


@_hp_md.check
def _(*args):
    P = master_multivector()
    fs, g, h = list(args[:-2]), args[-2], args[-1]
    X = (len(fs) + sum(_par(f) for f in fs)) % 2
    lhs = higher_poisson(P, fs + [g * h])
    rhs = higher_poisson(P, fs + [g]) * h + (g * higher_poisson(P, fs + [h])).scale(_sgn((X + 1) * _par(g)))
    return {"multiderivation": lhs - rhs}


@case(
    "hpoisson.coordinates",
    "homotopy Poisson brackets: quadratic P gives {x^a, x^b} = -(-1)^a P^ab and the bivector formula",
    ["homotopy", "hpoisson"],
    "bivectors on 2|1 and the plane",
    30,
)
def _hp_coord(rng, i):
    S = anticotangent(chart_2_1())
    B = plane()
    return (
        _rp(S, rng, parity=0, degree=4, terms=5),
        _rp(B, rng, parity=0, degree=3),
        _rp(B, rng, parity=0, degree=3),
    )


@_hp_coord.check
def _(Praw, f, g):
    S = Praw.space
    mom = S.momentum_indices()
    P = Poly(S, {m: c for m, c in Praw.terms.items() if sum(m[i] for i in mom) == 2})
    coeffs = quadratic_coefficients(P)
    M = S.parent
    bad = M.zero
    for a in M.names:
        for b in M.names:
            lhs = higher_poisson(P, [M.var(a), M.var(b)])
            bad = bad + lhs + coeffs.get((a, b), M.zero).scale(_sgn(M.variable(a).parity))
    # even plane: {f,g} = -P^ab d_a f d_b g with P = x1 x*_1 x*_2 + constant part
    B = f.space
    Pb = linear_bivector() + constant_bivector()
    cb = quadratic_coefficients(Pb)
    formula = B.zero
    for (a, b), c in cb.items():
        formula = formula - c * partial(f, a) * partial(g, b)
    return {"coordinates": bad, "formula": higher_poisson(Pb, [f, g]) - formula}


@case("hpoisson.arity0", "homotopy Poisson brackets: arity 0 is P on the base", ["homotopy", "hpoisson"], "2|1", 20)
def _hp0(rng, i):
    return (_rp(anticotangent(chart_2_1()), rng, parity=0, degree=3),)


@_hp0.check
def _(P):
    return {"arity0": higher_poisson(P, []) - restrict_to(P, P.space.parent)}


@case(
    "hschouten.jacobi",
    "homotopy Schouten brackets: higher Jacobi identities for H = D + (D,P), [[P,P]] = 0",
    ["homotopy", "hschouten"],
    "T*(Pi T*(2|1))",
    8,
)
def _hs_jac(rng, i):
    S = anticotangent(chart_2_1())
    n = 1 + i % 4
    return tuple(_rp(S, rng, degree=2, terms=2, min_terms=1) for _ in range(n))


@_hs_jac.check
def _(*args):
    S = args[0].space
    T = cotangent(S)
    D = schouten_hamiltonian(S)
    H = D + poisson(D, embed(master_multivector(), T))
    fam = MasterHamiltonian(H, "odd").family()
    return {"HH": poisson(H, H), "jacobi": function_jacobi_residual(fam, list(args))}


@case(
    "hschouten.schouten",
    "homotopy Schouten brackets: D gives the Schouten bracket at arity 2 and Q f at arity 1",
    ["homotopy", "hschouten"],
    "T*(Pi T*(2|1))",
    30,
)
def _hs_d(rng, i):
    S = anticotangent(chart_2_1())
    return (_rp(S, rng), _rp(S, rng), random_field(chart_2_1(), rng, 1), _rp(chart_2_1(), rng))


@_hs_d.check
def _(a, b, X, f):
    fam = MasterHamiltonian(schouten_hamiltonian(a.space), "odd").family()
    return {
        "arity2": fam(a, b) - schouten_sym(a, b),
        "unary": higher_schouten(linear_hamiltonian(X), [f]) - X(f),
    }


# ----------------------------------------------------------------------
# algebroids


def _section_of(X: VectorField) -> Section:
    return Section(tuple(X.coefficient(n) for n in X.space.names), X.parity)


@case(
    "algebroid.tangent",
    "tangent algebroid: d gives the identity anchor and the commutator bracket",
    ["algebroid"],
    "Pi T(2|1)",
    30,
)
def _alg_tm(rng, i):
    M = chart_2_1()
    return (random_field(M, rng, rng.randint(0, 1)), random_field(M, rng, rng.randint(0, 1)), _rp(M, rng))


@_alg_tm.check
def _(X, Y, f):
    d = de_rham(antitangent(X.space))
    a, br = algebroid_brackets(d, _section_of(X), _section_of(Y), f)
    W = _section_of(commutator(X, Y))
    diff = [b - w for b, w in zip(br.coeffs, W.coeffs)]
    par = 0 if all(not c.terms for c in W.coeffs) or br.parity == W.parity else 1
    return {"anchor": a - X(f), "bracket": sum(diff, X.space.zero), "parity": par}


@case(
    "algebroid.action",
    "action algebroid: [e1, e2] = e2 and anchors -x d/dx, d/dx",
    ["algebroid"],
    "line x affine algebra",
    1,
    shrink=False,
)
def _alg_act(rng, i):
    return (action_algebroid(),)


@_alg_act.check
def _(Q):
    M = Q.space.parent
    x = M.var("x")
    e1 = Section((M.one, M.zero), 0)
    e2 = Section((M.zero, M.one), 0)
    br = section_bracket(Q, e1, e2)
    return {
        "Q^2": commutator(Q, Q),
        "bracket": (br.coeffs[0]) + (br.coeffs[1] - M.one),
        "anchor-e1": anchor(Q, e1, x) + x,
        "anchor-e2": anchor(Q, e2, x) - M.one,
    }


@case("algebroid.leibniz", "algebroid Leibniz rule [u, f v] = a(u)f v + f [u, v]", ["algebroid"], "action algebroid", 30)
def _alg_leib(rng, i):
    M = action_algebroid().space.parent
    return tuple(_rp(M, rng, parity=0, degree=3) for _ in range(5))


@_alg_leib.check
def _(u1, u2, v1, v2, f):
    Q = action_algebroid()
    u, v = Section((u1, u2), 0), Section((v1, v2), 0)
    fv = Section((f * v1, f * v2), 0)
    lhs = section_bracket(Q, u, fv).coeffs
    a = anchor(Q, u, f)
    b = section_bracket(Q, u, v).coeffs
    res = f.space.zero
    for l, c, bc in zip(lhs, v.coeffs, b):
        res = res + l - a * c - f * bc
    return {"leibniz": res}


@case(
    "bialgebroid.compatible",
    "bialgebroid compatibility: (H, (H, r)) = 0 whenever (H, H) = 0",
    ["algebroid", "bialgebroid"],
    "T*(Pi T(2|1))",
    30,
)
def _bia_comp(rng, i):
    A = antitangent(chart_2_1())
    return (_rp(cotangent(A), rng, parity=0, degree=3),)


@_bia_comp.check
def _(r):
    H = linear_hamiltonian(de_rham(antitangent(chart_2_1())))
    ok, res = bialgebroid_compatible(H, poisson(H, r))
    return {"compatibility": res, "HH": poisson(H, H)}


# ----------------------------------------------------------------------
# Mackenzie-Xu


def _mx_even_chart():
    return cotangent(vector_bundle(base_space([("x1", 0), ("y1", 1)]), [0, 1], shifted=True))


def _mx_odd_chart():
    return anticotangent(vector_bundle(base_space([("x1", 0), ("y1", 1)]), [0, 1], shifted=False))


@case("mx.even", "Mackenzie-Xu relabeling T*(Pi E) -> T*(Pi E*) preserves the even bracket", ["mx"], "T*(Pi E)", 40)
def _mx_even(rng, i):
    T = _mx_even_chart()
    return (_rp(T, rng), _rp(T, rng))


@_mx_even.check
def _(a, b):
    mx = mx_transform(a.space)
    return {
        "symplectic": poisson(mx(a), mx(b)) - mx(poisson(a, b)),
        "inverse": mx.backward(mx(a)) - a,
    }


@case("mx.odd", "odd analog Pi T*(E) -> Pi T*(Pi E*) preserves the odd bracket", ["mx"], "Pi T*(E)", 40)
def _mx_odd(rng, i):
    S = _mx_odd_chart()
    return (_rp(S, rng), _rp(S, rng))


@_mx_odd.check
def _(a, b):
    mx = mx_transform(a.space)
    return {
        "symplectic": schouten_sym(mx(a), mx(b)) - mx(schouten_sym(a, b)),
        "inverse": mx.backward(mx(a)) - a,
    }


@case("mx.weights", "Mackenzie-Xu relabeling swaps the two weights", ["mx", "weights"], "T*(Pi E)", 40)
def _mx_w(rng, i):
    T = _mx_even_chart()
    return (_rp(T, rng, terms=1, min_terms=1, degree=4),)


@_mx_w.check
def _(a):
    if not a.terms:
        return {"swap": 0}
    w = weight_of(a)
    img = mx_transform(a.space)(a)
    return {"swap": 0 if weight_of(img) == (w[1], w[0]) else 1}


# ----------------------------------------------------------------------
# alpha map and Koszul brackets


@case(
    "alpha.routes",
    "alpha map: the explicit K_P display equals (D, P) after relabeling",
    ["koszul", "alpha"],
    "Pi T*(2|1)",
    40,
)
def _alpha_routes(rng, i):
    return (_rp(anticotangent(chart_2_1()), rng),)


@_alpha_routes.check
def _(P):
    return {"routes": alpha(P) - alpha_via_hamiltonian(P)}


@case(
    "alpha.intertwining",
    "alpha map: alpha([[P,Q]]) = (-1)^(P+1) (alpha P, alpha Q)",
    ["koszul", "alpha"],
    "Pi T*(2|1)",
    40,
)
def _alpha_int(rng, i):
    S = anticotangent(chart_2_1())
    return (_rp(S, rng), _rp(S, rng))


@_alpha_int.check
def _(P, Q):
    return {"intertwining": alpha(schouten_sym(P, Q)) - poisson(alpha(P), alpha(Q)).scale(_sgn(_par(P) + 1))}


@case("alpha.master", "alpha map: [[P,P]] = 0 gives (K_P, K_P) = 0", ["koszul", "alpha"], "curved P on 2|1", 1, shrink=False)
def _alpha_master(rng, i):
    return (master_multivector(),)


@_alpha_master.check
def _(P):
    K = alpha(P)
    return {"PP": schouten_sym(P, P), "KK": poisson(K, K)}


def _classical_gen(rng, i):
    M, B = chart_2_1(), plane()
    items = [
        (constant_bivector(), (B.var("x1") * B.var("x2"), B.var("x1"))),
        (super_constant_bivector(), (M.var("y1") * M.var("x1"), M.var("x2"), M.var("y1"))),
        (linear_bivector(), (B.var("x1") * B.var("x2"), B.var("x2") ** 2)),
    ]
    return items[i]


def _classical_check(P, fs):
    rep = classical_koszul_check(P, fs)
    out = {k: v for k, v in rep.residuals.items()}
    out["PP"] = schouten_sym(P, P)
    # the same brackets generated by (D, P) instead of the explicit K_P
    out["from-D"] = alpha_via_hamiltonian(P) - alpha(P)
    return out


CASES.append(
    IdentityCase(
        "koszul.classical",
        "classical Koszul bracket: [x^a,x^b] = 0, [x^a,dx^b] = -P^ab, [dx^a,dx^b] = dP^ab and initial conditions",
        ("koszul", "koszul-classical"),
        "constant and x-dependent bivectors",
        _classical_gen,
        _classical_check,
        3,
        shrink=False,
    )
)


def _higher_gen(rng, i):
    M = chart_2_1()
    S = anticotangent(M)
    l = 1 + i % 4
    P = random_poly(S, rng, parity=0, max_degree=7, max_terms=8)
    P = P + random_poly(S, rng, parity=0, max_degree=2, max_terms=2) * S.var("st_y1") ** l
    fs = tuple(random_poly(M, rng, parity=rng.randint(0, 1), max_degree=2, min_terms=1) for _ in range(l))
    return (P,) + fs


def _higher_check(epsilon):
    def check(P, *fs):
        A = antitangent(P.space.parent)
        d = de_rham(A)
        l = len(fs)
        e = epsilon(l, [_par(f) for f in fs])
        hp = embed(higher_poisson(P, list(fs)), A)
        dfs = [d(embed(f, A)) for f in fs]
        return {
            "mixed": higher_koszul(P, [embed(fs[0], A)] + dfs[1:]) - hp.scale(_sgn(e)),
            "exact": higher_koszul(P, dfs) - d(hp).scale(_sgn(e + 1)),
        }

    return check


def epsilon_corrected(l: int, parities) -> int:
    """sum_i (l - i) f_i + (l-1)(l-2)/2, the sign exponent that holds exactly."""
    return sum((l - i) * p for i, p in enumerate(parities, start=1)) + (l - 1) * (l - 2) // 2


def epsilon_literal(l: int, parities) -> int:
    """sum_i (l - i) f_i + l, the uncorrected exponent; fails for l = 1 and l = 4."""
    return sum((l - i) * p for i, p in enumerate(parities, start=1)) + l


CASES.append(
    IdentityCase(
        "koszul.higher",
        "higher Koszul brackets on f_1, df_2, ... and df_1, ..., df_l (corrected epsilon)",
        ("koszul", "higher-koszul"),
        "random even P on 2|1, l <= 4",
        _higher_gen,
        _higher_check(epsilon_corrected),
        24,
    )
)

CASES.append(
    IdentityCase(
        "koszul.higher-literal-epsilon",
        "higher Koszul brackets with epsilon = sum (l-i) f_i + l as displayed (documented failure at l = 1, 4)",
        ("koszul", "higher-koszul"),
        "random even P on 2|1, l <= 4",
        _higher_gen,
        _higher_check(epsilon_literal),
        24,
        expect="fails",
        shrink=False,
    )
)


@case(
    "koszul.higher-vanishing",
    "higher Koszul brackets vanish with two or more function arguments",
    ["koszul", "higher-koszul"],
    "random even P on 2|1",
    20,
)
def _hk_van(rng, i):
    M = chart_2_1()
    S = anticotangent(M)
    l = 2 + i % 3
    k = 2 + (i // 3) % (l - 1)
    P = random_poly(S, rng, parity=0, max_degree=5, max_terms=6)
    fs = tuple(random_poly(M, rng, parity=rng.randint(0, 1), max_degree=2, min_terms=1) for _ in range(l))
    return (P, k) + fs


@_hk_van.check
def _(P, k, *fs):
    A = antitangent(P.space.parent)
    d = de_rham(A)
    forms = [embed(f, A) for f in fs[:k]] + [d(embed(f, A)) for f in fs[k:]]
    return {"vanishing": higher_koszul(P, forms)}


@case(
    "lichnerowicz.routes",
    "Lichnerowicz differential: explicit field equals [[P, -]]",
    ["koszul", "lichnerowicz"],
    "Pi T*(2|1)",
    30,
)
def _lich(rng, i):
    S = anticotangent(chart_2_1())
    P = _rp(S, rng, parity=0, degree=4, terms=6)
    mom = S.momentum_indices()
    Pq = Poly(S, {m: c for m, c in P.terms.items() if sum(m[j] for j in mom) == 2})
    return (P, Pq, _rp(S, rng))


@_lich.check
def _(P, Pq, X):
    return {
        "generic": lichnerowicz_field(P)(X) - lichnerowicz(P, X),
        "quadratic": lichnerowicz_quadratic_field(Pq)(X) - lichnerowicz(Pq, X),
    }


def _poisson_bivectors():
    return (super_constant_bivector(), embed(linear_bivector(), anticotangent(plane())), master_multivector())


@case("lichnerowicz.square", "Lichnerowicz differential squares to zero for [[P,P]] = 0", ["koszul", "lichnerowicz"], "Poisson P", 30)
def _lich_sq(rng, i):
    P = _poisson_bivectors()[i % 3]
    return (P, _rp(P.space, rng))


@_lich_sq.check
def _(P, X):
    return {"PP": schouten_sym(P, P), "d_P^2": lichnerowicz(P, lichnerowicz(P, X))}


@case(
    "raise.diagram",
    "raising indices: phi* o d = d_P o phi* and phi*[w,t]_P = -[[phi* w, phi* t]]",
    ["koszul", "raise"],
    "Poisson bivectors",
    30,
)
def _raise(rng, i):
    P = _poisson_bivectors()[i % 2]
    A = antitangent(P.space.parent)
    return (P, _rp(A, rng), _rp(A, rng))


@_raise.check
def _(P, w, t):
    A = w.space
    d = de_rham(A)
    return {
        "diagram": raise_indices(P, d(w)) - lichnerowicz(P, raise_indices(P, w)),
        "intertwining": raise_indices(P, koszul_bracket(P, w, t)) + schouten_sym(raise_indices(P, w), raise_indices(P, t)),
    }


# ----------------------------------------------------------------------
# argument shift


@case(
    "shift.preserves-bracket",
    "gradient shift p -> p + dr/dx preserves the canonical bracket",
    ["shift"],
    "T*(2|2)",
    40,
)
def _shift_pres(rng, i):
    N = super_base()
    T = cotangent(N)
    return (_rp(N, rng, parity=0, degree=3), _rp(T, rng), _rp(T, rng))


@_shift_pres.check
def _(r, F, G):
    T = F.space
    datum = ShiftDatum(T.var("p_y1"), r)
    sh = lambda f: shift_function(datum, f)  # noqa: E731
    return {"preserve": poisson(sh(F), sh(G)) - sh(poisson(F, G))}


def _shift_family(i):
    """Odd Hamiltonians with (H, H) = 0 and their base charts, by index."""
    fx = linfty_fixtures()
    if i < len(fx):
        H = linear_hamiltonian(flat_copy(fx[i].field))
        return "linear:" + fx[i].name, H
    if i == len(fx):
        M = chart_2_1()
        A = antitangent(M)
        H = linear_hamiltonian(de_rham(A)) + alpha(super_constant_bivector())
        return "d+K_P", H
    if i == len(fx) + 1:
        M = chart_2_1()
        H = linear_hamiltonian(de_rham(antitangent(M))) + alpha(master_multivector())
        return "d+K_P curved", H
    S = anticotangent(chart_2_1())
    return "D", embed(schouten_hamiltonian(S), cotangent(S))


_N_SHIFT_FAMILY = len(linfty_fixtures()) + 3


@case(
    "shift.master",
    "argument shift: (H,H) = 0 implies (H',H') = 0 (linear, d + K_P and quadratic H)",
    ["shift"],
    "homological Hamiltonians",
    2 * (len(linfty_fixtures()) + 3),
    shrink=False,
)
def _shift_master(rng, i):
    name, H = _shift_family(i % _N_SHIFT_FAMILY)
    r = _rp(H.space.parent, rng, parity=0, degree=3)
    return (H, r)


@_shift_master.check
def _(H, r):
    Hs = shift(ShiftDatum(H, r))
    return {"HH": poisson(H, H), "H'H'": poisson(Hs, Hs)}


@case(
    "shift.zero-section",
    "argument shift: master residual is H' on the zero section; classification",
    ["shift"],
    "T*(Pi T(2|1))",
    30,
)
def _shift_zero(rng, i):
    A = antitangent(chart_2_1())
    T = cotangent(A)
    return (_rp(T, rng, parity=1, degree=3), _rp(A, rng, parity=0, degree=3))


@_shift_zero.check
def _(H, r):
    T = H.space
    datum = ShiftDatum(H, r)
    direct = {}
    rl = embed(r, T)
    for c, m, _ in T.pairs:
        direct[T.variables[m].name] = partial(rl, c)
    at_gradient = restrict_to(substitute(H, direct), T.parent)
    kind = classify(datum)
    res = master_equation_residual(datum)
    consistent = (kind == "triangular") == (not res.terms)
    if kind == "quasi-triangular":
        consistent = consistent and not generalized_ybe_residual(datum).terms
    return {
        "zero-section": res - at_gradient,
        "restriction": res - restrict_to(shift(datum), T.parent),
        "classify": 0 if consistent else 1,
    }


@case(
    "shift.decompose",
    "argument shift of quadratic H: H' = H + (H, r) + 1/2 ((H, r), r)",
    ["shift"],
    "T*(Pi T*(2|1))",
    30,
)
def _shift_dec(rng, i):
    S = anticotangent(chart_2_1())
    T = cotangent(S)
    H = embed(schouten_hamiltonian(S), T)
    mom = T.momentum_indices()
    extra = _rp(T, rng, parity=1, degree=4, terms=4)
    extra = Poly(T, {m: c for m, c in extra.terms.items() if sum(m[j] for j in mom) == 2})
    return (H + extra, _rp(S, rng, parity=0, degree=3))


@_shift_dec.check
def _(H, r):
    a, b, c = coboundary_decompose(ShiftDatum(H, r))
    return {"decompose": shift(ShiftDatum(H, r)) - (a + b + c)}


@case("shift.pencil", "argument shift: shifting by t then s equals shifting by t + s", ["shift"], "T*(1|1) with t, s", 20)
def _pencil(rng, i):
    N0 = base_space([("x", 0), ("th", 1)])
    return (_rp(N0, rng, parity=0, degree=3), _rp(cotangent(N0), rng, parity=1, degree=3))


@_pencil.check
def _(r, H0):
    N0 = r.space
    N = with_parameters(N0, [("t", 0), ("s", 0)])
    T = cotangent(N)
    H = embed(H0, T)
    rN = embed(r, N)
    H1 = shift(ShiftDatum(H, rN, "t"))
    H2 = shift(ShiftDatum(H1, rN, "s"))
    return {"pencil": H2 - substitute(H1, {"t": T.var("t") + T.var("s")})}


# ----------------------------------------------------------------------
# quasi-triangular bialgebroids


def _lie_bundle(structure, n):
    A = vector_bundle(base_space([]), [0] * n, shifted=True)
    return lie_algebra_field(A, structure)


def _dual_chart(Q: VectorField) -> Space:
    return mx_transform(linear_hamiltonian(Q).space).target.parent


@case(
    "bialgebroid.tangent",
    "tangent bundle with Poisson P: H_E* = K_P and the shifted Hamiltonian d.p + K_P",
    ["bialgebroid", "shift"],
    "T*(Pi T M), plane and 2|1",
    3,
    shrink=False,
)
def _bia_tm(rng, i):
    return ((constant_bivector(), linear_bivector(), super_constant_bivector())[i],)


@_bia_tm.check
def _(P):
    A = antitangent(P.space.parent)
    rep = build_quasitriangular_bialgebroid(de_rham(A), P)
    K = alpha(P)
    return {
        "H_E*": rep.H_Estar - K,
        "shifted": rep.H_shifted - (rep.H_E + K),
        "compatibility": rep.compatibility,
        "master": rep.master_residual,
    }


def _cobracket_gen(rng, i):
    structure, n = ((SO3, 3), (AFFINE, 2))[i % 2]
    Q = _lie_bundle(structure, n)
    S = _dual_chart(Q)
    r = random_poly(S, rng, parity=0, max_degree=2, min_terms=1)
    return (structure, n, r)


def _cobracket_check(structure, n, r):
    Q = _lie_bundle(structure, n)
    rep = build_quasitriangular_bialgebroid(Q, r)
    S = rep.r.space
    e = [S.var(v) for v in S.names]
    F = field_from_linear_hamiltonian(rep.H_Estar_dual)
    res = 0
    for k in range(n):
        ad = {}
        for (i, j), ks in structure.items():
            for m, c in ks.items():
                if i == k:
                    ad[S.names[j]] = ad.get(S.names[j], S.zero) + e[m].scale(c)
                if j == k:
                    ad[S.names[i]] = ad.get(S.names[i], S.zero) - e[m].scale(c)
        D = VectorField(S, ad, 0)
        res += residual_size(D(rep.r) - F.coefficient(S.names[k]))
    return {"cobracket": res, "compatibility": rep.compatibility, "ybe": rep.ybe_residual if structure is SO3 else S.zero}


CASES.append(
    IdentityCase(
        "bialgebroid.cobracket",
        "Lie bialgebra over a point: the shifted structure is the cobracket ad r; so(3) is quasi-triangular",
        ("bialgebroid",),
        "so(3), affine algebra",
        _cobracket_gen,
        _cobracket_check,
        10,
    )
)


@case(
    "bialgebroid.weights",
    "weights on T*(Pi E): H_E (1,2), r (2,0), H_E* = (H_E, r) (2,1); so(3) with r = e1 e2 is quasi-triangular",
    ["bialgebroid", "weights"],
    "so(3)",
    1,
    shrink=False,
)
def _bia_w(rng, i):
    return (_lie_bundle(SO3, 3),)


@_bia_w.check
def _(Q):
    S = _dual_chart(Q)
    rep = build_quasitriangular_bialgebroid(Q, S.var("eta1") * S.var("eta2"))
    expected = {"H_E": [1, 2], "r": [2, 0], "H_Estar": [2, 1]}
    return {
        "weights": 0 if rep.weights == expected else 1,
        "kind": 0 if rep.kind == "quasi-triangular" else 1,
        "compatibility": rep.compatibility,
    }


# ----------------------------------------------------------------------
# runner


def residual_size(v) -> int:
    """Number of nonzero terms (ints count as themselves, booleans as 0/1 failure)."""
    if isinstance(v, bool):
        return 0 if v else 1
    if isinstance(v, int):
        return abs(v)
    if isinstance(v, Poly):
        return len(v.terms)
    if isinstance(v, VectorField):
        return sum(len(c.terms) for c in v.coeffs.values())
    if isinstance(v, Shifted):
        return residual_size(v.field)
    if isinstance(v, (tuple, list)):
        return sum(residual_size(x) for x in v)
    raise TypeError(f"cannot size residual of type {type(v).__name__}")


def describe(item):
    if isinstance(item, Poly):
        return format_poly(item)
    if isinstance(item, VectorField):
        return {item.space.names[i]: format_poly(c) for i, c in sorted(item.coeffs.items())}
    if isinstance(item, (tuple, list)):
        return [describe(x) for x in item]
    if isinstance(item, Fraction):
        return str(item)
    if isinstance(item, (int, str, float)) or item is None:
        return item
    return repr(item)


def _evaluate(c: IdentityCase, inst) -> tuple[dict, str | None]:
    try:
        res = c.check(*inst)
    except SuperBracketsError as exc:
        return {}, f"{type(exc).__name__}: {exc}"
    return {k: residual_size(v) for k, v in res.items()}, None


def _poly_candidates(f: Poly):
    """Smaller versions of f: lower degree first, then fewer variables."""
    if not f.terms:
        return
    top = f.degree()
    if top > 0:
        lower = Poly(f.space, {m: c for m, c in f.terms.items() if sum(m) < top})
        yield lower
    for i in sorted(f.support()):
        yield set_zero(f, [i])
    if len(f.terms) > 1:
        for m in sorted(f.terms):
            yield Poly(f.space, {k: v for k, v in f.terms.items() if k != m})


def _field_candidates(X: VectorField):
    if X.is_zero():
        return
    top = max(c.degree() for c in X.coeffs.values())
    if top > 0:
        yield VectorField(
            X.space,
            {k: Poly(X.space, {m: v for m, v in c.terms.items() if sum(m) < top}) for k, c in X.coeffs.items()},
            X.parity,
        )
    support = sorted(set().union(*(c.support() for c in X.coeffs.values())))
    for i in support:
        yield VectorField(X.space, {k: set_zero(c, [i]) for k, c in X.coeffs.items()}, X.parity)
    for k in sorted(X.coeffs):
        yield VectorField(X.space, {j: c for j, c in X.coeffs.items() if j != k}, X.parity)


def _candidates(inst):
    for pos, item in enumerate(inst):
        if isinstance(item, Poly):
            gen = _poly_candidates(item)
        elif isinstance(item, VectorField):
            gen = _field_candidates(item)
        else:
            continue
        for smaller in gen:
            yield inst[:pos] + (smaller,) + inst[pos + 1 :]


def shrink_instance(c: IdentityCase, inst, budget: int = 300):
    """Greedy deterministic shrink: keep any smaller instance that still fails."""
    steps = 0
    improved = True
    while improved and steps < budget:
        improved = False
        for cand in _candidates(inst):
            steps += 1
            sizes, err = _evaluate(c, cand)
            if err is None and any(sizes.values()):
                inst = cand
                improved = True
                break
            if steps >= budget:
                break
    return inst


def run_case(c: IdentityCase | str, seed: int = DEFAULT_SEED, samples: int | None = None, timings: bool = True) -> dict:
    """Run one case; returns its report entry."""
    if isinstance(c, str):
        c = get_case(c)
    n = c.samples if samples is None else samples
    rng = random.Random(f"{seed}:{c.id}")
    t0 = time.perf_counter()
    total: dict[str, int] = {}
    failure = None
    nonzero_instances = 0
    for i in range(n):
        inst = c.generate(rng, i)
        sizes, err = _evaluate(c, inst)
        bad = err is not None or any(sizes.values())
        for k, v in sizes.items():
            total[k] = total.get(k, 0) + v
        if bad:
            nonzero_instances += 1
            if failure is None:
                if c.expect == "holds" and c.shrink and err is None:
                    inst = shrink_instance(c, inst)
                    sizes, err = _evaluate(c, inst)
                failure = {"index": i, "instance": describe(inst), "residual_terms": sizes, "error": err}
    if c.expect == "holds":
        status = "pass" if nonzero_instances == 0 else "fail"
    else:
        status = "expected-failure" if nonzero_instances else "fail"
    out = {
        "id": c.id,
        "anchor": c.anchor,
        "tags": list(c.tags),
        "fixture": c.fixture,
        "expect": c.expect,
        "status": status,
        "instances": n,
        "failing_instances": nonzero_instances,
        "residual_terms": dict(sorted(total.items())),
        "failure": failure,
    }
    if timings:
        out["seconds"] = round(time.perf_counter() - t0, 4)
    return out


def get_case(case_id: str) -> IdentityCase:
    for c in CASES:
        if c.id == case_id:
            return c
    raise KeyError(case_id)


def select(tags: Iterable[str] | None = None, ids: Iterable[str] | None = None) -> list[IdentityCase]:
    """Cases carrying any of ``tags`` (all cases when the filter is empty)."""
    tags = set(tags or ())
    ids = set(ids or ())
    out = []
    for c in CASES:
        if tags and not tags & set(c.tags):
            continue
        if ids and c.id not in ids:
            continue
        out.append(c)
    return out


def _run_case_worker(args):
    case_id, seed, samples, timings, mutation = args
    if mutation:
        with conventions.flipped(mutation):
            return run_case(case_id, seed, samples, timings)
    return run_case(case_id, seed, samples, timings)


def run_suite(
    tags: Iterable[str] | None = None,
    seed: int = DEFAULT_SEED,
    *,
    ids: Iterable[str] | None = None,
    samples: int | None = None,
    timings: bool = True,
    jobs: int = 1,
    mutation: str | None = None,
) -> dict:
    """Run the selected cases and return a JSON-ready report.

    With ``timings=False`` the report is byte-for-byte deterministic for a
    given seed; ``jobs > 1`` runs cases in worker processes and reassembles
    them in manifest order.
    """
    chosen = select(tags, ids)
    t0 = time.perf_counter()
    work = [(c.id, seed, samples, timings, mutation) for c in chosen]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_case_worker, work))
    else:
        results = [_run_case_worker(w) for w in work]
    summary = {"pass": 0, "fail": 0, "expected-failure": 0}
    for r in results:
        summary[r["status"]] += 1
    conv = conventions.flipped_record(mutation) if mutation else conventions.current()
    report = {
        "schema": 1,
        "seed": seed,
        "conventions": {k: getattr(conv, k) for k in conventions.MUTATIONS},
        "mutation": mutation,
        "cases": results,
        "summary": summary,
        "ok": summary["fail"] == 0,
    }
    if timings:
        report["seconds"] = round(time.perf_counter() - t0, 4)
    return report


def mutation_report(seed: int = DEFAULT_SEED, tags: Iterable[str] | None = None, jobs: int = 1) -> dict:
    """For each pinned sign convention, the cases that fail once it is flipped."""
    out = {}
    for name in conventions.MUTATIONS:
        rep = run_suite(tags, seed, timings=False, jobs=jobs, mutation=name)
        out[name] = [r["id"] for r in rep["cases"] if r["status"] == "fail"]
    return out


def manifest() -> list[dict]:
    return [c.manifest_entry() for c in CASES]


def write_manifest(path: Path = MANIFEST) -> None:
    path.write_text(json.dumps({"schema": 1, "cases": manifest()}, indent=2) + "\n", encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="python3 -m superbrackets.conformance", description=__doc__.splitlines()[0])
    ap.add_argument("--tags", default="", help="comma-separated tag filter (empty: all cases)")
    ap.add_argument("--case", action="append", default=[], help="run only this case id (repeatable)")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--samples", type=int, default=None, help="override every case's sample count")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--no-timings", action="store_true", help="omit wall times (deterministic output)")
    ap.add_argument("--mutations", action="store_true", help="report failing cases per flipped convention")
    ap.add_argument("--list", action="store_true", help="print the manifest and exit")
    ap.add_argument("--write-manifest", action="store_true")
    args = ap.parse_args(argv)
    tags = [t for t in args.tags.split(",") if t]
    if args.list:
        print(json.dumps(manifest(), indent=2))
        return 0
    if args.write_manifest:
        write_manifest()
        return 0
    if args.mutations:
        rep = mutation_report(args.seed, tags, args.jobs)
        print(json.dumps(rep, indent=2))
        return 0 if all(rep.values()) else 1
    rep = run_suite(tags, args.seed, ids=args.case, samples=args.samples, timings=not args.no_timings, jobs=args.jobs)
    print(json.dumps(rep, indent=2))
    return 0 if rep["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
