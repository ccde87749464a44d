"""Reference charts and structures shared by the test suite, the conformance
runner and the demos."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Poly, Space, substitute
from .brackets import VectorField, commutator, schouten_sym
from .geometry import anticotangent, base_space, vector_bundle


@lru_cache(maxsize=None)
def super_base() -> Space:
    """Two even and two odd coordinates."""
    return base_space([("x1", 0), ("x2", 0), ("y1", 1), ("y2", 1)])


@lru_cache(maxsize=None)
def plane() -> Space:
    return base_space([("x1", 0), ("x2", 0)])


@lru_cache(maxsize=None)
def chart_2_1() -> Space:
    """Two even coordinates and one odd one."""
    return base_space([("x1", 0), ("x2", 0), ("y1", 1)])


@lru_cache(maxsize=None)
def chart_1_1() -> Space:
    return base_space([("x", 0), ("th", 1)])


def flow(F: Poly, P0: Poly) -> Poly:
    """exp(ad F) P0 for a nilpotent ad F; preserves [[P, P]] = 0."""
    out = P0
    term = P0
    n = 1
    while True:
        term = schouten_sym(F, term).scale(Fraction(1, n))
        if not term.terms:
            return out
        out = out + term
        n += 1


@lru_cache(maxsize=None)
def master_multivector() -> Poly:
    """A curved homotopy Poisson structure with brackets of arities 0 to 3.

    Constant-coefficient P0 moved by the flow of an even function, so
    [[P, P]] = 0 holds by construction.
    """
    S = anticotangent(chart_2_1())
    P0 = S.var("st_x1") * S.var("st_x2") + S.var("st_y1") ** 3
    x1, x2, y1 = S.vars("x1", "x2", "y1")
    F = x1 * x2 * y1 + y1 * x2 ** 2
    return flow(F, P0)


def constant_bivector(space: Space | None = None) -> Poly:
    S = anticotangent(space or plane())
    return S.var("st_x1") * S.var("st_x2")


def linear_bivector() -> Poly:
    """x1 x*_1 x*_2 on the plane: Poisson since every bivector on a plane is."""
    S = anticotangent(plane())
    return S.var("x1") * S.var("st_x1") * S.var("st_x2")


def super_constant_bivector() -> Poly:
    """Constant even bivector on the 2|1 chart mixing even and odd directions."""
    S = anticotangent(chart_2_1())
    return S.var("st_x1") * S.var("st_x2") + S.var("st_y1") ** 2


# ----------------------------------------------------------------------
# homological vector fields on linear charts


@dataclass(frozen=True)
class LinftyFixture:
    name: str
    field: VectorField
    perturbed: VectorField

    @property
    def space(self) -> Space:
        return self.field.space


def lie_algebra_field(space: Space, structure: dict) -> VectorField:
    """Q = -1/2 c^k_ij xi^i xi^j d/dxi^k from [e_i, e_j] = c^k_ij e_k (given for i < j)."""
    xs = [space.var(n) for n in space.names]
    cs: dict[str, Poly] = {}
    for (i, j), out in structure.items():
        for k, c in out.items():
            t = (xs[i] * xs[j]).scale(-c)
            n = space.names[k]
            cs[n] = cs[n] + t if n in cs else t
    return VectorField(space, {k: v for k, v in cs.items() if v.terms}, 1)


SO3 = {(1, 2): {0: 1}, (0, 2): {1: -1}, (0, 1): {2: 1}}
AFFINE = {(0, 1): {1: 1}}


def _perturb(Q: VectorField, name: str, extra: Poly) -> VectorField:
    cs = {Q.space.names[i]: c for i, c in Q.coeffs.items()}
    cs[name] = cs[name] + extra if name in cs else extra
    P = VectorField(Q.space, cs, 1)
    if commutator(P, P).is_zero():
        raise AssertionError("perturbation must break Q^2 = 0")
    return P


@lru_cache(maxsize=None)
def linfty_fixtures() -> tuple[LinftyFixture, ...]:
    """Homological fields on at most four generators, each with a perturbation."""
    out = []
    pt = base_space([])

    g = vector_bundle(pt, [0, 0, 0])
    Q = lie_algebra_field(g, SO3)
    c1, c2 = g.var("xi1"), g.var("xi2")
    out.append(LinftyFixture("so3", Q, _perturb(Q, "xi1", c1 * c2)))

    a = vector_bundle(pt, [0, 0])
    Q = lie_algebra_field(a, AFFINE)
    out.append(LinftyFixture("affine", Q, _perturb(Q, "xi1", a.one)))

    L = base_space([("th", 1), ("w", 0), ("c", 1)])
    w = L.var("w")
    Q = VectorField(L, {"th": L.one - w - w * w, "c": w * w}, 1)
    out.append(LinftyFixture("curved", Q, _perturb(Q, "w", L.var("th"))))

    D = base_space([("th", 1), ("w", 0)])
    Q = VectorField(D, {"w": D.var("th")}, 1)
    out.append(LinftyFixture("differential", Q, _perturb(Q, "th", D.var("w"))))

    E = base_space([("c1", 1), ("c2", 1), ("c3", 1), ("z", 0)])
    Q = lie_algebra_field(E, SO3)
    out.append(LinftyFixture("so3+z", Q, _perturb(Q, "z", E.var("c1"))))
    return tuple(out)


@lru_cache(maxsize=None)
def action_algebroid() -> VectorField:
    """M = line, g = affine algebra acting by e1 -> -x d/dx, e2 -> d/dx."""
    M = base_space([("x", 0)])
    E = vector_bundle(M, [0, 0])
    x, xi1, xi2 = E.vars("x", "xi1", "xi2")
    return VectorField(E, {"x": -(xi1 * x) + xi2, "xi2": -(xi1 * xi2)}, 1)


def flat_copy(Q: VectorField) -> VectorField:
    """The same field on a plain chart with the same coordinate names."""
    V = Q.space
    B = base_space([(v.name, v.parity) for v in V.variables])
    cs = {V.names[i]: substitute(c, {}, B) for i, c in Q.coeffs.items()}
    return VectorField(B, cs, Q.parity)
