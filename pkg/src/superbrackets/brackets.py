"""Canonical brackets, vector fields, de Rham differential, interior products.

The even bracket on a cotangent chart is

    (F, G) = (-1)^(F a) ((-1)^a dF/dp_a dG/dx^a - dF/dx^a dG/dp_a)

summed over conjugate pairs (x^a, p_a), with left derivatives.  The odd
(Schouten) bracket on an anticotangent chart comes from the derived bracket
``((D, P), Q)`` computed on the cotangent of that chart, with the
Hamiltonian D = sum_a (-1)^a pi^a p_a.  The derived bracket is graded
symmetric (``schouten_sym``); ``schouten`` is its antisymmetric form
(-1)^P ((D, P), Q).  Both agree when P is even.  This D is the image of the de Rham
Hamiltonian dx^a p_a under the Mackenzie-Xu relabeling, which is what makes
the bracket-intertwining property of ``koszul.alpha`` exact for odd base
coordinates as well.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from . import conventions
from .algebra import (
    MIXED,
    Poly,
    Space,
    embed,
    homogeneous_parity,
    parity_of,
    partial,
    restrict_to,
)
from .errors import ChartMismatchError, ParityError, PreconditionError, ProvenanceError
from .geometry import antitangent, cotangent


def _same_space(a: Poly, b: Poly):
    if a.space is not b.space and a.space != b.space:
        raise ChartMismatchError(f"{a.space!r} vs {b.space!r}")


# ----------------------------------------------------------------------
# even canonical bracket


def poisson(F: Poly, G: Poly) -> Poly:
    """Canonical even Poisson bracket on a chart with even conjugate pairs.

    Inhomogeneous ``F`` is split into parity parts and the bracket is
    extended bilinearly.
    """
    _same_space(F, G)
    space = F.space
    pairs = [p for p in space.pairs if p[2] == 0]
    if not pairs:
        raise ProvenanceError(f"{space!r} has no even conjugate pairs")
    out = space.zero
    for fp, Fp in F.parity_parts().items():
        for c, m, _ in pairs:
            a = space.parities[c]
            dFp = partial(Fp, m)
            dFx = partial(Fp, c)
            term = space.zero
            if dFp.terms:
                dGx = partial(G, c)
                if dGx.terms:
                    t = dFp * dGx
                    term = term + (-t if a else t)
            if dFx.terms:
                dGp = partial(G, m)
                if dGp.terms:
                    term = term - dFx * dGp
            if term.terms:
                out = out + (-term if (fp * a) & 1 else term)
    return out


# ----------------------------------------------------------------------
# odd canonical bracket


@lru_cache(maxsize=None)
def _schouten_data(space: Space, conv) -> tuple[Space, Poly, tuple[int, ...]]:
    odd_pairs = [p for p in space.pairs if p[2] == 1]
    if not odd_pairs:
        raise ProvenanceError(f"{space!r} is not an anticotangent chart")
    lift = cotangent(space)
    D = lift.zero
    for c, m, _ in odd_pairs:
        x = space.variables[c]
        p = lift.var(lift.variables[lift.pair_of(c)[1]].name)
        pi = lift.var(lift.variables[lift.pair_of(m)[1]].name)
        term = pi * p
        D = D + (-term if x.parity else term)
    D = D.scale(conv.d_sign)
    moms = lift.momentum_indices()
    return lift, D, moms


def schouten_hamiltonian(space: Space) -> Poly:
    """The odd Hamiltonian D on T*(space) generating the Schouten bracket."""
    return _schouten_data(space, conventions.current())[1]


def schouten_sym(P: Poly, Q: Poly) -> Poly:
    """Derived Schouten bracket ((D, P), Q): the symmetric (Lie antialgebra) convention.

    This is the bracket every derived construction iterates (higher Poisson
    brackets, the Lichnerowicz differential, the alpha map).
    """
    _same_space(P, Q)
    space = P.space
    lift, D, moms = _schouten_data(space, conventions.current())
    r = poisson(poisson(D, embed(P, lift)), embed(Q, lift))
    return embed(r, space)


def schouten(P: Poly, Q: Poly) -> Poly:
    """Canonical Schouten bracket, antisymmetric convention: (-1)^P ((D, P), Q).

    Agrees with :func:`schouten_sym` whenever P is even.
    """
    out = P.space.zero
    for p, Pp in P.parity_parts().items():
        b = schouten_sym(Pp, Q)
        out = out + (-b if p else b)
    return out


def to_symmetric(bracket):
    """Convert an antisymmetric odd bracket into the symmetric one: [a, b]' = (-1)^a [a, b]."""

    def converted(a: Poly, b: Poly) -> Poly:
        out = a.space.zero
        for p, ap in a.parity_parts().items():
            r = bracket(ap, b)
            out = out + (-r if p else r)
        return out

    return converted


def canonical_bracket(F: Poly, G: Poly) -> Poly:
    """Even bracket on a cotangent chart, odd bracket on an anticotangent chart."""
    bp = F.space.bracket_parity()
    if bp == 0:
        return poisson(F, G)
    if bp == 1:
        return schouten_sym(F, G)
    raise ProvenanceError(f"{F.space!r} carries no canonical bracket")


def split_bracket(bracket, F: Poly, G: Poly) -> Poly:
    """Bilinear extension of a bracket defined on homogeneous inputs."""
    out = F.space.zero
    for Fp in F.parity_parts().values():
        for Gp in G.parity_parts().values():
            out = out + bracket(Fp, Gp)
    return out


# ----------------------------------------------------------------------
# vector fields


class VectorField:
    """Parity-homogeneous derivation X = X^z d/dz (coefficients on the left).

    Acting on f: X(f) = sum_z X^z * (d f / d z) with left derivatives.
    """

    __slots__ = ("space", "parity", "coeffs")

    def __init__(self, space: Space, coeffs: Mapping, parity: int | None = None):
        self.space = space
        cs = {}
        for k, v in coeffs.items():
            i = space.index[k] if isinstance(k, str) else k
            if not isinstance(v, Poly):
                v = space.const(v)
            if v.space != space:
                raise ChartMismatchError("vector field coefficient on a different chart")
            if v.terms:
                cs[i] = cs[i] + v if i in cs else v
        self.coeffs = {i: c for i, c in cs.items() if c.terms}
        found = set()
        for i, c in self.coeffs.items():
            p = parity_of(c)
            if p == MIXED:
                raise ParityError("inhomogeneous vector field coefficient")
            found.add((p + space.parities[i]) % 2)
        if len(found) > 1:
            raise ParityError("vector field is not parity-homogeneous")
        if parity is None:
            parity = found.pop() if found else 0
        elif found and found.pop() != parity:
            raise ParityError("declared parity does not match coefficients")
        self.parity = parity

    def __call__(self, f: Poly) -> Poly:
        if f.space != self.space:
            raise ChartMismatchError("vector field applied to a function on another chart")
        out = self.space.zero
        for i, c in self.coeffs.items():
            d = partial(f, i)
            if d.terms:
                out = out + c * d
        return out

    apply = __call__

    def coefficient(self, z) -> Poly:
        i = self.space.index[z] if isinstance(z, str) else z
        return self.coeffs.get(i, self.space.zero)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        if self.space != other.space:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.parity == other.parity and self.coeffs.keys() == other.coeffs.keys() and all(
            self.coeffs[k] == other.coeffs[k] for k in self.coeffs
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.space != other.space:
            raise ChartMismatchError("fields on different charts")
        cs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            cs[k] = cs[k] + v if k in cs else v
        par = self.parity if self.coeffs else other.parity
        return VectorField(self.space, cs, par if cs else None)

    def __neg__(self):
        return VectorField(self.space, {k: -v for k, v in self.coeffs.items()}, self.parity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "VectorField":
        return VectorField(self.space, {k: v.scale(c) for k, v in self.coeffs.items()}, self.parity)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def left_multiply(self, f: Poly) -> "VectorField":
        """f * X (coefficients multiplied on the left)."""
        p = homogeneous_parity(f)
        return VectorField(self.space, {k: f * v for k, v in self.coeffs.items()}, (p + self.parity) % 2)

    def __repr__(self):
        if not self.coeffs:
            return "VectorField(0)"
        parts = [f"({c}) d/d{self.space.variables[i].name}" for i, c in sorted(self.coeffs.items())]
        return "VectorField(" + " + ".join(parts) + ")"

    def square(self) -> "VectorField":
        """X^2 = 1/2 [X, X] for odd X (a vector field)."""
        if self.parity != 1:
            raise ParityError("only odd fields square to a vector field")
        return commutator(self, self).scale(Fraction(1, 2))


def commutator(X: VectorField, Y: VectorField) -> VectorField:
    """Graded commutator [X, Y] = XY - (-1)^(X Y) YX."""
    if X.space != Y.space:
        raise ChartMismatchError("fields on different charts")
    space = X.space
    sign = -1 if (X.parity * Y.parity) & 1 else 1
    cs = {}
    for i in set(X.coeffs) | set(Y.coeffs):
        c = X(Y.coefficient(i)) - Y(X.coefficient(i)).scale(sign)
        if c.terms:
            cs[i] = c
    return VectorField(space, cs, (X.parity + Y.parity) % 2)


def multiplication_commutator(X: VectorField, f: Poly) -> Poly:
    """[X, f] as an operator equals multiplication by X(f)."""
    return X(f)


def hamiltonian_field(H: Poly) -> VectorField:
    """The derivation (H, .) of the canonical bracket of H's chart."""
    space = H.space
    parity = homogeneous_parity(H)
    bp = space.bracket_parity()
    if bp is None:
        raise ProvenanceError("Hamiltonian fields need a chart with conjugate pairs")
    cs = {}
    for i, v in enumerate(space.variables):
        c = canonical_bracket(H, space.var(v.name))
        if c.terms:
            cs[i] = c
    return VectorField(space, cs, (parity + bp) % 2)


def linear_hamiltonian(X: VectorField) -> Poly:
    """X . p = X^a p_a on the cotangent of X's chart."""
    T = cotangent(X.space)
    out = T.zero
    for i, c in X.coeffs.items():
        v = X.space.variables[i]
        pair = T.pair_of(T.index[v.name])
        if pair is None:
            raise ProvenanceError(f"no momentum for {v.name!r}")
        out = out + embed(c, T) * T.var(T.variables[pair[1]].name)
    return out


def field_from_linear_hamiltonian(H: Poly) -> VectorField:
    """Inverse of ``linear_hamiltonian``: read X^a off X^a p_a."""
    T = H.space
    if T.kind != "cotangent":
        raise ProvenanceError("expected a Hamiltonian on a cotangent chart")
    base = T.parent
    moms = T.momentum_indices()
    lo, hi = H.degree_in(moms)
    if H.terms and (lo != 1 or hi != 1):
        raise PreconditionError("Hamiltonian is not linear in the momenta")
    cs = {}
    for c, m, _ in T.pairs:
        coeff = partial(H, m)
        # X^a p_a: moving p_a to the front passes X^a
        sign_parity = 0
        if coeff.terms:
            pa = T.parities[m]
            sign_parity = (homogeneous_parity(coeff) * pa) & 1
        coeff = restrict_to(coeff, base)
        if coeff.terms:
            cs[T.variables[c].name] = -coeff if sign_parity else coeff
    return VectorField(base, cs, None)


def embed_field(X: VectorField, target: Space) -> VectorField:
    return VectorField(
        target,
        {X.space.variables[i].name: embed(c, target) for i, c in X.coeffs.items()},
        X.parity,
    )


# ----------------------------------------------------------------------
# forms


def de_rham(space: Space) -> VectorField:
    """d = dx^a d/dx^a on an antitangent chart."""
    if space.kind != "antitangent":
        raise ProvenanceError("de Rham differential lives on an antitangent chart")
    base = space.parent
    cs = {}
    for v in base.variables:
        if v.role == "parameter":
            continue
        cs[v.name] = space.var("d" + v.name)
    return VectorField(space, cs, 1)


def interior(X: VectorField) -> VectorField:
    """i_X = (-1)^X X^a d/d(dx^a) on the antitangent chart of X's chart."""
    sign = conventions.current().interior_sign * (-1 if X.parity else 1)
    A = antitangent(X.space)
    cs = {}
    for i, c in X.coeffs.items():
        v = X.space.variables[i]
        cs["d" + v.name] = embed(c, A).scale(sign)
    return VectorField(A, cs, (X.parity + 1) % 2)
