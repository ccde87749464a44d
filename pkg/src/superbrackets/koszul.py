"""Koszul brackets on forms from a (higher) Poisson structure.

Charts: for a base M, forms live on ``antitangent(M)`` (x, dx), multivectors
on ``anticotangent(M)`` (x, x*).  The Hamiltonian K_P lives on
``cotangent(antitangent(M))`` with momenta p (of x) and pi (of dx).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .algebra import ANY, Poly, Space, embed, homogeneous_parity, parity_of, partial, restrict_to, substitute
from .brackets import VectorField, de_rham, poisson, schouten_hamiltonian, schouten_sym
from .errors import ChartMismatchError, PreconditionError, ProvenanceError
from .geometry import antitangent, cotangent, mx_transform
from .homotopy import higher_poisson


def _multivector_chart(P: Poly) -> Space:
    S = P.space
    if S.kind != "anticotangent" or S.parent.kind != "base":
        raise ProvenanceError("P must live on the anticotangent chart of a base")
    return S


def koszul_phase_space(base: Space) -> Space:
    """T*(Pi T M) for a base chart."""
    return cotangent(antitangent(base))


def _base_coords(base: Space):
    return [v for v in base.variables if v.role != "parameter"]


def alpha(P: Poly) -> Poly:
    """K_P = (-1)^a p_a dP/dx*_a (x, pi) + dx^a dP/dx^a (x, pi).

    The momentum p_a stands to the left of the derivative; for odd x^a this
    order is what makes K_P agree with (D, P) and intertwine the brackets.
    """
    S = _multivector_chart(P)
    base = S.parent
    T = koszul_phase_space(base)
    to_pi = {"st_" + v.name: T.var("pi_" + v.name) for v in _base_coords(base)}
    out = T.zero
    for v in _base_coords(base):
        dPs = substitute(partial(P, "st_" + v.name), to_pi, T)
        if dPs.terms:
            t = T.var("p_" + v.name) * dPs
            out = out + (-t if v.parity else t)
        dPx = substitute(partial(P, v.name), to_pi, T)
        if dPx.terms:
            out = out + T.var("d" + v.name) * dPx
    return out


def alpha_via_hamiltonian(P: Poly) -> Poly:
    """(D, P) on T*(Pi T*M), carried to T*(Pi T M) by the inverse Mackenzie-Xu relabeling."""
    S = _multivector_chart(P)
    lift = cotangent(S)
    DP = poisson(schouten_hamiltonian(S), embed(P, lift))
    mx = mx_transform(koszul_phase_space(S.parent))
    return mx.backward(DP)


koszul_hamiltonian = alpha


@dataclass(frozen=True)
class HigherPoissonStructure:
    P: Poly

    def __post_init__(self):
        _multivector_chart(self.P)
        if parity_of(self.P) not in (0, ANY):
            raise PreconditionError("a higher Poisson structure is even")

    @cached_property
    def self_commutator(self) -> Poly:
        return schouten_sym(self.P, self.P)

    @property
    def valid(self) -> bool:
        return not self.self_commutator.terms

    @cached_property
    def K(self) -> Poly:
        return alpha(self.P)

    @property
    def base(self) -> Space:
        return self.P.space.parent

    @property
    def forms(self) -> Space:
        return antitangent(self.base)


def _structure(P) -> HigherPoissonStructure:
    return P if isinstance(P, HigherPoissonStructure) else HigherPoissonStructure(P)


def higher_koszul(P, forms: Sequence[Poly]) -> Poly:
    """[w_1, ..., w_n]_P = ( ... (K_P, w_1), ..., w_n) with all momenta set to zero."""
    st = _structure(P)
    T = st.K.space
    A = st.forms
    cur = st.K
    for w in forms:
        if w.space != A:
            if w.space == st.base:
                w = embed(w, A)
            else:
                raise ChartMismatchError("forms must live on the antitangent chart")
        cur = poisson(cur, embed(w, T))
        if not cur.terms:
            break
    return restrict_to(cur, A)


def koszul_bracket(P, w: Poly, t: Poly) -> Poly:
    return higher_koszul(P, [w, t])


# ----------------------------------------------------------------------
# quadratic structures


def quadratic_coefficients(P: Poly) -> dict[tuple[str, str], Poly]:
    """P^{ab}(x) with P = 1/2 P^{ab} x*_b x*_a (requires P fiberwise quadratic)."""
    S = _multivector_chart(P)
    base = S.parent
    moms = S.momentum_indices()
    lo, hi = P.degree_in(moms)
    if P.terms and (lo != 2 or hi != 2):
        raise PreconditionError("P is not fiberwise quadratic")
    coords = _base_coords(base)
    out = {}
    for a in coords:
        for b in coords:
            c = partial(partial(P, "st_" + b.name), "st_" + a.name)
            if (a.parity + b.parity) & 1:
                c = -c
            c = restrict_to(c, base)
            if c.terms:
                out[(a.name, b.name)] = c
    return out


def quadratic_from_coefficients(S: Space, coeffs: dict[tuple[str, str], Poly]) -> Poly:
    out = S.zero
    for (a, b), c in coeffs.items():
        out = out + embed(c, S) * S.var("st_" + b) * S.var("st_" + a)
    return out.scale(Fraction(1, 2))


def lichnerowicz(P: Poly, X: Poly) -> Poly:
    """d_P X = [[P, X]]."""
    return schouten_sym(P, X)


def lichnerowicz_field(P: Poly) -> VectorField:
    """d_P for any even P: sum_a (-1)^a (dP/dx*_a d/dx^a + dP/dx^a d/dx*_a)."""
    S = _multivector_chart(P)
    cs = {}
    for v in _base_coords(S.parent):
        s = -1 if v.parity else 1
        c1 = partial(P, "st_" + v.name).scale(s)
        c2 = partial(P, v.name).scale(s)
        if c1.terms:
            cs[v.name] = c1
        if c2.terms:
            cs["st_" + v.name] = c2
    return VectorField(S, cs, 1)


def lichnerowicz_quadratic_field(P: Poly) -> VectorField:
    """d_P for quadratic P = 1/2 P^{ab} x*_b x*_a, written through its coefficients.

    d_P = sum (-1)^(a + b(a+1)) P^{ba} x*_b d/dx^a + (-1)^a 1/2 d_a P^{bc} x*_c x*_b d/dx*_a,
    which is P^{ba} x*_b d/dx^a + 1/2 d_a P^{bc} x*_c x*_b d/dx*_a on an even chart.
    """
    S = _multivector_chart(P)
    base = S.parent
    coeffs = quadratic_coefficients(P)
    coords = _base_coords(base)
    cs: dict[str, Poly] = {}

    def add(key, val):
        if val.terms:
            cs[key] = cs[key] + val if key in cs else val

    for a in coords:
        for b in coords:
            c = coeffs.get((b.name, a.name))
            if c is not None:
                t = embed(c, S) * S.var("st_" + b.name)
                add(a.name, -t if (a.parity + b.parity * (a.parity + 1)) & 1 else t)
        for (b, c), Pbc in coeffs.items():
            d = partial(embed(Pbc, S), a.name)
            if d.terms:
                t = (d * S.var("st_" + c) * S.var("st_" + b)).scale(Fraction(1, 2))
                add("st_" + a.name, -t if a.parity else t)
    return VectorField(S, cs, 1)


def raise_indices(P: Poly, w: Poly) -> Poly:
    """phi*_P: the algebra map fixing base functions with dx^a -> [[P, x^a]]."""
    S = _multivector_chart(P)
    base = S.parent
    A = antitangent(base)
    if w.space != A:
        if w.space == base:
            w = embed(w, A)
        else:
            raise ChartMismatchError("raise_indices acts on forms")
    quadratic_coefficients(P)
    images = {}
    for v in _base_coords(base):
        images["d" + v.name] = schouten_sym(P, S.var(v.name))
    return substitute(w, images, S)


@dataclass
class ClassicalKoszulReport:
    checks: dict[str, bool]
    residuals: dict[str, int]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "residuals": dict(self.residuals)}


def classical_koszul_check(P: Poly, test_functions: Sequence[Poly] = ()) -> ClassicalKoszulReport:
    """Coordinate identities [x^a,x^b]=0, [x^a,dx^b]=-P^{ab}, [dx^a,dx^b]=dP^{ab},
    plus the initial conditions on the given base functions."""
    st = _structure(P)
    coeffs = quadratic_coefficients(st.P)
    base = st.base
    A = st.forms
    d = de_rham(A)
    names = [v.name for v in _base_coords(base)]
    checks: dict[str, bool] = {}
    residuals: dict[str, int] = {}

    def record(key, lhs, rhs):
        r = lhs - rhs
        checks[key] = not r.terms
        residuals[key] = len(r.terms)

    for a in names:
        for b in names:
            Pab = embed(coeffs.get((a, b), base.zero), A)
            record(f"[{a},{b}]", koszul_bracket(st, A.var(a), A.var(b)), A.zero)
            record(f"[{a},d{b}]", koszul_bracket(st, A.var(a), A.var("d" + b)), -Pab)
            record(f"[d{a},d{b}]", koszul_bracket(st, A.var("d" + a), A.var("d" + b)), d(Pab))
    fs = list(test_functions)
    for i, f in enumerate(fs):
        for j, g in enumerate(fs):
            fA, gA = embed(f, A), embed(g, A)
            sgn = -1 if homogeneous_parity(f) else 1
            pb = embed(higher_poisson(st.P, [f, g]), A)
            record(f"[f{i},f{j}]", koszul_bracket(st, fA, gA), A.zero)
            record(f"[f{i},df{j}]", koszul_bracket(st, fA, d(gA)), pb.scale(sgn))
            record(f"[df{i},df{j}]", koszul_bracket(st, d(fA), d(gA)), d(pb).scale(-sgn))
    return ClassicalKoszulReport(checks, residuals)
