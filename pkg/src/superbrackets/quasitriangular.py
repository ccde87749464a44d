"""Argument shift of odd master Hamiltonians and (quasi-)triangular bialgebroids.

Given an odd H(x, p) on a cotangent chart and an even function r(x) on the
base, the shifted Hamiltonian is H'(x, p) = H(x, p + t dr/dx).  The shift is
a canonical transformation, so it preserves the even bracket; in particular
(H, H) = 0 implies (H', H') = 0 for every r.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import ANY, Poly, Space, embed, parity_of, partial, restrict_to, substitute
from .brackets import VectorField, commutator, linear_hamiltonian, poisson
from .errors import ChartMismatchError, ParityError, PreconditionError, ProvenanceError
from .geometry import mx_transform, weight_of


@dataclass(frozen=True)
class ShiftDatum:
    """An odd Hamiltonian H on T*N, an even r on N, and an optional parameter name t.

    ``t`` names a variable of role ``parameter`` on N (see
    ``geometry.with_parameters``); when omitted the shift uses t = 1.
    """

    H: Poly
    r: Poly
    t: str | None = None

    def __post_init__(self):
        T = self.H.space
        if T.kind != "cotangent":
            raise ProvenanceError("H must live on a cotangent chart")
        if parity_of(self.H) not in (1, ANY):
            raise ParityError("H must be odd")
        r = self.r
        if r.space != T.parent:
            if r.space == T:
                if r.support() & set(T.momentum_indices()):
                    raise PreconditionError("r must not depend on the momenta")
            else:
                raise ChartMismatchError("r must live on the base of H's chart")
        if parity_of(r) not in (0, ANY):
            raise PreconditionError("r must be even")
        if self.t is not None:
            v = T.parent.variable(self.t)
            if v.role != "parameter" or v.parity:
                raise PreconditionError("t must be an even parameter variable")

    @property
    def phase_space(self) -> Space:
        return self.H.space

    @property
    def r_lifted(self) -> Poly:
        return embed(self.r, self.phase_space)


def gradient_images(datum: ShiftDatum) -> dict[str, Poly]:
    """p_a -> p_a + t dr/dx^a for every momentum of the chart."""
    T = datum.phase_space
    r = datum.r_lifted
    tvar = T.var(datum.t) if datum.t else None
    images = {}
    for c, m, _ in T.pairs:
        g = partial(r, c)
        if not g.terms:
            continue
        if tvar is not None:
            g = tvar * g
        images[T.variables[m].name] = T.var(T.variables[m].name) + g
    return images


def shift_function(datum: ShiftDatum, F: Poly) -> Poly:
    """Apply the gradient shift to any function on the phase space."""
    return substitute(F, gradient_images(datum))


def shift(datum: ShiftDatum) -> Poly:
    """H'(x, p) = H(x, p + t dr/dx)."""
    return shift_function(datum, datum.H)


def master_equation_residual(datum: ShiftDatum) -> Poly:
    """H(x, t dr/dx): the shifted Hamiltonian on the zero section."""
    T = datum.phase_space
    return restrict_to(shift(datum), T.parent)


def generalized_ybe_residual(datum: ShiftDatum) -> Poly:
    """(H, H(x, t dr/dx)); zero means the curvature of H' is central."""
    T = datum.phase_space
    return poisson(datum.H, embed(master_equation_residual(datum), T))


def self_commutator(H: Poly) -> Poly:
    return poisson(H, H)


def coboundary_decompose(datum: ShiftDatum) -> tuple[Poly, Poly, Poly]:
    """(H, t (H, r), t^2/2 {r, r}_H) for H quadratic in the momenta; the sum is H'."""
    T = datum.phase_space
    lo, hi = datum.H.degree_in(T.momentum_indices())
    if datum.H.terms and (lo != 2 or hi != 2):
        raise PreconditionError("coboundary decomposition needs H quadratic in the momenta")
    r = datum.r_lifted
    Hr = poisson(datum.H, r)
    rr = poisson(Hr, r).scale(Fraction(1, 2))
    if datum.t:
        tv = T.var(datum.t)
        Hr = tv * Hr
        rr = tv * tv * rr
    return datum.H, Hr, rr


def classify(datum: ShiftDatum) -> str:
    """'triangular' when the master equation holds, 'quasi-triangular' when only the
    generalized Yang-Baxter residual vanishes, otherwise 'curved'."""
    if not master_equation_residual(datum).terms:
        return "triangular"
    if not generalized_ybe_residual(datum).terms:
        return "quasi-triangular"
    return "curved"


@dataclass
class BialgebroidReport:
    """Output of :func:`build_quasitriangular_bialgebroid`.

    Hamiltonians with suffix ``_dual`` live on T*(Pi E*); the others on T*(Pi E).
    """

    H_E: Poly
    H_E_dual: Poly
    r: Poly
    H_Estar_dual: Poly
    H_shifted_dual: Poly
    compatibility: Poly
    master_residual: Poly
    ybe_residual: Poly
    weights: dict = field(default_factory=dict)
    H_Estar: Poly | None = None
    H_shifted: Poly | None = None

    @property
    def compatible(self) -> bool:
        return not self.compatibility.terms

    @property
    def kind(self) -> str:
        if not self.master_residual.terms:
            return "triangular"
        if not self.ybe_residual.terms:
            return "quasi-triangular"
        return "curved"


def _fmt_weight(w):
    return list(w) if isinstance(w, tuple) else str(w)


def build_quasitriangular_bialgebroid(Q_E: VectorField, r: Poly) -> BialgebroidReport:
    """Lift Q_E to H_E on T*(Pi E), carry it to T*(Pi E*), and shift by r.

    ``r`` is an even function on the Pi E* chart.  Weights are reported on
    the T*(Pi E) side, where fibers have weight (0, 1) and their momenta (1, 0).
    """
    if Q_E.parity != 1:
        raise ParityError("Q_E must be odd")
    if not commutator_is_zero(Q_E):
        raise PreconditionError("Q_E is not homological")
    H_E = linear_hamiltonian(Q_E)
    T = H_E.space
    mx = mx_transform(T)
    Tstar = mx.target
    if r.space != Tstar.parent:
        raise ChartMismatchError("r must live on the dual chart Pi E*")
    if parity_of(r) not in (0, ANY):
        raise PreconditionError("r must be even")
    H_dual = mx.forward(H_E)
    datum = ShiftDatum(H_dual, r)
    r_dual = datum.r_lifted
    H_Estar_dual = poisson(H_dual, r_dual)
    compat = poisson(H_dual, H_Estar_dual)
    H_shift = shift(datum)
    r_back = mx.backward(r_dual)
    H_Estar = mx.backward(H_Estar_dual)
    weights = {
        "H_E": _fmt_weight(weight_of(H_E)),
        "r": _fmt_weight(weight_of(r_back)),
        "H_Estar": _fmt_weight(weight_of(H_Estar)),
    }
    return BialgebroidReport(
        H_E=H_E,
        H_E_dual=H_dual,
        r=r,
        H_Estar_dual=H_Estar_dual,
        H_shifted_dual=H_shift,
        compatibility=compat,
        master_residual=master_equation_residual(datum),
        ybe_residual=generalized_ybe_residual(datum),
        weights=weights,
        H_Estar=H_Estar,
        H_shifted=mx.backward(H_shift),
    )


def commutator_is_zero(Q: VectorField) -> bool:
    return commutator(Q, Q).is_zero()
