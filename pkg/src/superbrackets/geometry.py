"""Charts for M and its neighbour bundles, bi-weights, Mackenzie-Xu relabeling.

Naming scheme for the adjoined variables (ASCII only):

=================  ============================  ==================
variable           meaning                       built by
=================  ============================  ==================
``x1``, ``xi1``    base / fiber coordinates      user, ``vector_bundle``
``p_x1``           momentum of ``x1``            ``cotangent``
``st_x1``          antimomentum x*_1             ``anticotangent``
``dx1``            differential                  ``antitangent``
``pi_x1``          momentum of ``dx1``           ``cotangent``
``pi_xi1``         momentum of a fiber ``xi1``   ``cotangent``
``pi_st_x1``       momentum of ``st_x1``         ``cotangent``
``eta1``           fiber of the dual bundle      ``dual_bundle``
=================  ============================  ==================

Weights follow the double-vector-bundle bookkeeping: base coordinates have
weight (0, 0), fiber coordinates (0, 1), and in a cotangent bundle the
momentum of a (a, b)-coordinate has weight (1 - a, 1 - b), so that the
symplectic form has weight (1, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import conventions
from .algebra import ANY, MIXED, Poly, Space, Variable, embed, substitute
from .errors import ProvenanceError

FIBER_ROLES = ("fiber", "differential", "antimomentum")


def base_space(variables: Iterable[tuple[str, int]] | Iterable[Variable]) -> Space:
    """A plain chart.  Accepts ``Variable`` objects or ``(name, parity)`` pairs."""
    vs = []
    for v in variables:
        if isinstance(v, Variable):
            vs.append(v)
        else:
            name, parity = v
            vs.append(Variable(name, int(parity), "base"))
    return Space(vs, (), ("base",))


def with_parameters(space: Space, params: Iterable[tuple[str, int]]) -> Space:
    """Base chart with extra formal scalar parameters (no momenta are ever attached)."""
    if space.kind != "base":
        raise ProvenanceError("parameters can only be adjoined to a base chart")
    extra = [Variable(n, int(p), "parameter") for n, p in params]
    return Space(space.variables + tuple(extra), (), ("base",))


def _momentum_name(v: Variable) -> str:
    if v.role == "differential" and v.name.startswith("d"):
        return "pi_" + v.name[1:]
    if v.role in ("fiber", "antimomentum"):
        return "pi_" + v.name
    return "p_" + v.name


def _momentum_role(v: Variable) -> str:
    if v.role == "differential":
        return "differential-momentum"
    if v.role in ("fiber", "antimomentum"):
        return "fiber-momentum"
    return "momentum"


def _is_bundle_like(space: Space) -> bool:
    return any(v.role in FIBER_ROLES for v in space.variables)


def _check_unpaired_for_lift(space: Space, what: str):
    if any(bp == 0 for _, _, bp in space.pairs):
        raise ProvenanceError(f"{what} of a space that already has even pairs is not supported")


@lru_cache(maxsize=None)
def cotangent(space: Space) -> Space:
    """T*S: adjoin a momentum of equal parity for each variable; pairs are even."""
    _check_unpaired_for_lift(space, "cotangent")
    vs = list(space.variables)
    pairs = []
    for i, v in enumerate(space.variables):
        if v.role == "parameter":
            continue
        w = (1 - v.weight[0], 1 - v.weight[1])
        vs.append(Variable(_momentum_name(v), v.parity, _momentum_role(v), w))
        pairs.append((i, len(vs) - 1, 0))
    return Space(vs, pairs, ("cotangent", space))


@lru_cache(maxsize=None)
def anticotangent(space: Space) -> Space:
    """Pi T*S: adjoin antimomenta of opposite parity; pairs are odd."""
    if space.pairs:
        raise ProvenanceError("anticotangent of a phase space is not supported")
    bundle = _is_bundle_like(space)
    vs = list(space.variables)
    pairs = []
    for i, v in enumerate(space.variables):
        if v.role == "parameter":
            continue
        # on a plain base, Pi T*M is the bundle Pi(T*M): antimomenta are fibers
        w = (1 - v.weight[0], 1 - v.weight[1]) if bundle else (0, 1)
        vs.append(Variable("st_" + v.name, 1 - v.parity, "antimomentum", w))
        pairs.append((i, len(vs) - 1, 1))
    return Space(vs, pairs, ("anticotangent", space))


@lru_cache(maxsize=None)
def antitangent(space: Space) -> Space:
    """Pi T S: adjoin differentials d<x> of opposite parity; no pairs."""
    if space.pairs or space.kind != "base":
        raise ProvenanceError("antitangent is only defined here for a base chart")
    vs = list(space.variables)
    for v in space.variables:
        if v.role == "parameter":
            continue
        vs.append(Variable("d" + v.name, 1 - v.parity, "differential", (0, 1)))
    return Space(vs, (), ("antitangent", space))


@lru_cache(maxsize=None)
def _bundle(space: Space, parities: tuple[int, ...], names: tuple[str, ...], kind: str) -> Space:
    if space.pairs or space.kind != "base":
        raise ProvenanceError("vector bundles are built over a base chart")
    vs = list(space.variables)
    for n, p in zip(names, parities):
        vs.append(Variable(n, p, "fiber", (0, 1)))
    return Space(vs, (), (kind, space, parities))


def vector_bundle(
    space: Space,
    fiber_parities: Sequence[int],
    shifted: bool = True,
    names: Sequence[str] | None = None,
) -> Space:
    """E (or Pi E when ``shifted``) over ``space``.

    ``fiber_parities`` are the parities of the fibers of E; with ``shifted``
    each fiber coordinate has the opposite parity.
    """
    par = tuple((int(p) + (1 if shifted else 0)) % 2 for p in fiber_parities)
    if names is None:
        stem = "xi" if shifted else "e"
        names = tuple(f"{stem}{i + 1}" for i in range(len(par)))
    return _bundle(space, par, tuple(names), "bundle")


def dual_bundle(space: Space, fiber_parities: Sequence[int], names: Sequence[str] | None = None) -> Space:
    """Chart of a dual bundle with fiber coordinates ``eta<i>`` of the given (actual) parities."""
    par = tuple(int(p) % 2 for p in fiber_parities)
    if names is None:
        names = tuple(f"eta{i + 1}" for i in range(len(par)))
    return _bundle(space, par, tuple(names), "dual-bundle")


# ----------------------------------------------------------------------
# weights


def weight_of(f: Poly):
    """Common bi-weight of all terms; ``ANY`` for zero, ``MIXED`` otherwise."""
    if not f.terms:
        return ANY
    ws = {f.space.monomial_weight(m) for m in f.terms}
    return ws.pop() if len(ws) == 1 else MIXED


def weight_components(f: Poly) -> dict[tuple[int, int], Poly]:
    parts: dict = {}
    for m, c in f.terms.items():
        parts.setdefault(f.space.monomial_weight(m), {})[m] = c
    return {w: Poly(f.space, t) for w, t in sorted(parts.items())}


# ----------------------------------------------------------------------
# Mackenzie-Xu


@dataclass(frozen=True)
class MXMap:
    """Invertible linear relabeling between two phase spaces.

    ``forward`` / ``backward`` map variable names of the source / target to
    polynomials on the other chart.  ``signs`` records sigma for each fiber.
    """

    source: Space
    target: Space
    forward_images: tuple
    backward_images: tuple
    signs: tuple

    def forward(self, f: Poly) -> Poly:
        return substitute(embed(f, self.source), dict(self.forward_images), self.target)

    def backward(self, g: Poly) -> Poly:
        return substitute(embed(g, self.target), dict(self.backward_images), self.source)

    __call__ = forward


def _dual_fiber_name(v: Variable) -> tuple[str, str]:
    if v.role == "differential" and v.name.startswith("d"):
        return "st_" + v.name[1:], "antimomentum"
    if v.role == "antimomentum" and v.name.startswith("st_"):
        return "d" + v.name[3:], "differential"
    if v.name.startswith("xi"):
        return "eta" + v.name[2:], "fiber"
    if v.name.startswith("eta"):
        return "xi" + v.name[3:], "fiber"
    if v.name.startswith("e") and v.name[1:].isdigit():
        return "eta" + v.name[1:], "fiber"
    return v.name + "_dual", "fiber"


def _dual_total_space(fiber_space: Space) -> Space:
    """The chart Pi E* matching a chart Pi E (and conversely)."""
    kind = fiber_space.kind
    base = fiber_space.parent
    if kind == "antitangent":
        return anticotangent(base)
    if kind == "anticotangent":
        return antitangent(base)
    fibers = [v for v in fiber_space.variables if v.role == "fiber"]
    names = tuple(_dual_fiber_name(v)[0] for v in fibers)
    pars = tuple(v.parity for v in fibers)
    if kind == "bundle":
        return _bundle(base, pars, names, "dual-bundle")
    if kind == "dual-bundle":
        return _bundle(base, pars, names, "bundle")
    raise ProvenanceError(f"no dual for a chart of kind {kind!r}")


def _odd_dual_total_space(fiber_space: Space) -> Space:
    """For the odd analog: E -> Pi E* (fiber parities flip)."""
    kind = fiber_space.kind
    base = fiber_space.parent
    if kind not in ("bundle", "dual-bundle"):
        raise ProvenanceError("the odd Mackenzie-Xu analog needs a vector bundle chart")
    fibers = [v for v in fiber_space.variables if v.role == "fiber"]
    names = tuple(_dual_fiber_name(v)[0] for v in fibers)
    pars = tuple(1 - v.parity for v in fibers)
    return _bundle(base, pars, names, "dual-bundle" if kind == "bundle" else "bundle")


def _fiber_pairs(space: Space):
    for c, m, bp in space.pairs:
        if space.variables[c].role in FIBER_ROLES:
            yield c, m, bp


def mx_sigma(fiber_parity: int, bracket_parity: int) -> int:
    """The sign sigma making the relabeling a symplectomorphism (before mutation)."""
    if bracket_parity == 0:
        # (xi, pi) = -(-1)^xi  must equal  (sigma*zeta, eta) = sigma
        return -1 if fiber_parity == 0 else 1
    # odd pairs: the Schouten generator brackets force sigma = -1 for both parities
    return -1


@lru_cache(maxsize=None)
def _mx_cached(space: Space, conv) -> MXMap:
    if space.kind == "cotangent":
        fiber_space = space.parent
        target_fiber = _dual_total_space(fiber_space)
        target = cotangent(target_fiber)
        bp = 0
    elif space.kind == "anticotangent":
        fiber_space = space.parent
        target_fiber = _odd_dual_total_space(fiber_space)
        target = anticotangent(target_fiber)
        bp = 1
    else:
        raise ProvenanceError("mx_transform needs a cotangent (or anticotangent) of a bundle chart")
    fwd = {}
    bwd = {}
    signs = []
    src_pairs = list(_fiber_pairs(space))
    tgt_pairs = list(_fiber_pairs(target))
    if len(src_pairs) != len(tgt_pairs) or not src_pairs:
        raise ProvenanceError("chart has no fiber directions to exchange")
    for (c, m, _), (tc, tm, _) in zip(src_pairs, tgt_pairs):
        xi = space.variables[c]
        pi = space.variables[m]
        eta = target.variables[tc]
        zeta = target.variables[tm]
        sigma = conv.mx_sign * mx_sigma(xi.parity, bp)
        signs.append((xi.name, sigma))
        fwd[pi.name] = target.var(eta.name)
        fwd[xi.name] = target.var(zeta.name).scale(sigma)
        bwd[eta.name] = space.var(pi.name)
        bwd[zeta.name] = space.var(xi.name).scale(sigma)
    return MXMap(space, target, tuple(fwd.items()), tuple(bwd.items()), tuple(signs))


def mx_transform(space: Space) -> MXMap:
    """Mackenzie-Xu identification T*(Pi E) = T*(Pi E*) as a variable relabeling.

    Each fiber coordinate xi^i is exchanged with its conjugate momentum:
    the new fiber coordinate is eta_i := pi_i and the new momentum is
    sigma * xi^i.  Base pairs are untouched.  sigma is chosen so that the map
    is a symplectomorphism.  An ``anticotangent`` input gives the odd analog
    Pi T*E = Pi T*(Pi E*).
    """
    return _mx_cached(space, conventions.current())
