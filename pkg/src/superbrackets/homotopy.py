"""Higher derived brackets, L-infinity structure constants, algebroid data.

Two families of iterated brackets are produced from a master Hamiltonian:

* an even ``P`` on an anticotangent chart gives brackets of base functions
  ``{f_1, ..., f_k}_P = [[ ... [[P, f_1]], ..., f_k]]`` restricted to the base;
* an odd ``H`` on a cotangent chart gives ``( ... (H, f_1), ..., f_k)``
  restricted to the zero section.

For a homological vector field ``Q`` on a linear chart the iterated
commutators with constant fields, evaluated at the origin, are the
structure constants of an L-infinity algebra (symmetric convention, all
brackets odd).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping, Sequence

from .algebra import ANY, MIXED, Poly, Space, embed, homogeneous_parity, parity_of, restrict_to, substitute
from .brackets import VectorField, commutator, poisson, schouten_sym
from .errors import ChartMismatchError, ParityError, PreconditionError, ProvenanceError

# ----------------------------------------------------------------------
# master Hamiltonians and bracket families


@dataclass(frozen=True)
class MasterHamiltonian:
    """An even P on Pi T*M (``kind='even'``) or an odd H on T*M (``kind='odd'``)."""

    value: Poly
    kind: str

    def __post_init__(self):
        p = parity_of(self.value)
        space = self.value.space
        if self.kind == "even":
            if space.kind != "anticotangent":
                raise ProvenanceError("an even master Hamiltonian lives on an anticotangent chart")
            if p not in (0, ANY):
                raise ParityError("even master Hamiltonian must be even")
        elif self.kind == "odd":
            if space.kind != "cotangent":
                raise ProvenanceError("an odd master Hamiltonian lives on a cotangent chart")
            if p not in (1, ANY):
                raise ParityError("odd master Hamiltonian must be odd")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @cached_property
    def self_commutator(self) -> Poly:
        if self.kind == "even":
            return schouten_sym(self.value, self.value)
        return poisson(self.value, self.value)

    @property
    def is_master(self) -> bool:
        return not self.self_commutator.terms

    @property
    def base(self) -> Space:
        return self.value.space.parent

    def family(self) -> "BracketFamily":
        return BracketFamily(self)


def _as_master(H, kind: str | None = None) -> MasterHamiltonian:
    if isinstance(H, MasterHamiltonian):
        return H
    if kind is None:
        kind = "even" if H.space.kind == "anticotangent" else "odd"
    return MasterHamiltonian(H, kind)


def _lift_args(space: Space, args: Sequence[Poly]) -> list[Poly]:
    base = space.parent
    out = []
    for f in args:
        if f.space != base:
            if f.space == space and not any(f.support() & set(space.momentum_indices())):
                out.append(f)
                continue
            raise ChartMismatchError("arguments must be functions on the base chart")
        out.append(embed(f, space))
    return out


def higher_poisson(P, args: Sequence[Poly]) -> Poly:
    """{f_1, ..., f_k}_P: iterated (derived) Schouten brackets with P, restricted to the base."""
    P = _as_master(P, "even")
    space = P.value.space
    cur = P.value
    for f in _lift_args(space, args):
        cur = schouten_sym(cur, f)
        if not cur.terms:
            break
    return restrict_to(cur, space.parent)


def higher_schouten(H, args: Sequence[Poly]) -> Poly:
    """{f_1, ..., f_k}_H: iterated canonical Poisson brackets with odd H, restricted to the base."""
    H = _as_master(H, "odd")
    space = H.value.space
    cur = H.value
    for f in _lift_args(space, args):
        cur = poisson(cur, f)
        if not cur.terms:
            break
    return restrict_to(cur, space.parent)


class BracketFamily:
    """Arity-indexed brackets of a master Hamiltonian: ``family(f1, ..., fk)``."""

    def __init__(self, master: MasterHamiltonian):
        self.master = master

    def __call__(self, *args: Poly) -> Poly:
        if self.master.kind == "even":
            return higher_poisson(self.master, args)
        return higher_schouten(self.master, args)

    def bracket_parity(self, arity: int) -> int:
        """Parity of the arity-k operation: k mod 2 for even masters, always odd for odd masters."""
        return arity % 2 if self.master.kind == "even" else 1


def symmetric_form(family: BracketFamily) -> Callable[..., Poly]:
    """Symmetric-convention brackets of an even-master family (decalage signs).

    Returns ``g(f_1, ..., f_k) = (-1)^(sum_i (k - i) f_i + k(k-1)/2) {f_1, ..., f_k}_P``.
    Viewed on the parity-shifted algebra these are odd, graded symmetric for
    the shifted parities, and satisfy the shuffle identities of
    :func:`function_jacobi_residual` when [[P, P]] = 0.
    """

    def g(*args: Poly) -> Poly:
        k = len(args)
        e = k * (k - 1) // 2 + sum((k - i) * homogeneous_parity(a) for i, a in enumerate(args, start=1))
        r = family(*args)
        return -r if e & 1 else r

    return g


def koszul_sign(parities: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of reordering elements of given parities into the order ``perm``."""
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j] and parities[perm[i]] and parities[perm[j]]:
                s = -s
    return s


def shuffles(n: int, k: int):
    """(k, n-k)-shuffles in lexicographic order, as index tuples."""
    for first in itertools.combinations(range(n), k):
        rest = tuple(i for i in range(n) if i not in first)
        yield first + rest


def function_jacobi_residual(bracket, args: Sequence[Poly], parities: Sequence[int] | None = None) -> Poly:
    """Shuffle-sum residual of symmetric-convention odd brackets on functions.

    ``bracket(*fs)`` must be odd and graded symmetric w.r.t. ``parities``
    (default: the parities of ``args``).  Inner results are fed back as
    arguments, with parity (sum + 1).
    """
    n = len(args)
    if parities is None:
        parities = [homogeneous_parity(a) for a in args]
    total = None
    for k in range(n + 1):
        for sigma in shuffles(n, k):
            s = koszul_sign(parities, sigma)
            inner = bracket(*[args[i] for i in sigma[:k]])
            if not inner.terms:
                continue
            outer = bracket(inner, *[args[i] for i in sigma[k:]])
            total = outer.scale(s) if total is None else total + outer.scale(s)
    if total is None:
        return args[0].space.zero if args else bracket().space.zero
    return total


# ----------------------------------------------------------------------
# L-infinity structure constants


def _constant_field(space: Space, i: int) -> VectorField:
    return VectorField(space, {i: space.one}, space.parities[i])


def _value_at_origin(X: VectorField) -> dict[int, Fraction]:
    out = {}
    for k, c in X.coeffs.items():
        v = c.constant_term()
        if v:
            out[k] = v
    return out


@dataclass
class LInftyStructure:
    """Structure constants ``constants[(i_1, ..., i_N)] = {k: c}`` of an L-infinity algebra.

    Generators are indexed like the coordinates of the chart; generator i has
    the parity of the constant field d/dxi^i.  All brackets are odd and
    graded symmetric (symmetric convention).
    """

    parities: tuple[int, ...]
    constants: dict[tuple[int, ...], dict[int, Fraction]]
    max_arity: int
    names: tuple[str, ...] = ()

    def bracket_basis(self, idx: Sequence[int]) -> dict[int, Fraction]:
        return self.constants.get(tuple(idx), {})

    def bracket(self, vectors: Sequence[Mapping[int, Fraction]]) -> dict[int, Fraction]:
        """Multilinear extension to vectors given as {generator: coefficient}."""
        if len(vectors) > self.max_arity:
            raise PreconditionError("arity exceeds the extracted range")
        out: dict[int, Fraction] = {}
        for combo in itertools.product(*[list(v.items()) for v in vectors]):
            idx = tuple(i for i, _ in combo)
            coef = math.prod((c for _, c in combo), start=Fraction(1))
            for k, c in self.bracket_basis(idx).items():
                out[k] = out.get(k, 0) + coef * c
        return {k: c for k, c in out.items() if c}

    def is_curved(self) -> bool:
        return bool(self.constants.get((), {}))

    def nonzero_arities(self) -> list[int]:
        return sorted({len(k) for k, v in self.constants.items() if v})


def extract_linfty(Q: VectorField, max_arity: int) -> LInftyStructure:
    """Brackets {v_1, ..., v_N} from [[...[Q, v_1], ...], v_N](0) for constant fields v_i."""
    if Q.parity != 1:
        raise ParityError("an L-infinity structure needs an odd vector field")
    space = Q.space
    n = space.n
    consts: dict[tuple[int, ...], dict[int, Fraction]] = {}
    layer = {(): Q}
    for arity in range(max_arity + 1):
        nxt = {}
        for idx, X in layer.items():
            val = _value_at_origin(X)
            if val:
                consts[idx] = val
            if arity < max_arity:
                for i in range(n):
                    Y = commutator(X, _constant_field(space, i))
                    if not Y.is_zero():
                        nxt[idx + (i,)] = Y
        layer = nxt
    return LInftyStructure(tuple(space.parities), consts, max_arity, space.names)


def encode_linfty(space: Space, L: LInftyStructure) -> VectorField:
    """Inverse of :func:`extract_linfty` (Taylor series with the commutator signs)."""
    coeffs: dict[int, Poly] = {}
    for idx, vals in L.constants.items():
        N = len(idx)
        # sign of [..[Q, d_i1], .., d_iN] = prod_j -(-1)^((1 + sum_{l<j} i_l) i_j) times d_iN..d_i1 Q
        s = 1
        acc = 1
        for i in idx:
            if (acc * space.parities[i]) & 1:
                s = -s
            s = -s
            acc += space.parities[i]
        mono = space.product([space.names[i] for i in idx]) if idx else space.one
        w = Fraction(s, math.factorial(N))
        for k, c in vals.items():
            term = mono.scale(w * c)
            coeffs[k] = coeffs[k] + term if k in coeffs else term
    return VectorField(space, coeffs, 1)


@dataclass
class JacobiReport:
    residuals: dict[int, int]
    first_failure: tuple | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v == 0 for v in self.residuals.values())

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "residuals": {str(k): v for k, v in sorted(self.residuals.items())},
            "first_failure": list(self.first_failure) if self.first_failure else None,
        }


def _orderings(tup: Sequence[int]) -> int:
    out = math.factorial(len(tup))
    for c in Counter(tup).values():
        out //= math.factorial(c)
    return out


def verify_generalized_jacobi(L: LInftyStructure, N: int) -> JacobiReport:
    """Shuffle-sum identities for every ordered tuple of generators, total arity 0..N.

    The residual for arity n is the number of nonzero components summed over
    all input tuples.  The identities are graded symmetric in their inputs, so
    only sorted tuples are evaluated and each counts once per distinct ordering.
    """
    if N > L.max_arity:
        raise PreconditionError("N exceeds the extracted arity")
    par = L.parities
    residuals: dict[int, int] = {}
    first = None
    gens = range(len(par))
    for n in range(N + 1):
        count = 0
        for tup in itertools.combinations_with_replacement(gens, n):
            ps = [par[i] for i in tup]
            total: dict[int, Fraction] = {}
            for k in range(n + 1):
                if n - k + 1 > L.max_arity:
                    continue
                for sigma in shuffles(n, k):
                    s = koszul_sign(ps, sigma)
                    inner = L.bracket_basis([tup[i] for i in sigma[:k]])
                    if not inner:
                        continue
                    rest = [{tup[i]: Fraction(1)} for i in sigma[k:]]
                    for key, c in L.bracket([inner] + rest).items():
                        total[key] = total.get(key, 0) + s * c
            bad = sum(1 for c in total.values() if c)
            if bad and first is None:
                first = tuple(L.names[i] if L.names else i for i in tup)
            count += bad * _orderings(tup)
        residuals[n] = count
    return JacobiReport(residuals, first)


# ----------------------------------------------------------------------
# adjoint representation


def adjoint_image(Q: VectorField, eta: Mapping[str, Poly]) -> VectorField:
    """Q^eta - Q - Q(eta), with Q^eta the parallel shift xi -> xi + eta.

    ``eta`` maps coordinate names to polynomials on the chart of ``Q``
    (typically an extension of the linear chart by parameter variables).
    """
    space = Q.space
    images = {}
    for name, val in eta.items():
        if val.space != space:
            raise ChartMismatchError("eta components must live on the field's chart")
        p = parity_of(val)
        if p == MIXED or (p != ANY and p != space.variable(name).parity):
            raise ParityError(f"eta component for {name!r} has the wrong parity")
        images[name] = val
    coords = [v.name for v in space.variables if v.role != "parameter"]
    shifted = {n: space.var(n) + images.get(n, space.zero) for n in coords}
    at_eta = {n: images.get(n, space.zero) for n in coords}
    cs = {}
    for i, c in Q.coeffs.items():
        new = substitute(c, shifted) - c - substitute(c, at_eta)
        if new.terms:
            cs[i] = new
    return VectorField(space, cs, Q.parity)


# ----------------------------------------------------------------------
# Lie algebroids


@dataclass(frozen=True)
class Section:
    """A section u = u^i e_i of E, stored by its coefficients on the base chart."""

    coeffs: tuple
    parity: int


def _fiber_indices(space: Space) -> list[int]:
    return [i for i, v in enumerate(space.variables) if v.role in ("fiber", "differential")]


def section_field(space: Space, u: Section) -> VectorField:
    """i_u = (-1)^u u^i d/dxi^i on the chart of Pi E."""
    fib = _fiber_indices(space)
    if len(fib) != len(u.coeffs):
        raise PreconditionError("section has the wrong rank")
    cs = {}
    for i, c in zip(fib, u.coeffs):
        c = embed(c, space)
        cs[i] = -c if u.parity else c
    return VectorField(space, cs, (u.parity + 1) % 2)


def field_section(space: Space, X: VectorField) -> Section:
    """Read a section back from a field of the form (-1)^u u^i d/dxi^i."""
    fib = set(_fiber_indices(space))
    base = space.parent
    parity = (X.parity + 1) % 2
    coeffs = []
    for i in sorted(fib):
        c = X.coefficient(i)
        if any(c.support() & fib):
            raise PreconditionError("bracket is not a section (fiber dependence)")
        coeffs.append(restrict_to(-c if parity else c, base))
    for i in X.coeffs:
        if i not in fib:
            raise PreconditionError("bracket is not a section (base directions)")
    return Section(tuple(coeffs), parity)


def algebroid_brackets(Q: VectorField, u: Section, v: Section, f: Poly) -> tuple[Poly, Section]:
    """Anchor value a(u)f = [[Q, i_u], f] and bracket i_[u,v] = (-1)^u [[Q, i_u], i_v]."""
    space = Q.space
    if Q.parity != 1:
        raise ParityError("algebroid field must be odd")
    if space.kind not in ("bundle", "antitangent"):
        raise ProvenanceError("algebroid field lives on a Pi E chart")
    iu = section_field(space, u)
    iv = section_field(space, v)
    Qu = commutator(Q, iu)
    anchor = restrict_to(Qu(embed(f, space)), space.parent)
    br = commutator(Qu, iv)
    if u.parity:
        br = -br
    return anchor, field_section(space, br)


def anchor(Q: VectorField, u: Section, f: Poly) -> Poly:
    space = Q.space
    return restrict_to(commutator(Q, section_field(space, u))(embed(f, space)), space.parent)


def section_bracket(Q: VectorField, u: Section, v: Section) -> Section:
    space = Q.space
    br = commutator(commutator(Q, section_field(space, u)), section_field(space, v))
    return field_section(space, -br if u.parity else br)


def bialgebroid_compatible(H_E: Poly, H_Estar: Poly) -> tuple[bool, Poly]:
    """Whether two odd Hamiltonians on the same cotangent chart commute; returns (ok, residual)."""
    for h in (H_E, H_Estar):
        if parity_of(h) not in (1, ANY):
            raise ParityError("bialgebroid Hamiltonians must be odd")
    r = poisson(H_E, H_Estar)
    return (not r.terms), r
