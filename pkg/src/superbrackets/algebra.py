"""Exact graded-commutative polynomial arithmetic.

A :class:`Space` is an ordered list of graded variables (a coordinate chart of
a supermanifold, possibly carrying conjugate pairs).  A :class:`Poly` is a
finite sum of monomials with rational coefficients.  Monomials are stored as
exponent tuples in the space's declaration order; every odd variable has
exponent 0 or 1, and reordering odd factors into that order contributes the
Koszul sign.

Coefficients are Python ints or :class:`fractions.Fraction`; no floating
point is ever involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from . import conventions
from .errors import ChartMismatchError, ParityError

Scalar = Union[int, Fraction]

EVEN = 0
ODD = 1
#: parity_of() result for the zero polynomial (homogeneous of both parities)
ANY = "any"
#: parity_of() result for a polynomial with terms of both parities
MIXED = "mixed"

ROLES = (
    "base",
    "momentum",
    "antimomentum",
    "differential",
    "differential-momentum",
    "fiber",
    "fiber-momentum",
    "parameter",
)


@dataclass(frozen=True)
class Variable:
    name: str
    parity: int
    role: str = "base"
    weight: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise ParityError(f"parity of {self.name!r} must be 0 or 1")
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


class Space:
    """An ordered chart of graded variables.

    ``pairs`` lists ``(coordinate_index, momentum_index, bracket_parity)``
    triples.  ``provenance`` is a tuple whose first entry names the
    construction (``"base"``, ``"cotangent"``, ``"anticotangent"``,
    ``"antitangent"``, ``"bundle"``, ``"dual-bundle"``) and whose second entry,
    when present, is the parent space.
    """

    __slots__ = (
        "variables", "pairs", "provenance", "index", "parities", "odd",
        "n", "_key", "_hash", "_pair_of", "__weakref__",
    )

    def __init__(self, variables: Iterable[Variable], pairs=(), provenance=("base",)):
        self.variables = tuple(variables)
        self.pairs = tuple(tuple(p) for p in pairs)
        self.provenance = tuple(provenance)
        self.n = len(self.variables)
        self.index = {}
        for i, v in enumerate(self.variables):
            if v.name in self.index:
                raise ValueError(f"duplicate variable name {v.name!r}")
            self.index[v.name] = i
        self.parities = tuple(v.parity for v in self.variables)
        self.odd = tuple(i for i, p in enumerate(self.parities) if p)
        seen = set()
        self._pair_of = {}
        for c, m, bp in self.pairs:
            if c in seen or m in seen:
                raise ValueError("a variable occurs in more than one pair")
            seen.update((c, m))
            if (self.parities[c] + bp) % 2 != self.parities[m]:
                raise ParityError(
                    f"pair ({self.variables[c].name}, {self.variables[m].name}) "
                    f"violates the parity rule for bracket parity {bp}"
                )
            self._pair_of[c] = (c, m, bp)
            self._pair_of[m] = (c, m, bp)
        self._key = (self.variables, self.pairs, self.provenance)
        self._hash = hash(self._key)

    # -- identity -----------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Space):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        names = ", ".join(
            f"{v.name}{'*' if v.parity else ''}" for v in self.variables
        )
        return f"Space[{self.kind}]({names})"

    # -- structure ----------------------------------------------------
    @property
    def kind(self) -> str:
        return self.provenance[0]

    @property
    def parent(self) -> "Space | None":
        return self.provenance[1] if len(self.provenance) > 1 else None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def variable(self, name: str) -> Variable:
        return self.variables[self.index[name]]

    def pair_of(self, i: int):
        return self._pair_of.get(i)

    def bracket_parity(self) -> int | None:
        """Common parity of all pairs, or None when there are no pairs."""
        kinds = {bp for _, _, bp in self.pairs}
        if not kinds:
            return None
        if len(kinds) > 1:
            raise ParityError("space mixes even and odd conjugate pairs")
        return kinds.pop()

    def momentum_indices(self) -> tuple[int, ...]:
        return tuple(m for _, m, _ in self.pairs)

    def root(self) -> "Space":
        s = self
        while s.parent is not None:
            s = s.parent
        return s

    # -- element constructors ------------------------------------------
    def var(self, name: str) -> "Poly":
        i = self.index[name]
        e = [0] * self.n
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def vars(self, *names: str) -> list["Poly"]:
        return [self.var(nm) for nm in names]

    def const(self, c: Scalar) -> "Poly":
        return Poly(self, {self.unit_monomial: c})

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    @property
    def unit_monomial(self) -> tuple[int, ...]:
        return (0,) * self.n

    def product(self, factors: Sequence[str]) -> "Poly":
        """The ordered product of the named variables, normalized."""
        res = normalize(self, [self.index[f] for f in factors])
        if res is None:
            return self.zero
        sign, mono = res
        return Poly(self, {mono: sign})

    def monomial_parity(self, mono: tuple[int, ...]) -> int:
        return sum(mono[i] for i in self.odd) % 2

    def monomial_weight(self, mono) -> tuple[int, int]:
        w1 = w2 = 0
        for v, e in zip(self.variables, mono):
            if e:
                w1 += e * v.weight[0]
                w2 += e * v.weight[1]
        return (w1, w2)


# ----------------------------------------------------------------------
# monomial kernel


@lru_cache(maxsize=None)
def _odd_mask(odd: tuple[int, ...], mono: tuple[int, ...]) -> int:
    m = 0
    for i in odd:
        if mono[i]:
            m |= 1 << i
    return m


def _mono_mul(space: Space, a, b):
    """Product of two canonical monomials: (sign, monomial) or None."""
    if space.odd:
        ma = _odd_mask(space.odd, a)
        mb = _odd_mask(space.odd, b)
        if ma & mb:
            return None
        # one transposition for every odd i in a and odd j in b with i > j
        swaps = 0
        while mb:
            low = mb & -mb
            j = low.bit_length() - 1
            swaps += (ma >> (j + 1)).bit_count()
            mb ^= low
        sign = -1 if swaps & 1 else 1
    else:
        sign = 1
    return sign, tuple(x + y for x, y in zip(a, b))


def normalize(space: Space, factors: Sequence[int]):
    """Sort an ordered product of variables (given by index).

    Returns ``(sign, monomial)`` with the accumulated Koszul sign, or None
    when an odd variable repeats.
    """
    mono = [0] * space.n
    sign = 1
    seen_odd: list[int] = []
    for i in factors:
        if not 0 <= i < space.n:
            raise ChartMismatchError(f"variable index {i} not in {space!r}")
        if space.parities[i]:
            if mono[i]:
                return None
            # move the new odd factor left past every larger odd index already placed
            if sum(1 for j in seen_odd if j > i) & 1:
                sign = -sign
            seen_odd.append(i)
        mono[i] += 1
    return sign, tuple(mono)


# ----------------------------------------------------------------------


def _is_scalar(c) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


class Poly:
    """Immutable graded-commutative polynomial on a :class:`Space`."""

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms: Mapping[tuple, Scalar] | None = None):
        self.space = space
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    # -- basic protocol ------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.space == other.space and self.terms == other.terms
        if _is_scalar(other):
            if other == 0:
                return not self.terms
            return self.terms == {self.space.unit_monomial: other}
        return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)

    def is_zero(self) -> bool:
        return not self.terms

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.space is not self.space and other.space != self.space:
                raise ChartMismatchError(f"{self.space!r} vs {other.space!r}")
            return other
        if _is_scalar(other):
            return self.space.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(self.space, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return mul(self, self._coerce(other))

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return mul(self._coerce(other), self)

    def __truediv__(self, other):
        if not _is_scalar(other):
            raise TypeError("can only divide a Poly by a rational scalar")
        return self.scale(Fraction(1) / other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.space.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Scalar) -> "Poly":
        if c == 0:
            return self.space.zero
        return Poly(self.space, {m: c * v for m, v in self.terms.items()})

    # -- inspection ----------------------------------------------------
    def coefficient(self, mono) -> Scalar:
        return self.terms.get(tuple(mono), 0)

    def constant_term(self) -> Scalar:
        return self.terms.get(self.space.unit_monomial, 0)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, indices: Iterable[int]) -> tuple[int, int]:
        """(min, max) total degree in the given variable indices; (0, -1) for zero."""
        idx = tuple(indices)
        degs = [sum(m[i] for i in idx) for m in self.terms]
        if not degs:
            return (0, -1)
        return (min(degs), max(degs))

    def support(self) -> set[int]:
        s = set()
        for m in self.terms:
            s.update(i for i, e in enumerate(m) if e)
        return s

    def parity_parts(self) -> dict[int, "Poly"]:
        """Split into even and odd homogeneous parts (zero parts omitted)."""
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.space.monomial_parity(m), {})[m] = c
        return {p: Poly(self.space, t) for p, t in parts.items()}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Scalar]]:
        """Terms in canonical order: total degree, then lexicographic in variable order."""
        return sorted(self.terms.items(), key=lambda mc: (sum(mc[0]), tuple(-e for e in mc[0])))


# ----------------------------------------------------------------------
# operations


def mul(a: Poly, b: Poly) -> Poly:
    if a.space is not b.space and a.space != b.space:
        raise ChartMismatchError(f"{a.space!r} vs {b.space!r}")
    space = a.space
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = _mono_mul(space, ma, mb)
            if r is None:
                continue
            sign, m = r
            out[m] = out.get(m, 0) + sign * ca * cb
    return Poly(space, out)


def partial(f: Poly, z: Union[str, int]) -> Poly:
    """Partial derivative of ``f`` with respect to the variable ``z``.

    Left derivative by default: a factor of ``z`` is moved to the leftmost
    position (collecting Koszul signs) and deleted.
    """
    space = f.space
    k = space.index[z] if isinstance(z, str) else z
    left = conventions.current().left_derivative
    odd_z = space.parities[k]
    out: dict = {}
    for m, c in f.terms.items():
        e = m[k]
        if not e:
            continue
        nm = m[:k] + (e - 1,) + m[k + 1:]
        if odd_z:
            if left:
                passes = sum(m[i] for i in space.odd if i < k)
            else:
                passes = sum(m[i] for i in space.odd if i > k)
            coeff = -c if passes & 1 else c
        else:
            coeff = e * c
        out[nm] = out.get(nm, 0) + coeff
    return Poly(space, out)


def parity_of(f: Poly):
    """0 or 1 for homogeneous f, ANY for zero, MIXED otherwise."""
    if not f.terms:
        return ANY
    ps = {f.space.monomial_parity(m) for m in f.terms}
    return ps.pop() if len(ps) == 1 else MIXED


def homogeneous_parity(f: Poly, default: int = 0) -> int:
    """Parity of a homogeneous f; ``default`` for zero; raises on mixed input."""
    p = parity_of(f)
    if p == MIXED:
        raise ParityError(f"inhomogeneous polynomial: {format_poly(f)}")
    return default if p == ANY else p


def substitute(
    f: Poly,
    images: Mapping[Union[str, int], Poly],
    target: Space | None = None,
) -> Poly:
    """Apply the algebra homomorphism sending each variable to its image.

    ``images`` maps variables of ``f.space`` (by name or index) to polynomials
    on ``target`` (default: ``f.space``).  Unmapped variables go to the
    same-named variable of ``target``.  Every image must be homogeneous of the
    parity of the variable it replaces.
    """
    src = f.space
    target = src if target is None else target
    table: list[Poly] = []
    resolved = {}
    for key, img in images.items():
        i = src.index[key] if isinstance(key, str) else key
        resolved[i] = img
    for i, v in enumerate(src.variables):
        if i in resolved:
            img = resolved[i]
            if not isinstance(img, Poly):
                img = target.const(img)
            if img.space != target:
                raise ChartMismatchError(f"image of {v.name!r} is not on the target chart")
            p = parity_of(img)
            if p == MIXED or (p != ANY and p != v.parity):
                raise ParityError(f"image of {v.name!r} has the wrong parity")
            table.append(img)
        else:
            if v.name not in target.index:
                raise ChartMismatchError(f"variable {v.name!r} has no counterpart on target chart")
            tv = target.variable(v.name)
            if tv.parity != v.parity:
                raise ParityError(f"variable {v.name!r} changes parity between charts")
            table.append(target.var(v.name))
    powers: dict[tuple[int, int], Poly] = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = table[i] ** e
        return powers[key]

    out: dict = {}
    for m, c in f.terms.items():
        term = target.const(c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
                if not term.terms:
                    break
        for tm, tc in term.terms.items():
            out[tm] = out.get(tm, 0) + tc
    return Poly(target, out)


def embed(f: Poly, target: Space) -> Poly:
    """Re-express f on a chart containing all its variables (by name)."""
    if f.space is target or f.space == target:
        return f
    src = f.space
    idx = []
    for v in src.variables:
        j = target.index.get(v.name)
        if j is None or target.variables[j].parity != v.parity:
            idx.append(None)
        else:
            idx.append(j)
    out = {}
    for m, c in f.terms.items():
        factors = []
        for i, e in enumerate(m):
            if e:
                if idx[i] is None:
                    raise ChartMismatchError(
                        f"variable {src.variables[i].name!r} missing on {target!r}"
                    )
                factors.extend([idx[i]] * e)
        # the target may order the odd variables differently: Koszul sign
        sign, key = normalize(target, factors)
        out[key] = out.get(key, 0) + sign * c
    return Poly(target, out)


def set_zero(f: Poly, indices: Iterable[int]) -> Poly:
    """Drop every term containing one of the given variables."""
    idx = tuple(indices)
    return Poly(f.space, {m: c for m, c in f.terms.items() if not any(m[i] for i in idx)})


def restrict_to(f: Poly, target: Space) -> Poly:
    """Set to zero every variable of f's chart absent from ``target``, then embed."""
    missing = [i for i, v in enumerate(f.space.variables) if v.name not in target.index]
    return embed(set_zero(f, missing), target)


# ----------------------------------------------------------------------
# text form


def format_scalar(c: Scalar) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def format_monomial(space: Space, mono) -> str:
    parts = []
    for v, e in zip(space.variables, mono):
        if e == 1:
            parts.append(v.name)
        elif e > 1:
            parts.append(f"{v.name}^{e}")
    return "*".join(parts)


def format_poly(f: Poly) -> str:
    """Canonical plain-text form with explicit signs, e.g. ``x1^2 - 1/2*x1*xi1``."""
    if not f.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(f.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(f.space, m)
        if not mono:
            body = format_scalar(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_scalar(a)}*{mono}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
