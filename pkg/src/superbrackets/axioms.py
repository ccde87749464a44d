"""Residuals of bracket axioms, generic over the element type.

Three conventions are supported:

``even``        [a,b] = -(-1)^(ab) [b,a];  [a,[b,c]] = [[a,b],c] + (-1)^(ab) [b,[a,c]]
``odd``         [a,b] = -(-1)^((a+1)(b+1)) [b,a];
                [a,[b,c]] = [[a,b],c] + (-1)^((a+1)(b+1)) [b,[a,c]]
``symmetric``   [a,b] = (-1)^(ab) [b,a];
                [a,[b,c]] = (-1)^(a+1) [[a,b],c] + (-1)^((a+1)(b+1)) [b,[a,c]]

Elements only need ``+``, ``-``, ``scale`` and ``is_zero``; ``parity`` is a
callable returning 0 or 1.  Every function returns a dict of named residuals;
an identity holds when its residual is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .brackets import VectorField, commutator

CONVENTIONS = ("even", "odd", "symmetric")


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


def symmetry_residual(conv: str, br, a, b, parity) -> object:
    pa, pb = parity(a), parity(b)
    if conv == "even":
        return br(a, b) + br(b, a).scale(_sgn(pa * pb))
    if conv == "odd":
        return br(a, b) + br(b, a).scale(_sgn((pa + 1) * (pb + 1)))
    if conv == "symmetric":
        return br(a, b) - br(b, a).scale(_sgn(pa * pb))
    raise ValueError(conv)


def jacobi_residual(conv: str, br, a, b, c, parity) -> object:
    pa, pb = parity(a), parity(b)
    lhs = br(a, br(b, c))
    ab_c = br(br(a, b), c)
    b_ac = br(b, br(a, c))
    if conv == "even":
        return lhs - ab_c - b_ac.scale(_sgn(pa * pb))
    if conv == "odd":
        return lhs - ab_c - b_ac.scale(_sgn((pa + 1) * (pb + 1)))
    if conv == "symmetric":
        return lhs - ab_c.scale(_sgn(pa + 1)) - b_ac.scale(_sgn((pa + 1) * (pb + 1)))
    raise ValueError(conv)


def leibniz_residual(bracket_parity: int, br, a, b, c, parity) -> object:
    """{a, bc} - {a,b}c - (-1)^((a + bracket_parity) b) b{a,c}."""
    pa, pb = parity(a), parity(b)
    return br(a, b * c) - br(a, b) * c - (b * br(a, c)).scale(_sgn((pa + bracket_parity) * pb))


def linearity_residual(br, a, b, c, q) -> object:
    """[a + q b, c] - [a,c] - q [b,c] and the same in the second slot."""
    r1 = br(a + b.scale(q), c) - br(a, c) - br(b, c).scale(q)
    r2 = br(c, a + b.scale(q)) - br(c, a) - br(c, b).scale(q)
    return r1 + r2


def axiom_residuals(conv: str, br, a, b, c, parity) -> dict:
    return {
        "symmetry": symmetry_residual(conv, br, a, b, parity),
        "jacobi": jacobi_residual(conv, br, a, b, c, parity),
    }


def failures(residuals: dict) -> list[str]:
    return [k for k, v in residuals.items() if not v.is_zero()]


# ----------------------------------------------------------------------
# parity shift of a Lie superalgebra of vector fields


@dataclass(frozen=True)
class Shifted:
    """Pi X for a vector field X; its parity is X's parity plus one."""

    field: VectorField

    @property
    def parity(self) -> int:
        return (self.field.parity + 1) % 2

    def __add__(self, other: "Shifted") -> "Shifted":
        return Shifted(self.field + other.field)

    def __sub__(self, other: "Shifted") -> "Shifted":
        return Shifted(self.field - other.field)

    def scale(self, c) -> "Shifted":
        return Shifted(self.field.scale(c))

    def is_zero(self) -> bool:
        return self.field.is_zero()


def shifted_bracket(a: Shifted, b: Shifted) -> Shifted:
    """[Pi a, Pi b] := Pi [a, b]  (antisymmetric odd bracket on Pi L)."""
    return Shifted(commutator(a.field, b.field))


def shifted_bracket_symmetric(a: Shifted, b: Shifted) -> Shifted:
    """[Pi a, Pi b] := (-1)^a Pi [a, b]  (symmetric odd bracket on Pi L)."""
    return Shifted(commutator(a.field, b.field).scale(_sgn(a.field.parity)))


def shifted_parity(a: Shifted) -> int:
    return a.parity


def field_parity(X: VectorField) -> int:
    return X.parity


def poly_parity_fn(default: int = 0) -> Callable:
    from .algebra import homogeneous_parity

    return lambda f: homogeneous_parity(f, default)
