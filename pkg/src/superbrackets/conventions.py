"""Global sign conventions.

The engine pins four sign choices that the underlying mathematics leaves
open.  They live in one context-local record so that the conformance suite
can flip each of them and confirm that some named identity breaks.

Normal code never touches this module directly; read :func:`current`.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Conventions:
    # overall sign of the Hamiltonian D generating the Schouten bracket
    d_sign: int = 1
    # overall sign multiplying the Mackenzie-Xu relabeling sigma
    mx_sign: int = 1
    # overall sign of the interior product i_X
    interior_sign: int = 1
    # True: left partial derivatives; False: right partial derivatives
    left_derivative: bool = True


DEFAULT = Conventions()

MUTATIONS = ("d_sign", "mx_sign", "interior_sign", "left_derivative")

_current: contextvars.ContextVar[Conventions] = contextvars.ContextVar(
    "superbrackets_conventions", default=DEFAULT
)


def current() -> Conventions:
    return _current.get()


def flipped_record(name: str) -> Conventions:
    conv = current()
    if name not in MUTATIONS:
        raise KeyError(f"unknown convention {name!r}")
    value = getattr(conv, name)
    new = (not value) if isinstance(value, bool) else -value
    return replace(conv, **{name: new})


@contextlib.contextmanager
def flipped(name: str):
    """Temporarily flip one convention (used by mutation tests)."""
    token = _current.set(flipped_record(name))
    try:
        yield current()
    finally:
        _current.reset(token)
