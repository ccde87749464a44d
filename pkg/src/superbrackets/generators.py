"""Seeded random elements for property checks (shared by tests and the conformance suite)."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import Poly, Space
from .brackets import VectorField


def _indices(space: Space, variables) -> list[int]:
    if variables is None:
        return list(range(space.n))
    return [space.index[v] if isinstance(v, str) else v for v in variables]


def random_monomial(space: Space, rng: random.Random, allowed: Sequence[int], degree: int):
    mono = [0] * space.n
    pool = list(allowed)
    for _ in range(degree):
        if not pool:
            break
        i = rng.choice(pool)
        mono[i] += 1
        if space.parities[i]:
            pool.remove(i)
    return tuple(mono)


def random_poly(
    space: Space,
    rng: random.Random,
    *,
    max_degree: int = 3,
    max_terms: int = 4,
    parity: int | None = None,
    variables: Iterable | None = None,
    coeff_range: int = 3,
    rational: bool = False,
    min_terms: int = 0,
) -> Poly:
    """A random polynomial; ``parity`` forces homogeneity."""
    allowed = _indices(space, variables)
    nterms = rng.randint(min_terms, max_terms)
    terms: dict = {}
    attempts = 0
    while len(terms) < nterms and attempts < 50 * (nterms + 1):
        attempts += 1
        m = random_monomial(space, rng, allowed, rng.randint(0, max_degree))
        if parity is not None and space.monomial_parity(m) != parity:
            continue
        c = rng.randint(-coeff_range, coeff_range)
        if c == 0:
            continue
        if rational and rng.random() < 0.3:
            c = Fraction(c, rng.randint(2, 4))
        terms[m] = terms.get(m, 0) + c
    return Poly(space, terms)


def random_field(
    space: Space,
    rng: random.Random,
    parity: int,
    *,
    directions: Iterable | None = None,
    coefficient_variables: Iterable | None = None,
    max_degree: int = 2,
    max_terms: int = 2,
) -> VectorField:
    """Random vector field of given parity; coefficients have matching parities."""
    dirs = _indices(space, directions)
    cs = {}
    for i in dirs:
        cp = (parity + space.parities[i]) % 2
        c = random_poly(
            space, rng, max_degree=max_degree, max_terms=max_terms, parity=cp,
            variables=coefficient_variables,
        )
        if c.terms:
            cs[i] = c
    return VectorField(space, cs, parity)
