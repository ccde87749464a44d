"""Random expression trees for parser round trips."""

import random
from fractions import Fraction

from superbrackets.expr import BinOp, Call, Neg, Num, Pow, Var

NAMES = ("x1", "x2", "y1", "p_x1", "st_y1", "pi_x2", "t", "H", "r")


def random_expr(rng: random.Random, depth: int = 4):
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.4:
            den = rng.choice((1, 1, 2, 3, 7))
            return Num(Fraction(rng.randint(0, 40), den))
        return Var(rng.choice(NAMES))
    sub = lambda: random_expr(rng, depth - 1)  # noqa: E731
    k = rng.randrange(10)
    if k < 4:
        return BinOp(rng.choice("+-*/"), sub(), sub())
    if k == 4:
        return Neg(sub())
    if k == 5:
        return Pow(sub(), rng.randint(0, 5))
    if k == 6:
        return Call(rng.choice(("pb", "sb", "sbs")), (sub(), sub()))
    if k == 7:
        return rng.choice((
            Call("d", (sub(),)),
            Call("alpha", (sub(),)),
            Call("partial", (sub(),), index=rng.choice(NAMES)),
        ))
    if k == 8:
        tail = tuple(sub() for _ in range(rng.randint(0, 3)))
        return rng.choice((Call("hb", (sub(),), tail, index=len(tail)), Call("koszul", (sub(),), tail or (sub(),))))
    return Call("shift", (sub(),), (sub(),), index=rng.choice((None, "t")))
