"""The Mackenzie-Xu relabeling T*(Pi E) = T*(Pi E*) is a symplectomorphism.

Fibre coordinates and their momenta trade places, with a sign on the new
momentum fixed by parity.  We check on random functions that brackets are
preserved and that the two weights are swapped.
"""

import random

from superbrackets import base_space, cotangent, mx_transform, poisson, vector_bundle, weight_of
from superbrackets.generators import random_poly

M = base_space([("x", 0)])
T = cotangent(vector_bundle(M, [0, 1]))
mx = mx_transform(T)
print("source:", T)
print("target:", mx.target)
for name, image in mx.forward_images:
    print(f"  {name:7s} -> {image}")

rng = random.Random(0)
ok = True
for _ in range(200):
    f = random_poly(T, rng, parity=rng.randint(0, 1))
    g = random_poly(T, rng, parity=rng.randint(0, 1))
    ok &= mx(poisson(f, g)) == poisson(mx(f), mx(g))
print("\nbrackets preserved on 200 random pairs:", ok)

f = T.var("xi1") * T.var("p_x")
print(f"weight of {f}: {weight_of(f)}  ->  weight of {mx(f)}: {weight_of(mx(f))}")
