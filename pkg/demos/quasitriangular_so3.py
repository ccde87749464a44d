"""A quasi-triangular Lie bialgebra from so(3) and r = e1 ^ e2.

The Lie algebra is an odd vector field Q on Pi g.  Lifting it to T*(Pi g),
moving to the dual side with the Mackenzie-Xu relabeling and shifting the
momenta by the gradient of r produces a new odd Hamiltonian.  Its bracket
with itself stays zero; the shifted Hamiltonian on the zero section measures
how far r is from solving the classical Yang-Baxter equation.
"""

from superbrackets import base_space, build_quasitriangular_bialgebroid, dual_bundle, vector_bundle
from superbrackets.fixtures import SO3, lie_algebra_field

point = base_space([])
Q = lie_algebra_field(vector_bundle(point, [0, 0, 0]), SO3)
dual = dual_bundle(point, [1, 1, 1])
r = dual.var("eta1") * dual.var("eta2")

rep = build_quasitriangular_bialgebroid(Q, r)
print("H_E                  =", rep.H_E)
print("H_E on the dual side =", rep.H_E_dual)
print("r                    =", rep.r)
print("H_E* = (H_E, r)      =", rep.H_Estar)
print("shifted Hamiltonian  =", rep.H_shifted_dual)
print("\nweights:", rep.weights)
print("compatible (H_E, H_E*) = 0:", rep.compatible)
print("zero-section residual:", rep.master_residual)
print("Yang-Baxter residual :", rep.ybe_residual or 0)
print("classification:", rep.kind)
