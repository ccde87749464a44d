"""Reading an L-infinity algebra off a homological vector field.

An odd vector field Q with Q^2 = 0 on a linear supermanifold is the same
thing as an L-infinity algebra: its Taylor coefficients at the origin are the
structure constants of the brackets, and Q^2 = 0 is equivalent to the
generalized Jacobi identities.  We check both directions on so(3).
"""

from superbrackets import commutator, extract_linfty, verify_generalized_jacobi
from superbrackets.fixtures import SO3, linfty_fixtures

so3 = next(f for f in linfty_fixtures() if f.name == "so3")
Q = so3.field
print("Q      =", Q)
print("Q^2    =", "0" if commutator(Q, Q).is_zero() else commutator(Q, Q))

L = extract_linfty(Q, 4)
print("\nnonzero arities:", L.nonzero_arities())
for (i, j), out in sorted(SO3.items()):
    print(f"  [e{i + 1}, e{j + 1}] = ", L.bracket_basis((i, j)), " (Lie bracket:", out, ")")

report = verify_generalized_jacobi(L, 4)
print("\nJacobi residuals by arity:", report.residuals)

# perturb one coefficient so that Q no longer squares to zero
bad = extract_linfty(so3.perturbed, 4)
broken = verify_generalized_jacobi(bad, 4)
print("\nafter the perturbation Q^2 != 0 and the identities fail:")
print("  residuals:", broken.residuals)
print("  first failing inputs:", broken.first_failure)
