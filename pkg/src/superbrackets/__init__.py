"""Exact graded-commutative polynomial calculus for super Poisson, Schouten and
higher derived brackets."""

__version__ = "0.1.0"

from .algebra import (
    ANY,
    MIXED,
    Poly,
    Space,
    Variable,
    embed,
    format_poly,
    mul,
    normalize,
    parity_of,
    partial,
    restrict_to,
    substitute,
)
from .brackets import (
    VectorField,
    canonical_bracket,
    schouten_hamiltonian,
    commutator,
    de_rham,
    field_from_linear_hamiltonian,
    hamiltonian_field,
    interior,
    linear_hamiltonian,
    poisson,
    schouten,
    schouten_sym,
    split_bracket,
    to_symmetric,
)
from .errors import (
    ChartMismatchError,
    InvariantError,
    ParityError,
    PreconditionError,
    ProvenanceError,
    SuperBracketsError,
)
from .geometry import (
    anticotangent,
    antitangent,
    base_space,
    cotangent,
    dual_bundle,
    mx_transform,
    vector_bundle,
    weight_of,
    with_parameters,
)
from .homotopy import (
    BracketFamily,
    LInftyStructure,
    MasterHamiltonian,
    Section,
    adjoint_image,
    algebroid_brackets,
    bialgebroid_compatible,
    encode_linfty,
    extract_linfty,
    higher_poisson,
    higher_schouten,
    verify_generalized_jacobi,
)
from .koszul import (
    HigherPoissonStructure,
    alpha,
    alpha_via_hamiltonian,
    classical_koszul_check,
    higher_koszul,
    koszul_bracket,
    lichnerowicz,
    lichnerowicz_field,
    lichnerowicz_quadratic_field,
    quadratic_coefficients,
    raise_indices,
)
from .quasitriangular import (
    ShiftDatum,
    build_quasitriangular_bialgebroid,
    classify,
    coboundary_decompose,
    generalized_ybe_residual,
    master_equation_residual,
    shift,
)

__all__ = [
    "ANY",
    "MIXED",
    "Poly",
    "Space",
    "Variable",
    "embed",
    "format_poly",
    "mul",
    "normalize",
    "parity_of",
    "partial",
    "restrict_to",
    "substitute",
    "VectorField",
    "canonical_bracket",
    "schouten_hamiltonian",
    "commutator",
    "de_rham",
    "field_from_linear_hamiltonian",
    "hamiltonian_field",
    "interior",
    "linear_hamiltonian",
    "poisson",
    "schouten",
    "schouten_sym",
    "split_bracket",
    "to_symmetric",
    "ChartMismatchError",
    "InvariantError",
    "ParityError",
    "PreconditionError",
    "ProvenanceError",
    "SuperBracketsError",
    "anticotangent",
    "antitangent",
    "base_space",
    "cotangent",
    "dual_bundle",
    "mx_transform",
    "vector_bundle",
    "weight_of",
    "with_parameters",
    "BracketFamily",
    "LInftyStructure",
    "MasterHamiltonian",
    "Section",
    "adjoint_image",
    "algebroid_brackets",
    "bialgebroid_compatible",
    "encode_linfty",
    "extract_linfty",
    "higher_poisson",
    "higher_schouten",
    "verify_generalized_jacobi",
    "HigherPoissonStructure",
    "alpha",
    "alpha_via_hamiltonian",
    "classical_koszul_check",
    "higher_koszul",
    "koszul_bracket",
    "lichnerowicz",
    "lichnerowicz_field",
    "lichnerowicz_quadratic_field",
    "quadratic_coefficients",
    "raise_indices",
    "ShiftDatum",
    "build_quasitriangular_bialgebroid",
    "classify",
    "coboundary_decompose",
    "generalized_ybe_residual",
    "master_equation_residual",
    "shift",
]
