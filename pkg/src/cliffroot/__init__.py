"""Real Clifford algebras Cl(p,q) and the multivector square roots of -1.

The package provides exact blade arithmetic for p+q <= 6, derives the
grade-wise quadratic constraint system of A*A = -1 for any signature, and
catalogs, samples, verifies, classifies and numerically solves for the root
families known for p+q <= 4.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .algebra import (
    N_MAX,
    AlgebraError,
    ExpConvergenceError,
    Multivector,
    Signature,
    SignatureMismatchError,
    StructureTensor,
    blade_label,
    blade_product,
    conjugate,
    dual,
    exp,
    geometric_product,
    get_structure,
    grade_involution,
    grade_project,
    grades,
    left_contraction,
    outer_product,
    pseudoscalar,
    pseudoscalar_inverse,
    reverse,
    scalar_product,
    signatures_with_dimension,
)
from .constraints import (
    ConstraintSystem,
    UnsupportedDimensionError,
    constraints_to_text,
    derive_constraints,
    form_to_text,
    jacobian,
    reference_system,
    residual,
    residual_and_jacobian,
    residual_norm,
    root_equation_text,
    system_to_json_dict,
    systems_equal,
    variable_map,
)
from .mvio import MVParseError, format_mv, parse_mv
from .numeric import (
    InfeasibleGridError,
    ScanResult,
    SolveResult,
    lm_minimize,
    nonexistence_scan,
    solve_numeric,
)
from .roots import (
    CASES,
    CaseInfo,
    CaseSignatureError,
    ConstructionError,
    DegenerateParamError,
    ExistenceRegionError,
    NotARootError,
    RejectionCapError,
    RootCase,
    RootsError,
    VerifyReport,
    assemble_groups,
    catalog_pairs,
    classify,
    construct,
    root_record,
    sample,
    split_groups,
    verify,
)

__version__ = "0.1.0"
