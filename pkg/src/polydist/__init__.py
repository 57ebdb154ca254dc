"""Spectral-norm distance from a matrix polynomial to matrix polynomials
with two prescribed eigenvalues.

The library computes an interval [beta_low, beta_up] bracketing the
distance and constructs a perturbed polynomial attaining the upper bound
with both targets in its spectrum.
"""

__version__ = "0.1.0"

from .errors import (
    AlphaSingularity,
    ConstructionError,
    ConvergenceFailure,
    DegenerateTargets,
    DependentEigenvectors,
    PairSelectionFailure,
    PolyDistError,
    RankDeficientVhat,
    ShapeMismatch,
    SingularLeadingCoefficient,
)
from .matpoly import MatrixPolynomial, WeightSet, check_targets
from .numeric import (
    BracketedMax,
    SvdResult,
    maximize_scalar,
    pseudoinverse,
    spectral_norm,
    svd,
)
from .distance import (
    CoupledMatrix,
    GammaProfile,
    PairDiagnostics,
    StructuredPair,
    coupled_matrix,
    default_gamma_cap,
    penultimate_triplet,
    profile_gamma,
    rank_vhat,
    select_singular_pair,
)
from .perturbation import (
    BoundSearch,
    ConstantPerturbation,
    GammaBounds,
    PerturbationResult,
    VerifyReport,
    bounds_at,
    coefficient_updates,
    constant_perturbation,
    core_perturbation,
    distance_bounds,
    interpolation_factors,
    lower_bound,
    optimize_bounds,
    perturbed_poly,
    upper_bound,
    upper_bound_constant,
    verify,
)

__all__ = [
    "AlphaSingularity",
    "BoundSearch",
    "BracketedMax",
    "ConstantPerturbation",
    "ConstructionError",
    "ConvergenceFailure",
    "CoupledMatrix",
    "DegenerateTargets",
    "DependentEigenvectors",
    "GammaBounds",
    "GammaProfile",
    "MatrixPolynomial",
    "PairDiagnostics",
    "PairSelectionFailure",
    "PerturbationResult",
    "PolyDistError",
    "RankDeficientVhat",
    "ShapeMismatch",
    "SingularLeadingCoefficient",
    "StructuredPair",
    "SvdResult",
    "VerifyReport",
    "WeightSet",
    "bounds_at",
    "check_targets",
    "coefficient_updates",
    "constant_perturbation",
    "core_perturbation",
    "coupled_matrix",
    "default_gamma_cap",
    "distance_bounds",
    "interpolation_factors",
    "lower_bound",
    "maximize_scalar",
    "optimize_bounds",
    "penultimate_triplet",
    "perturbed_poly",
    "profile_gamma",
    "pseudoinverse",
    "rank_vhat",
    "select_singular_pair",
    "spectral_norm",
    "svd",
    "upper_bound",
    "upper_bound_constant",
    "verify",
]
