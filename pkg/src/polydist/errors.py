"""Exception types raised by the distance and perturbation routines."""


class PolyDistError(Exception):
    """Base class for all library-specific errors."""


class DegenerateTargets(PolyDistError):
    """The two target eigenvalues coincide within the separation tolerance."""


class ShapeMismatch(PolyDistError):
    """Matrix or coefficient shapes are incompatible."""


class SingularLeadingCoefficient(PolyDistError):
    """The leading coefficient is numerically singular."""


class ConvergenceFailure(PolyDistError):
    """A numerical backend (SVD/eigenvalue iteration) failed to converge."""


class ConstructionError(PolyDistError):
    """The eigenvalue-assigning perturbation cannot be built from the data."""


class PairSelectionFailure(ConstructionError):
    """No combined singular pair in the cluster meets the coupling tolerance.

    Carries the smallest coupling value achieved by the search.
    """

    def __init__(self, achieved, tolerance):
        self.achieved = achieved
        self.tolerance = tolerance
        super().__init__(
            f"no singular pair with coupling below {tolerance:.3e} "
            f"(best achieved {achieved:.3e})"
        )


class RankDeficientVhat(ConstructionError):
    """The hatted right-vector matrix is not full column rank."""


class AlphaSingularity(ConstructionError):
    """An interpolation factor alpha_i has 1 + alpha_i numerically zero."""


class DependentEigenvectors(ConstructionError):
    """The two designated right singular vectors are numerically parallel."""
