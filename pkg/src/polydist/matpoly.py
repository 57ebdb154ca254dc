"""Matrix polynomials, weight sets, divided differences and eigenvalues.

A matrix polynomial is P(λ) = A_m λ^m + ... + A_1 λ + A_0 with square
complex coefficients and a nonsingular leading coefficient.  Weights
ω_0..ω_m define the per-coefficient perturbation budget and the scalar
weight polynomial w(λ) = Σ ω_j λ^j.
"""

import numpy as np

from .errors import DegenerateTargets, ShapeMismatch, SingularLeadingCoefficient

# |mu1 - mu2| must exceed this times max(1, |mu1|, |mu2|)
SEPARATION_RTOL = 1e-8

_EPS = np.finfo(float).eps


def _as_finite_complex(value, name):
    z = complex(value)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return z


def check_targets(mu1, mu2):
    """Validate a pair of target eigenvalues and return them as complex.

    Raises DegenerateTargets when the two values are closer than the
    separation tolerance.
    """
    z1 = _as_finite_complex(mu1, "mu1")
    z2 = _as_finite_complex(mu2, "mu2")
    if abs(z1 - z2) <= SEPARATION_RTOL * max(1.0, abs(z1), abs(z2)):
        raise DegenerateTargets(f"targets {z1} and {z2} are not distinct")
    return z1, z2


def power_sum(mu1, mu2, j):
    """Cancellation-free (mu1^j - mu2^j)/(mu1 - mu2) = Σ_{a+b=j-1} mu1^a mu2^b.

    Terms are accumulated from the symmetric ends inward, so swapping the
    arguments reproduces bit-identical rounding.
    """
    terms = [mu1 ** a * mu2 ** (j - 1 - a) for a in range(j)]
    total = 0.0 + 0.0j
    for a in range(j // 2):
        total += terms[a] + terms[j - 1 - a]
    if j % 2:
        total += terms[j // 2]
    return total


class MatrixPolynomial:
    """Degree-m polynomial with n x n complex coefficient matrices.

    Parameters
    ----------
    coeffs : sequence of (n, n) array_like
        Coefficients in ascending degree order, coeffs[j] multiplying λ^j.
    check_leading : bool
        When True (default) reject a numerically singular leading
        coefficient.  The perturbed-polynomial builder disables the check
        and warns instead, since a perturbation may push A_m near
        singularity without invalidating the construction.
    """

    def __init__(self, coeffs, check_leading=True):
        mats = [np.asarray(c, dtype=complex) for c in coeffs]
        if len(mats) < 2:
            raise ShapeMismatch("degree must be at least 1")
        n = mats[0].shape[0] if mats[0].ndim == 2 else -1
        for j, A in enumerate(mats):
            if A.ndim != 2 or A.shape != (n, n):
                raise ShapeMismatch(f"coefficient {j} is not {n}x{n}")
            if not np.all(np.isfinite(A)):
                raise ValueError(f"coefficient {j} has non-finite entries")
        self._coeffs = tuple(A.copy() for A in mats)
        for A in self._coeffs:
            A.flags.writeable = False
        if check_leading and not self.leading_is_regular():
            raise SingularLeadingCoefficient(
                "leading coefficient is numerically singular"
            )

    @property
    def n(self):
        return self._coeffs[0].shape[0]

    @property
    def degree(self):
        return len(self._coeffs) - 1

    @property
    def coeffs(self):
        return self._coeffs

    def __repr__(self):
        return f"MatrixPolynomial(n={self.n}, degree={self.degree})"

    def leading_is_regular(self):
        """True when s_min(A_m) > n * eps * s_max(A_m) and A_m is nonzero."""
        s = np.linalg.svd(self._coeffs[-1], compute_uv=False)
        return s[0] > 0 and s[-1] > self.n * _EPS * s[0]

    def __call__(self, mu):
        """Evaluate Σ A_j mu^j by the Horner recurrence."""
        mu = _as_finite_complex(mu, "mu")
        acc = np.array(self._coeffs[-1])
        for A in reversed(self._coeffs[:-1]):
            acc = acc * mu + A
        return acc

    def divided_difference(self, mu1, mu2):
        """First divided difference (P(mu1) - P(mu2)) / (mu1 - mu2).

        Evaluated in the expanded form Σ_j A_j Σ_{a+b=j-1} mu1^a mu2^b,
        which stays accurate as the targets approach each other.
        """
        z1, z2 = check_targets(mu1, mu2)
        out = np.zeros((self.n, self.n), dtype=complex)
        for j in range(1, self.degree + 1):
            out += self._coeffs[j] * power_sum(z1, z2, j)
        return out

    def eigenvalues(self):
        """All m*n finite eigenvalues via the first companion linearization.

        The companion matrix is normalized blockwise by the inverse of the
        leading coefficient; a numerically singular A_m is rejected.
        """
        if not self.leading_is_regular():
            raise SingularLeadingCoefficient(
                "cannot linearize: leading coefficient is numerically singular"
            )
        n, m = self.n, self.degree
        C = np.zeros((m * n, m * n), dtype=complex)
        for k in range(m - 1):
            C[k * n:(k + 1) * n, (k + 1) * n:(k + 2) * n] = np.eye(n)
        lead = self._coeffs[-1]
        for j in range(m):
            C[(m - 1) * n:, j * n:(j + 1) * n] = -np.linalg.solve(
                lead, self._coeffs[j]
            )
        return np.linalg.eigvals(C)

    def coefficient_norms(self):
        """Spectral norm of each coefficient, ascending degree order."""
        return np.array([np.linalg.norm(A, 2) for A in self._coeffs])


class WeightSet:
    """Nonnegative weights ω_0..ω_m with ω_0 > 0.

    Calling the instance evaluates the scalar weight polynomial
    w(r) = Σ ω_j r^j at a nonnegative radius.
    """

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ShapeMismatch("weights must be a one-dimensional sequence")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if w[0] <= 0:
            raise ValueError("the constant-term weight must be positive")
        self._weights = w.copy()
        self._weights.flags.writeable = False

    @classmethod
    def ones(cls, degree):
        return cls(np.ones(degree + 1))

    @classmethod
    def coefficient_norms(cls, poly):
        """Weights equal to the spectral norms of the coefficients of poly."""
        return cls(poly.coefficient_norms())

    @property
    def weights(self):
        return self._weights

    @property
    def degree(self):
        return self._weights.size - 1

    def __repr__(self):
        return f"WeightSet({list(self._weights)})"

    def matches(self, poly):
        return self.degree == poly.degree

    def __call__(self, r):
        """w(r) = Σ ω_j r^j for r >= 0."""
        r = float(r)
        if r < 0:
            raise ValueError("radius must be nonnegative")
        return float(sum(wj * r ** j for j, wj in enumerate(self._weights)))

    def abs_divided_difference(self, mu1, mu2):
        """Σ_{j>=1} ω_j |mu1^j - mu2^j| / |mu1 - mu2|.

        The per-term quotient is evaluated through the cancellation-free
        power sum.  The sum runs over the polynomial degree indices.
        """
        z1, z2 = check_targets(mu1, mu2)
        return float(
            sum(
                wj * abs(power_sum(z1, z2, j))
                for j, wj in enumerate(self._weights)
                if j >= 1
            )
        )


def check_pairing(poly, weights):
    """Raise ShapeMismatch unless the weight set matches the polynomial degree."""
    if not weights.matches(poly):
        raise ShapeMismatch(
            f"weight set has degree {weights.degree}, polynomial {poly.degree}"
        )
