"""Numerical support: SVD, pseudoinverse and scalar maximization on [0, inf).

Dense linear algebra is delegated to LAPACK through numpy; the scalar
search is a logarithmic grid sweep with golden-section refinement, kept
derivative-free because the profiled objective (a singular value of a
parameter-dependent matrix) may be non-unimodal across crossings.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure

_EPS = np.finfo(float).eps
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0

# grid-sampling defaults for maximize_scalar
GRID_POINTS = 200
GRID_DECADES = 8
MAX_DOUBLINGS = 40
REFINE_RTOL = 1e-10
BOUNDARY_GAMMA = 1e-12


@dataclass(frozen=True)
class SvdResult:
    """Full SVD with singular values descending and matched vector columns."""

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray


def svd(matrix):
    """Singular value decomposition A = U diag(s) V*.

    Returns an SvdResult whose columns satisfy A v_i = s_i u_i and
    A* u_i = s_i v_i.  LAPACK convergence problems surface as
    ConvergenceFailure.
    """
    A = np.asarray(matrix, dtype=complex)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return SvdResult(s, U, Vh.conj().T)


def spectral_norm(matrix):
    """Largest singular value."""
    A = np.asarray(matrix, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def pseudoinverse(matrix, rank_tol=None):
    """Moore-Penrose pseudoinverse by SVD truncation.

    Singular values at or below rank_tol * s_1 are treated as zero.  The
    default tolerance is max(rows, cols) * machine epsilon.
    """
    A = np.asarray(matrix, dtype=complex)
    res = svd(A)
    s = res.singular_values
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((A.shape[1], A.shape[0]), dtype=complex)
    if rank_tol is None:
        rank_tol = max(A.shape) * _EPS
    inv = np.where(s > rank_tol * s[0], 1.0 / np.where(s > 0, s, 1.0), 0.0)
    return (res.right_vectors * inv) @ res.left_vectors.conj().T


@dataclass(frozen=True)
class BracketedMax:
    """Located maximum of a scalar function on [0, inf).

    at_boundary marks a maximizer pinned at 0, in which case argmax is
    exactly 0.0; interior_argmax keeps the refined point before pinning,
    for callers that must handle a tiny-but-positive maximizer.
    """

    argmax: float
    value: float
    at_boundary: bool
    interior_argmax: float = 0.0


def _golden_max(f, a, b):
    """Golden-section maximization on [a, b]; ties move toward smaller γ."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > REFINE_RTOL * max(1.0, b):
        if fc >= fd:  # keep the left bracket on ties
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return _parabolic_polish(f, (a + b) / 2.0)


def _parabolic_polish(f, g):
    """Two shrinking three-point vertex fits around g.

    Golden section alone drifts by about sqrt(eps) once the value
    differences fall under rounding noise; fitting a parabola over a wider
    stencil recovers the maximizer location from smooth structure.
    """
    for h_rel in (1e-3, 1e-5):
        h = h_rel * max(1.0, g)
        if g - h <= 0:
            continue
        f0, fm, fp = f(g), f(g - h), f(g + h)
        curve = fp - 2.0 * f0 + fm
        if curve >= 0:
            continue
        shift = -0.5 * h * (fp - fm) / curve
        if abs(shift) >= h:
            continue
        candidate = g + shift
        if f(candidate) >= f0 - 4.0 * _EPS * max(1.0, abs(f0)):
            g = candidate
    return g


def maximize_scalar(f, gamma_hi, grid_points=GRID_POINTS):
    """Locate the maximum of f over [0, inf) by grid sweep plus refinement.

    The initial grid is γ=0 plus grid_points logarithmically spaced samples
    up to gamma_hi.  The right end is doubled (appending samples) until the
    endpoint value drops below the best interior sample, or MAX_DOUBLINGS
    doublings elapse, so a maximum beyond the initial span is still caught.
    The winning bracket is refined by golden section to a relative interval
    of REFINE_RTOL.
    """
    hi = float(gamma_hi)
    if not np.isfinite(hi) or hi <= 0:
        raise ValueError("gamma_hi must be positive and finite")
    grid_points = max(int(grid_points), 8)
    gammas = [0.0] + list(
        np.logspace(np.log10(hi) - GRID_DECADES, np.log10(hi), grid_points)
    )
    values = [float(f(g)) for g in gammas]

    for _ in range(MAX_DOUBLINGS):
        best = int(np.argmax(values))
        if best < len(gammas) - 1 and values[-1] < values[best]:
            break
        lo_ext, hi = gammas[-1], 2.0 * gammas[-1]
        ext = list(np.geomspace(lo_ext, hi, 9)[1:])
        gammas.extend(ext)
        values.extend(float(f(g)) for g in ext)

    best = int(np.argmax(values))
    a = gammas[best - 1] if best > 0 else 0.0
    b = gammas[best + 1] if best < len(gammas) - 1 else gammas[-1]
    argmax = _golden_max(f, a, b)
    value = float(f(argmax))

    f0 = values[0]
    if argmax <= BOUNDARY_GAMMA or f0 >= value - 1e-12 * abs(f0):
        return BracketedMax(0.0, f0, True, float(argmax))
    return BracketedMax(float(argmax), value, False, float(argmax))
