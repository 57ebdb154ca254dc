"""Coupled two-target pencil, its penultimate singular value, and the
structured singular pair that drives the eigenvalue-assigning perturbation.

For targets mu1 != mu2 and a real coupling parameter γ the 2n x 2n matrix

    [ P(mu1)            0      ]
    [ γ P[mu1,mu2]   P(mu2)    ]

has a penultimate (second smallest) singular value whose maximum over
γ >= 0 governs the distance to polynomials having both targets in their
spectrum.  The profile routine locates that maximum; the pair-selection
routine extracts left/right singular vectors whose coupling
u2* P[mu1,mu2] v1 vanishes at the maximizer.
"""

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import PairSelectionFailure
from .matpoly import check_targets
from .numeric import GRID_POINTS, maximize_scalar, spectral_norm, svd

_EPS = np.finfo(float).eps

# singular values closer than this (relative to s_1) form one cluster
CLUSTER_RTOL = 1e-8
# acceptance level for the coupling of a searched combined pair
PAIR_COUPLING_RTOL = 1e-6


@dataclass(frozen=True)
class CoupledMatrix:
    """The 2n x 2n block matrix above, with its construction parameters."""

    matrix: np.ndarray
    gamma: float
    mu1: complex
    mu2: complex

    @property
    def n(self):
        return self.matrix.shape[0] // 2


def coupled_matrix(poly, mu1, mu2, gamma):
    """Assemble the coupled evaluation matrix for a real coupling gamma.

    gamma may carry either sign (the penultimate singular value is even in
    gamma); the distance search itself only uses gamma >= 0.
    """
    z1, z2 = check_targets(mu1, mu2)
    g = float(gamma)
    if not np.isfinite(g):
        raise ValueError("gamma must be finite")
    n = poly.n
    F = np.zeros((2 * n, 2 * n), dtype=complex)
    F[:n, :n] = poly(z1)
    F[n:, :n] = g * poly.divided_difference(z1, z2)
    F[n:, n:] = poly(z2)
    return CoupledMatrix(F, g, z1, z2)


def penultimate_triplet(coupled):
    """Second-smallest singular value with one left/right vector pair."""
    res = svd(coupled.matrix)
    k = res.singular_values.size - 2
    return (
        float(res.singular_values[k]),
        res.left_vectors[:, k],
        res.right_vectors[:, k],
    )


@dataclass(frozen=True)
class PairDiagnostics:
    """Residuals of the structured-pair identities, plus the s_1 scale.

    All four residuals vanish at the exact profile maximizer; away from it
    they are proportional to the coupling scalar.
    """

    coupling: float        # |u2* P[mu1,mu2] v1|
    cross_gram: float      # |u2* u1 - v2* v1|
    gram_gap: float        # || U*U - V*V ||
    hat_gram_gap: float    # || Uhat*Uhat - Vhat*Vhat ||
    scale: float           # s_1 of the coupled matrix


@dataclass(frozen=True)
class StructuredPair:
    """Singular vector halves (u1, u2, v1, v2) at a coupling value gamma.

    The hatted combinations use theta = gamma / (mu1 - mu2); v1 and vhat
    become eigenvectors of the perturbed polynomial.
    """

    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    theta: complex
    gamma: float
    s_value: float
    diagnostics: PairDiagnostics

    @cached_property
    def uhat(self):
        return self.u2 - self.theta * self.u1

    @cached_property
    def vhat(self):
        return self.v2 - self.theta * self.v1

    @property
    def U(self):
        return np.column_stack([self.u1, self.u2])

    @property
    def V(self):
        return np.column_stack([self.v1, self.v2])

    @property
    def Uhat(self):
        return np.column_stack([self.u1, self.uhat])

    @property
    def Vhat(self):
        return np.column_stack([self.v1, self.vhat])


def _build_pair(u, v, gamma, mu1, mu2, s_value, dd_matrix, scale):
    n = u.size // 2
    u1, u2, v1, v2 = u[:n], u[n:], v[:n], v[n:]
    theta = gamma / (mu1 - mu2)
    uhat, vhat = u2 - theta * u1, v2 - theta * v1
    U, V = np.column_stack([u1, u2]), np.column_stack([v1, v2])
    Uh, Vh = np.column_stack([u1, uhat]), np.column_stack([v1, vhat])
    diags = PairDiagnostics(
        coupling=float(abs(u2.conj() @ dd_matrix @ v1)),
        cross_gram=float(abs(u2.conj() @ u1 - v2.conj() @ v1)),
        gram_gap=spectral_norm(U.conj().T @ U - V.conj().T @ V),
        hat_gram_gap=spectral_norm(Uh.conj().T @ Uh - Vh.conj().T @ Vh),
        scale=float(scale),
    )
    return StructuredPair(u1, u2, v1, v2, theta, float(gamma), float(s_value), diags)


def _cluster_indices(s, pen):
    scale = s[0] if s[0] > 0 else 1.0
    return [i for i in range(s.size) if abs(s[i] - s[pen]) <= CLUSTER_RTOL * scale]


def select_singular_pair(poly, mu1, mu2, gamma, s_value=None):
    """Structured singular pair of the penultimate value at gamma > 0.

    A numerically simple penultimate value yields its unique pair.  For a
    cluster of k >= 2 values the combined pair (X c, Y c) is searched over
    unit vectors c in the cluster subspace, minimizing the coupling
    |(Xc)_2* P[mu1,mu2] (Yc)_1|; the minimum must reach
    PAIR_COUPLING_RTOL * s_1, which is guaranteed at the profile maximizer
    but generally impossible elsewhere (PairSelectionFailure).
    """
    z1, z2 = check_targets(mu1, mu2)
    g = float(gamma)
    if g <= 0:
        raise ValueError("pair selection requires gamma > 0")
    if s_value is not None and s_value <= 0:
        raise ValueError("pair selection requires a positive singular value")
    cm = coupled_matrix(poly, z1, z2, g)
    res = svd(cm.matrix)
    s = res.singular_values
    n = poly.n
    pen = 2 * n - 2
    scale = s[0]
    M = poly.divided_difference(z1, z2)
    cluster = _cluster_indices(s, pen)

    if len(cluster) == 1:
        return _build_pair(
            res.left_vectors[:, pen], res.right_vectors[:, pen],
            g, z1, z2, s[pen], M, scale,
        )

    X = res.left_vectors[:, cluster]
    Y = res.right_vectors[:, cluster]
    A = X[n:, :].conj().T @ M @ Y[:n, :]
    k = len(cluster)
    tol = PAIR_COUPLING_RTOL * scale

    def coupling_of(c):
        return abs(c.conj() @ A @ c)

    # the canonical pair first: a tight cluster around a simple value
    canon = np.zeros(k, dtype=complex)
    canon[cluster.index(pen)] = 1.0
    best_c, best_val = canon, coupling_of(canon)

    if best_val > tol:
        rng = np.random.default_rng(0)  # deterministic search
        for _ in range(512 * k):
            c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            c /= np.linalg.norm(c)
            val = coupling_of(c)
            if val < best_val:
                best_c, best_val = c, val

        def objective(x):
            c = x[:k] + 1j * x[k:]
            nrm = np.linalg.norm(c)
            if nrm == 0:
                return np.inf
            return coupling_of(c / nrm)

        x0 = np.concatenate([best_c.real, best_c.imag])
        opt = minimize(
            objective, x0, method="Nelder-Mead",
            options=dict(xatol=1e-14, fatol=1e-18 * max(scale, 1.0),
                         maxiter=4000 * k, maxfev=4000 * k),
        )
        if opt.fun < best_val:
            c = opt.x[:k] + 1j * opt.x[k:]
            best_c, best_val = c / np.linalg.norm(c), float(opt.fun)

    if best_val > tol:
        raise PairSelectionFailure(best_val, tol)
    return _build_pair(X @ best_c, Y @ best_c, g, z1, z2, s[pen], M, scale)


def rank_vhat(pair):
    """Numerical rank of the n x 2 hatted right-vector matrix."""
    V = pair.Vhat
    s = np.linalg.svd(V, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    n = V.shape[0]
    return int(np.sum(s > 2 * n * _EPS * s[0]))


@dataclass(frozen=True)
class GammaProfile:
    """Sampled curve γ -> penultimate singular value with its maximizer.

    dd_rank_deficient marks rank(P[mu1,mu2]) < 2, where decay of the
    profile at infinity, hence a finite maximizer, is no longer guaranteed
    and the search cap becomes the binding stop.  interior_argmax keeps the
    refined maximizer even when pinned to the boundary, so that a
    tiny-but-positive maximizer can still feed the positive-branch
    construction.
    """

    samples: tuple
    gamma_star: float
    s_star: float
    at_boundary: bool
    dd_rank_deficient: bool
    interior_argmax: float = 0.0


def default_gamma_cap(poly, mu1, mu2):
    """Search cap 10 (1+|mu1-mu2|) (1+|P(mu1)|+|P(mu2)|) / max(1, |P[mu1,mu2]|)."""
    z1, z2 = check_targets(mu1, mu2)
    num = 10.0 * (1.0 + abs(z1 - z2)) * (
        1.0 + spectral_norm(poly(z1)) + spectral_norm(poly(z2))
    )
    return num / max(1.0, spectral_norm(poly.divided_difference(z1, z2)))


class _Clustered(Exception):
    pass


def _coupling_real(poly, mu1, mu2, gamma, dd_matrix):
    """Re(u2* P[mu1,mu2] v1) for the penultimate pair; the profile slope.

    Raises _Clustered when the penultimate value is not numerically simple,
    since the canonical pair (and with it the sign) is then ill-defined.
    """
    cm = coupled_matrix(poly, mu1, mu2, gamma)
    res = svd(cm.matrix)
    s = res.singular_values
    pen = s.size - 2
    if len(_cluster_indices(s, pen)) > 1:
        raise _Clustered
    n = poly.n
    u = res.left_vectors[:, pen]
    v = res.right_vectors[:, pen]
    return float((u[n:].conj() @ dd_matrix @ v[:n]).real)


def _polish_maximizer(poly, mu1, mu2, g0, dd_matrix):
    """Sharpen the maximizer to machine precision via the coupling sign.

    Value-only refinement of a smooth maximum stalls near sqrt(eps); the
    coupling scalar changes sign across the maximizer and locates it to
    full precision.  Returns g0 unchanged when no clean sign change is
    found (boundary-adjacent or clustered profiles).
    """
    kappa = lambda g: _coupling_real(poly, mu1, mu2, g, dd_matrix)
    try:
        h = max(1e-8, 1e-6 * g0)
        for _ in range(12):
            lo = max(g0 - h, 0.25 * g0)
            hi = g0 + h
            klo, khi = kappa(lo), kappa(hi)
            if np.sign(klo) != np.sign(khi) and klo != 0.0:
                return float(
                    brentq(kappa, lo, hi, xtol=1e-15 * max(1.0, g0), rtol=4 * _EPS)
                )
            h *= 4.0
    except _Clustered:
        pass
    return g0


def profile_gamma(poly, mu1, mu2, gamma_max=None, grid_points=GRID_POINTS):
    """Profile the penultimate singular value over γ >= 0 and locate its max.

    Warns (and tags the result) when rank(P[mu1,mu2]) < 2.  The maximizer
    from the grid/golden-section search is polished through the coupling
    sign change whenever the value there is numerically simple.
    """
    z1, z2 = check_targets(mu1, mu2)
    M = poly.divided_difference(z1, z2)
    sM = np.linalg.svd(M, compute_uv=False)
    dd_rank = int(np.sum(sM > max(M.shape) * _EPS * sM[0])) if sM[0] > 0 else 0
    deficient = dd_rank < 2
    if deficient:
        warnings.warn(
            "rank(P[mu1,mu2]) < 2: a finite profile maximizer is not "
            "guaranteed; the search cap bounds the result",
            stacklevel=2,
        )

    cap = float(gamma_max) if gamma_max is not None else default_gamma_cap(poly, z1, z2)
    trace = {}

    def f(g):
        if g not in trace:
            cm = coupled_matrix(poly, z1, z2, g)
            trace[g] = float(np.linalg.svd(cm.matrix, compute_uv=False)[-2])
        return trace[g]

    bracket = maximize_scalar(f, cap, grid_points)
    gamma_star, s_star = bracket.argmax, bracket.value
    if not bracket.at_boundary:
        gamma_star = _polish_maximizer(poly, z1, z2, gamma_star, M)
        s_star = f(gamma_star)

    samples = tuple(sorted(trace.items()))
    return GammaProfile(
        samples=samples,
        gamma_star=float(gamma_star),
        s_star=float(s_star),
        at_boundary=bracket.at_boundary,
        dd_rank_deficient=deficient,
        interior_argmax=float(bracket.interior_argmax),
    )
