"""Eigenvalue-assigning perturbations and the distance interval [β_low, β_up].

The lower bound divides the maximized penultimate singular value by the
norm of a 2 x 2 weight matrix.  The upper bound comes from an explicit
rank-two perturbation built from the structured singular pair (positive
maximizer branch) or from the smallest singular triplets of the two target
evaluations (boundary branch), spread across the polynomial coefficients
proportionally to the weights.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import distance as dist
from .errors import (
    AlphaSingularity,
    ConstructionError,
    DependentEigenvectors,
    RankDeficientVhat,
    ShapeMismatch,
)
from .matpoly import MatrixPolynomial, check_pairing, check_targets
from .numeric import GRID_POINTS, _golden_max, pseudoinverse, spectral_norm

_EPS = np.finfo(float).eps

# s_star below this (relative to s_1) means both targets already belong
# to the spectrum and the zero perturbation is optimal
ZERO_DISTANCE_RTOL = 1e-12

# |1 + alpha_i| below this leaves the rank-two core undefined
ALPHA_TOL = 1e-12

# smallest singular value of [v1 v2] (unit columns) certifying independence
INDEPENDENCE_TOL = 1e-8

# a positive maximizer below this fraction of the search cap counts as tiny:
# the rank-two construction is then ill-conditioned (pinv(Vhat) ~ 1/gamma)
# and the boundary construction is attempted as well
TINY_GAMMA_FACTOR = 1e-6

BRANCH_POSITIVE = "gamma_positive"
BRANCH_ZERO = "gamma_zero"


def _phase_powers(mu, degree):
    """Powers (conj(mu)/|mu|)^j for j = 0..degree.

    For mu = 0 the factor is defined as 1 at j = 0 and the j >= 1 entries
    are zero, the limiting value of the terms they multiply.
    """
    out = np.zeros(degree + 1, dtype=complex)
    out[0] = 1.0
    if abs(mu) > 0.0:
        p = np.conj(mu) / abs(mu)
        out[1:] = p ** np.arange(1, degree + 1)
    return out


def _weight_matrix_norm(weights, z1, z2, gamma):
    den = np.array(
        [
            [weights(abs(z1)), 0.0],
            [gamma * weights.abs_divided_difference(z1, z2), weights(abs(z2))],
        ]
    )
    return float(np.linalg.norm(den, 2))


def lower_bound(poly, weights, mu1, mu2, gamma):
    """Distance lower bound at a coupling value gamma >= 0.

    The penultimate singular value of the coupled matrix divided by the
    spectral norm of [[w(|mu1|), 0], [gamma |w[mu1,mu2]|, w(|mu2|)]].
    At gamma = 0 the denominator reduces to max(w(|mu1|), w(|mu2|)).
    """
    check_pairing(poly, weights)
    z1, z2 = check_targets(mu1, mu2)
    g = float(gamma)
    if g < 0:
        raise ValueError("gamma must be nonnegative")
    cm = dist.coupled_matrix(poly, z1, z2, g)
    num = float(np.linalg.svd(cm.matrix, compute_uv=False)[-2])
    return num / _weight_matrix_norm(weights, z1, z2, g)


def interpolation_factors(weights, mu1, mu2):
    """Scalars (alpha1, alpha2) with Δ(mu_i) = (1 + alpha_i)/2 * Δ.

    alpha1 = w(|mu2|)^-1 Σ_j (conj(mu2)/|mu2|)^j mu1^j ω_j and alpha2 is
    the same with the roles swapped.  Zero targets follow the phase
    convention of _phase_powers.
    """
    z1, z2 = complex(mu1), complex(mu2)
    m = weights.degree
    ph1 = _phase_powers(z1, m)
    ph2 = _phase_powers(z2, m)
    pow1 = z1 ** np.arange(m + 1)
    pow2 = z2 ** np.arange(m + 1)
    w = weights.weights
    alpha1 = complex(np.sum(ph2 * pow1 * w)) / weights(abs(z2))
    alpha2 = complex(np.sum(ph1 * pow2 * w)) / weights(abs(z1))
    return alpha1, alpha2


def core_perturbation(pair, s_star, factors):
    """Rank-two core  -s* Uhat diag(2/(1+a1), 2/(1+a2)) pinv(Vhat).

    Requires Vhat to be full column rank and both 1 + alpha_i away from
    zero; the core is invariant under the joint unit phase of the
    singular pair.
    """
    a1, a2 = factors
    if min(abs(1.0 + a1), abs(1.0 + a2)) < ALPHA_TOL:
        raise AlphaSingularity(
            f"1 + alpha is numerically zero (alphas {a1:.3e}, {a2:.3e})"
        )
    if dist.rank_vhat(pair) != 2:
        raise RankDeficientVhat("hatted right-vector matrix is rank deficient")
    D = np.diag([2.0 / (1.0 + a1), 2.0 / (1.0 + a2)])
    return -float(s_star) * (pair.Uhat @ D @ pseudoinverse(pair.Vhat))


def coefficient_updates(core, weights, mu1, mu2):
    """Spread the core over the coefficients honoring the weights.

    Δ_j = (ω_j / 2) ((conj(mu1)/|mu1|)^j / w(|mu1|)
                     + (conj(mu2)/|mu2|)^j / w(|mu2|)) * core,
    so a zero weight forces a zero update and the j = 0 update attains the
    upper bound exactly.
    """
    z1, z2 = complex(mu1), complex(mu2)
    m = weights.degree
    ph1 = _phase_powers(z1, m)
    ph2 = _phase_powers(z2, m)
    w1v, w2v = weights(abs(z1)), weights(abs(z2))
    return [
        0.5 * (ph1[j] / w1v + ph2[j] / w2v) * weights.weights[j] * core
        for j in range(m + 1)
    ]


def upper_bound(core, weights, mu1, mu2):
    """Distance upper bound  (1/w(|mu1|) + 1/w(|mu2|)) ||core|| / 2."""
    z1, z2 = complex(mu1), complex(mu2)
    return float(
        0.5 * (1.0 / weights(abs(z1)) + 1.0 / weights(abs(z2)))
        * spectral_norm(core)
    )


def perturbed_poly(poly, updates):
    """Coefficient-wise sum P + Δ.

    A perturbed leading coefficient that turns numerically singular is
    reported as a warning, not rejected: the construction stays valid,
    only the companion eigenvalue check becomes unavailable.
    """
    if len(updates) != poly.degree + 1:
        raise ShapeMismatch(
            f"{len(updates)} updates for a degree-{poly.degree} polynomial"
        )
    coeffs = []
    for A, D in zip(poly.coeffs, updates):
        D = np.asarray(D, dtype=complex)
        if D.shape != A.shape:
            raise ShapeMismatch("update shape does not match coefficient")
        coeffs.append(A + D)
    q = MatrixPolynomial(coeffs, check_leading=False)
    if not q.leading_is_regular():
        warnings.warn(
            "perturbed leading coefficient is numerically singular",
            stacklevel=2,
        )
    return q


@dataclass(frozen=True)
class ConstantPerturbation:
    """Constant update from the smallest singular triplets of P(mu_i)."""

    core: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    sigma1: float
    sigma2: float


def constant_perturbation(poly, mu1, mu2):
    """Boundary-branch core  -[u1 u2] diag(σ1, σ2) pinv([v1 v2]).

    (u_i, σ_i, v_i) is the smallest singular triplet of P(mu_i).  The two
    right vectors must be numerically independent unless both σ_i already
    vanish, in which case the zero update suffices.
    """
    z1, z2 = check_targets(mu1, mu2)
    n = poly.n
    triplets = []
    for z in (z1, z2):
        U, s, Vh = np.linalg.svd(poly(z))
        triplets.append((float(s[-1]), U[:, -1], Vh[-1, :].conj(), float(s[0])))
    (sig1, u1, v1, top1), (sig2, u2, v2, top2) = triplets

    already1 = sig1 <= n * _EPS * max(top1, 1.0)
    already2 = sig2 <= n * _EPS * max(top2, 1.0)
    if already1 and already2:
        return ConstantPerturbation(
            np.zeros((n, n), dtype=complex), u1, u2, v1, v2, sig1, sig2
        )

    V = np.column_stack([v1, v2])
    if np.linalg.svd(V, compute_uv=False)[-1] <= INDEPENDENCE_TOL:
        raise DependentEigenvectors(
            "designated right singular vectors are numerically parallel"
        )
    core = -np.column_stack([u1, u2]) @ np.diag([sig1, sig2]) @ pseudoinverse(V)
    return ConstantPerturbation(core, u1, u2, v1, v2, sig1, sig2)


def upper_bound_constant(core, weights):
    """Boundary-branch upper bound ||core|| / ω_0."""
    return spectral_norm(core) / float(weights.weights[0])


@dataclass(frozen=True)
class GammaBounds:
    """Both bounds and the construction pieces at one coupling value."""

    gamma: float
    s_value: float
    beta_low: float
    beta_up: float
    pair: object
    core: np.ndarray


def bounds_at(poly, weights, mu1, mu2, gamma):
    """Evaluate β_low and β_up (with the pair and core) at one gamma > 0.

    The single evaluation path shared by reports, sweeps and the gamma
    optimizer, so identical inputs give identical numbers everywhere.
    Construction errors (rank deficiency, alpha singularity, failed pair
    selection) propagate to the caller.
    """
    check_pairing(poly, weights)
    z1, z2 = check_targets(mu1, mu2)
    g = float(gamma)
    if g <= 0:
        raise ValueError("bounds_at requires gamma > 0")
    cm = dist.coupled_matrix(poly, z1, z2, g)
    s = np.linalg.svd(cm.matrix, compute_uv=False)
    s_val = float(s[-2])
    blow = s_val / _weight_matrix_norm(weights, z1, z2, g)
    if s_val <= ZERO_DISTANCE_RTOL * max(1.0, s[0]):
        n = poly.n
        return GammaBounds(g, s_val, blow, 0.0, None, np.zeros((n, n), complex))
    pair = dist.select_singular_pair(poly, z1, z2, g, s_val)
    factors = interpolation_factors(weights, z1, z2)
    core = core_perturbation(pair, pair.s_value, factors)
    bup = upper_bound(core, weights, z1, z2)
    return GammaBounds(g, s_val, blow, bup, pair, core)


@dataclass(frozen=True)
class PerturbationResult:
    """Distance interval plus the explicit eigenvalue-assigning perturbation.

    branch records which construction produced Q; gamma_used is the
    coupling value the construction ran at (the profile maximizer unless
    the gap optimizer moved it).  residual_mu* are ||Q(mu_i) x_i|| for the
    designated eigenvectors stored in eigvec_mu*.
    """

    branch: str
    gamma_star: float
    s_star: float
    gamma_used: float
    beta_low: float
    beta_up: float
    delta_coeffs: tuple
    q: MatrixPolynomial
    residual_mu1: float
    residual_mu2: float
    eigvec_mu1: np.ndarray
    eigvec_mu2: np.ndarray
    pair_diagnostics: object
    profile: dist.GammaProfile


def _residual(q, mu, vec):
    return float(np.linalg.norm(q(mu) @ vec))


def _positive_branch(poly, weights, mu1, mu2, gamma, profile):
    gb = bounds_at(poly, weights, mu1, mu2, gamma)
    if gb.pair is None:
        return _exact_result(poly, weights, mu1, mu2, profile, gamma)
    deltas = coefficient_updates(gb.core, weights, mu1, mu2)
    q = perturbed_poly(poly, deltas)
    vec1, vec2 = gb.pair.v1, gb.pair.vhat
    return PerturbationResult(
        branch=BRANCH_POSITIVE,
        gamma_star=profile.gamma_star,
        s_star=profile.s_star,
        gamma_used=float(gamma),
        beta_low=gb.beta_low,
        beta_up=gb.beta_up,
        delta_coeffs=tuple(deltas),
        q=q,
        residual_mu1=_residual(q, mu1, vec1),
        residual_mu2=_residual(q, mu2, vec2),
        eigvec_mu1=vec1,
        eigvec_mu2=vec2,
        pair_diagnostics=gb.pair.diagnostics,
        profile=profile,
    )


def _zero_branch(poly, weights, mu1, mu2, profile):
    cp = constant_perturbation(poly, mu1, mu2)
    n = poly.n
    deltas = [np.zeros((n, n), dtype=complex) for _ in range(poly.degree + 1)]
    deltas[0] = cp.core
    q = perturbed_poly(poly, deltas)
    return PerturbationResult(
        branch=BRANCH_ZERO,
        gamma_star=profile.gamma_star,
        s_star=profile.s_star,
        gamma_used=0.0,
        beta_low=lower_bound(poly, weights, mu1, mu2, 0.0),
        beta_up=upper_bound_constant(cp.core, weights),
        delta_coeffs=tuple(deltas),
        q=q,
        residual_mu1=_residual(q, mu1, cp.v1),
        residual_mu2=_residual(q, mu2, cp.v2),
        eigvec_mu1=cp.v1,
        eigvec_mu2=cp.v2,
        pair_diagnostics=None,
        profile=profile,
    )


def _exact_result(poly, weights, mu1, mu2, profile, gamma_used):
    """Both targets already in the spectrum: zero perturbation, zero bounds."""
    n = poly.n
    vecs = []
    for z in (mu1, mu2):
        _, _, Vh = np.linalg.svd(poly(z))
        vecs.append(Vh[-1, :].conj())
    deltas = tuple(np.zeros((n, n), dtype=complex) for _ in range(poly.degree + 1))
    return PerturbationResult(
        branch=BRANCH_ZERO if profile.at_boundary else BRANCH_POSITIVE,
        gamma_star=profile.gamma_star,
        s_star=profile.s_star,
        gamma_used=float(gamma_used),
        beta_low=0.0,
        beta_up=0.0,
        delta_coeffs=deltas,
        q=poly,
        residual_mu1=_residual(poly, mu1, vecs[0]),
        residual_mu2=_residual(poly, mu2, vecs[1]),
        eigvec_mu1=vecs[0],
        eigvec_mu2=vecs[1],
        pair_diagnostics=None,
        profile=profile,
    )


def _verified(result, mu1, mu2):
    lim1 = 1e-8 * (1.0 + spectral_norm(result.q(mu1)))
    lim2 = 1e-8 * (1.0 + spectral_norm(result.q(mu2)))
    return result.residual_mu1 <= lim1 and result.residual_mu2 <= lim2


def distance_bounds(
    poly,
    weights,
    mu1,
    mu2,
    gamma_max=None,
    grid_points=GRID_POINTS,
    optimize_gamma=False,
):
    """Compute the distance interval and the attaining perturbation.

    Profiles the penultimate singular value over γ >= 0, picks the branch
    from the maximizer location, builds Q = P + Δ, and reports the bounds
    with verification residuals.  With optimize_gamma the positive-branch
    construction runs at the gap-minimizing γ instead of the profile
    maximizer.  A maximizer that is positive but tiny triggers both
    constructions; the smaller verified upper bound wins.
    """
    check_pairing(poly, weights)
    z1, z2 = check_targets(mu1, mu2)
    profile = dist.profile_gamma(
        poly, z1, z2, gamma_max=gamma_max, grid_points=grid_points
    )

    scale = spectral_norm(
        dist.coupled_matrix(poly, z1, z2, profile.gamma_star).matrix
    )
    if profile.s_star <= ZERO_DISTANCE_RTOL * max(1.0, scale):
        return _exact_result(poly, weights, z1, z2, profile, profile.gamma_star)

    if profile.at_boundary:
        return _zero_branch(poly, weights, z1, z2, profile)

    gamma = profile.gamma_star
    if optimize_gamma:
        search = optimize_bounds(
            poly, weights, z1, z2, gamma_max=gamma_max,
            grid_points=grid_points, profile=profile,
        )
        gamma = search.gap_gamma

    cap = gamma_max if gamma_max is not None else dist.default_gamma_cap(poly, z1, z2)
    tiny = profile.gamma_star <= TINY_GAMMA_FACTOR * max(1.0, cap)
    positive_result = positive_error = None
    try:
        positive_result = _positive_branch(poly, weights, z1, z2, gamma, profile)
    except ConstructionError as exc:
        positive_error = exc
    if not tiny:
        if positive_error is not None:
            raise positive_error
        return positive_result

    zero_result = None
    try:
        zero_result = _zero_branch(poly, weights, z1, z2, profile)
    except ConstructionError:
        pass
    candidates = [
        r
        for r in (positive_result, zero_result)
        if r is not None and _verified(r, z1, z2)
    ]
    if candidates:
        return min(candidates, key=lambda r: r.beta_up)
    if positive_result is not None:
        return positive_result
    if zero_result is not None:
        return zero_result
    raise positive_error


@dataclass(frozen=True)
class BoundSearch:
    """Outcome of the three coupling-value searches over the bound curves."""

    gap_gamma: float
    gap_bounds: tuple
    best_low_gamma: float
    best_low_bounds: tuple
    best_up_gamma: float
    best_up_bounds: tuple
    skipped: tuple


def optimize_bounds(
    poly, weights, mu1, mu2, gamma_max=None, grid_points=GRID_POINTS, profile=None
):
    """Search γ > 0 for the tightest bounds, as three scalar optimizations.

    Over admissible γ (full-rank Vhat, successful pair selection) the gap
    β_up - β_low is minimized, β_low maximized and β_up minimized
    independently; the three winning γ generally differ.  Candidates where
    the construction fails are skipped and recorded.
    """
    check_pairing(poly, weights)
    z1, z2 = check_targets(mu1, mu2)
    if profile is None:
        profile = dist.profile_gamma(
            poly, z1, z2, gamma_max=gamma_max, grid_points=grid_points
        )
    if profile.at_boundary:
        raise ValueError("bound optimization needs a positive profile maximizer")

    skipped = []
    cache = {}

    def bounds(g):
        if g not in cache:
            try:
                gb = bounds_at(poly, weights, z1, z2, g)
                cache[g] = (gb.beta_low, gb.beta_up)
            except (ConstructionError, ValueError) as exc:
                skipped.append((g, str(exc)))
                cache[g] = None
        return cache[g]

    candidates = sorted(
        {g for g, _ in profile.samples if g > 0} | {profile.gamma_star}
    )
    admissible = [g for g in candidates if bounds(g) is not None]
    if not admissible:
        raise RankDeficientVhat("no admissible gamma in the profile grid")

    def minimize_cost(cost):
        def raw(g):
            val = bounds(g)
            return cost(val) if val is not None else np.inf

        best = min(admissible, key=lambda g: (raw(g), g))
        i = candidates.index(best)
        lo = candidates[i - 1] if i > 0 else best / 2.0
        hi = candidates[i + 1] if i + 1 < len(candidates) else best * 2.0
        refined = _golden_max(lambda g: -raw(g), lo, hi)
        return refined if raw(refined) < raw(best) else best

    g_gap = minimize_cost(lambda v: v[1] - v[0])
    g_low = minimize_cost(lambda v: -v[0])
    g_up = minimize_cost(lambda v: v[1])
    return BoundSearch(
        gap_gamma=float(g_gap),
        gap_bounds=tuple(bounds(g_gap)),
        best_low_gamma=float(g_low),
        best_low_bounds=tuple(bounds(g_low)),
        best_up_gamma=float(g_up),
        best_up_bounds=tuple(bounds(g_up)),
        skipped=tuple(skipped),
    )


@dataclass(frozen=True)
class VerifyReport:
    """Numerical certificate for a PerturbationResult."""

    residual_mu1: float
    residual_mu2: float
    eig_dist_mu1: float
    eig_dist_mu2: float
    membership_max: float
    membership_index: int
    beta_up: float
    zero_weight_clean: bool


def verify(result, mu1, mu2, weights):
    """Re-derive the certificate quantities from the stored Q and Δ.

    Reports eigenvector residuals, the distance from each target to the
    nearest companion eigenvalue of Q, the largest ratio ||Δ_j|| / ω_j
    over positive weights with its attaining index (boundary membership
    witness), and whether every zero-weight coefficient update is exactly
    zero.
    """
    q = result.q
    res1 = _residual(q, mu1, result.eigvec_mu1)
    res2 = _residual(q, mu2, result.eigvec_mu2)
    try:
        eigs = q.eigenvalues()
        d1 = float(np.min(np.abs(eigs - complex(mu1))))
        d2 = float(np.min(np.abs(eigs - complex(mu2))))
    except Exception:
        d1 = d2 = float("inf")
    ratios = [
        (spectral_norm(D) / w, j)
        for j, (D, w) in enumerate(zip(result.delta_coeffs, weights.weights))
        if w > 0
    ]
    best_ratio, best_idx = max(ratios) if ratios else (0.0, -1)
    clean = all(
        spectral_norm(D) == 0.0
        for D, w in zip(result.delta_coeffs, weights.weights)
        if w == 0
    )
    return VerifyReport(
        residual_mu1=res1,
        residual_mu2=res2,
        eig_dist_mu1=d1,
        eig_dist_mu2=d2,
        membership_max=float(best_ratio),
        membership_index=int(best_idx),
        beta_up=result.beta_up,
        zero_weight_clean=clean,
    )
