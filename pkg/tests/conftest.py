import numpy as np
import pytest

from polydist import MatrixPolynomial, WeightSet, check_targets
from polydist.errors import DegenerateTargets


@pytest.fixture
def example1():
    """2x2 quadratic with coefficient-norm weights, targets 1 and 2+i."""
    P = MatrixPolynomial(
        [
            [[-1, -3], [0, 0]],
            [[-2, -4], [1, -1]],
            [[-5, 10], [-4, 5]],
        ]
    )
    return P, WeightSet.coefficient_norms(P), 1.0 + 0.0j, 2.0 + 1.0j


@pytest.fixture
def example2():
    """3x3 quadratic with unit weights, targets 5 and -1 (boundary case)."""
    P = MatrixPolynomial(
        [
            [[9, 7, 6], [2, 7, -4], [-2, 6, 5]],
            [[6, -4, 0], [1, -5, 5], [1, -1, 10]],
            [[3, 0, 1], [8, -1, 0], [4, 2, 3]],
        ]
    )
    return P, WeightSet.ones(2), 5.0 + 0.0j, -1.0 + 0.0j


# published 4-decimal coefficient matrices of the Example-1 perturbation
EX1_DELTA = [
    np.array(
        [
            [0.1588 - 0.1576j, -0.3627 + 0.0772j],
            [0.4575 + 0.1517j, -0.6326 - 0.0949j],
        ]
    ),
    np.array(
        [
            [0.1999 - 0.2403j, -0.4941 + 0.1557j],
            [0.6563 + 0.1500j, -0.8922 - 0.0478j],
        ]
    ),
    np.array(
        [
            [0.4834 - 0.6940j, -1.2959 + 0.5336j],
            [1.8038 + 0.2529j, -2.4162 + 0.0769j],
        ]
    ),
]

# published constant perturbation of Example 2
EX2_DELTA0 = np.array(
    [
        [-0.6257, 0.8167, -0.3709],
        [-1.5026, 0.0959, 0.1659],
        [3.6390, -1.0783, 0.0774],
    ]
)


def random_targets(rng, span=3.0, min_modulus=0.2, min_gap=0.1):
    """Distinct nonzero complex targets, comfortably separated."""
    while True:
        z1 = complex(rng.uniform(-span, span), rng.uniform(-span, span))
        z2 = complex(rng.uniform(-span, span), rng.uniform(-span, span))
        if min(abs(z1), abs(z2)) < min_modulus or abs(z1 - z2) < min_gap:
            continue
        try:
            check_targets(z1, z2)
        except DegenerateTargets:
            continue
        return z1, z2


def random_instance(rng, n=None, m=None, scale=5.0):
    """Random real-coefficient polynomial with well-conditioned leading term."""
    n = int(n if n is not None else rng.integers(2, 4))
    m = int(m if m is not None else rng.integers(1, 4))
    while True:
        coeffs = [rng.uniform(-scale, scale, (n, n)) for _ in range(m + 1)]
        s = np.linalg.svd(coeffs[-1], compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return MatrixPolynomial(coeffs)
