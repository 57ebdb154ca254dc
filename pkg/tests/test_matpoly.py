import numpy as np
import pytest

from polydist import MatrixPolynomial, WeightSet
from polydist.errors import (
    DegenerateTargets,
    ShapeMismatch,
    SingularLeadingCoefficient,
)
from polydist.matpoly import check_pairing, check_targets

from conftest import random_instance, random_targets


class TestEval:
    def test_example1_at_one(self, example1):
        P, _, _, _ = example1
        np.testing.assert_allclose(P(1.0), [[-8, 3], [-3, 4]], atol=1e-12)

    def test_at_zero_gives_constant_term(self):
        rng = np.random.default_rng(1)
        P = random_instance(rng)
        np.testing.assert_allclose(P(0.0), P.coeffs[0], atol=0)

    def test_linear_pencil(self):
        A = np.array([[1.0, 2.0], [3.0, 4.0]])
        P = MatrixPolynomial([-A, np.eye(2)])
        mu = 0.7 - 0.2j
        np.testing.assert_allclose(P(mu), mu * np.eye(2) - A, atol=1e-14)

    def test_horner_matches_power_sum(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            P = random_instance(rng, scale=10.0)
            mu = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
            naive = sum(A * mu ** j for j, A in enumerate(P.coeffs))
            scale = max(np.abs(naive).max(), 1.0)
            np.testing.assert_allclose(P(mu), naive, atol=1e-12 * scale)


class TestDividedDifference:
    def test_degree_one_is_slope(self):
        rng = np.random.default_rng(3)
        P = random_instance(rng, m=1)
        np.testing.assert_allclose(
            P.divided_difference(0.3 + 1j, -2.0), P.coeffs[1], atol=1e-14
        )

    def test_example1_closed_form(self, example1):
        P, _, mu1, mu2 = example1
        expected = np.array([[-17 - 5j, 26 + 10j], [-11 - 4j, 14 + 5j]])
        np.testing.assert_allclose(
            P.divided_difference(mu1, mu2), expected, atol=1e-12
        )

    def test_constant_tail_gives_zero(self):
        Z = np.zeros((2, 2))
        P = MatrixPolynomial([[[5, 1], [2, 3]], Z], check_leading=False)
        np.testing.assert_allclose(P.divided_difference(1.0, 2.0), Z, atol=0)

    def test_quotient_identity(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            P = random_instance(rng)
            z1, z2 = random_targets(rng)
            lhs = P.divided_difference(z1, z2) * (z1 - z2)
            rhs = P(z1) - P(z2)
            scale = max(np.abs(rhs).max(), 1.0)
            np.testing.assert_allclose(lhs, rhs, atol=1e-10 * scale)

    def test_symmetry_exact(self):
        rng = np.random.default_rng(5)
        P = random_instance(rng)
        z1, z2 = random_targets(rng)
        a = P.divided_difference(z1, z2)
        b = P.divided_difference(z2, z1)
        assert np.array_equal(a, b)

    def test_degenerate_targets_rejected(self):
        rng = np.random.default_rng(6)
        P = random_instance(rng)
        with pytest.raises(DegenerateTargets):
            P.divided_difference(2.0, 2.0)
        with pytest.raises(DegenerateTargets):
            P.divided_difference(1e8, 1e8 + 0.1)


class TestWeights:
    def test_unit_weights_at_two(self):
        assert WeightSet([1, 1, 1])(2.0) == pytest.approx(7.0)

    def test_example1_weight_value(self):
        w = WeightSet([3.1623, 4.4966, 12.8310])
        assert w(abs(2 + 1j)) == pytest.approx(77.372, abs=1e-3)

    def test_at_zero_gives_constant_weight(self):
        w = WeightSet([0.7, 3.0, 0.1])
        assert w(0.0) == 0.7

    def test_abs_divided_difference_constant_weights(self):
        w = WeightSet([2.5, 0.0, 0.0])
        assert w.abs_divided_difference(1.0, 2j) == 0.0

    def test_abs_divided_difference_linear(self):
        assert WeightSet([1, 1]).abs_divided_difference(1.0, -1.0) == pytest.approx(1.0)

    def test_abs_divided_difference_quadratic(self):
        assert WeightSet([1, 1, 1]).abs_divided_difference(1.0, 0.0) == pytest.approx(2.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            WeightSet([0.0, 1.0])
        with pytest.raises(ValueError):
            WeightSet([1.0, -0.5])
        with pytest.raises(ValueError):
            WeightSet([np.nan])

    def test_pairing(self, example1):
        P, w, _, _ = example1
        check_pairing(P, w)
        with pytest.raises(ShapeMismatch):
            check_pairing(P, WeightSet([1.0, 1.0]))

    def test_coefficient_norms_match_example1(self, example1):
        _, w, _, _ = example1
        np.testing.assert_allclose(
            w.weights, [3.1623, 4.4966, 12.8310], atol=1e-4
        )


class TestEigenvalues:
    def test_diagonal_pencil(self):
        P = MatrixPolynomial([-np.diag([1.0, 2.0]), np.eye(2)])
        np.testing.assert_allclose(sorted(P.eigenvalues().real), [1, 2], atol=1e-12)

    def test_quadratic_identity(self):
        P = MatrixPolynomial([-np.eye(2), np.zeros((2, 2)), np.eye(2)])
        eigs = np.sort_complex(P.eigenvalues())
        np.testing.assert_allclose(eigs, [-1, -1, 1, 1], atol=1e-10)

    def test_pencil_matches_matrix_eigenvalues(self):
        rng = np.random.default_rng(7)
        for n in (2, 4, 8):
            A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            P = MatrixPolynomial([-A, np.eye(n)])
            got = np.sort_complex(P.eigenvalues())
            want = np.sort_complex(np.linalg.eigvals(A))
            np.testing.assert_allclose(got, want, atol=1e-8)

    def test_singular_leading_rejected(self):
        with pytest.raises(SingularLeadingCoefficient):
            MatrixPolynomial([np.eye(2), np.zeros((2, 2))])
        P = MatrixPolynomial(
            [np.eye(2), np.zeros((2, 2))], check_leading=False
        )
        with pytest.raises(SingularLeadingCoefficient):
            P.eigenvalues()


class TestValidation:
    def test_structure_checks(self):
        with pytest.raises(ShapeMismatch):
            MatrixPolynomial([np.eye(2)])  # degree 0
        with pytest.raises(ShapeMismatch):
            MatrixPolynomial([np.eye(2), np.eye(3)])
        with pytest.raises(ShapeMismatch):
            MatrixPolynomial([np.ones((2, 3)), np.ones((2, 3))])
        with pytest.raises(ValueError):
            MatrixPolynomial([np.full((2, 2), np.nan), np.eye(2)])

    def test_targets(self):
        z1, z2 = check_targets(1.0, 2 + 1j)
        assert z1 == 1.0 and z2 == 2 + 1j
        with pytest.raises(ValueError):
            check_targets(np.inf, 0.0)

    def test_coefficients_are_readonly(self, example1):
        P, _, _, _ = example1
        with pytest.raises(ValueError):
            P.coeffs[0][0, 0] = 99.0
