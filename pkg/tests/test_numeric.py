import numpy as np
import pytest

from polydist import coupled_matrix, maximize_scalar, pseudoinverse, svd
from polydist.numeric import BracketedMax


def _random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestSvd:
    def test_diagonal(self):
        res = svd(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(res.singular_values, [3.0, 1.0])
        # vectors are standard basis up to unit phase
        np.testing.assert_allclose(np.abs(res.left_vectors), np.eye(2), atol=1e-14)
        np.testing.assert_allclose(np.abs(res.right_vectors), np.eye(2), atol=1e-14)

    def test_zero_matrix(self):
        res = svd(np.zeros((3, 3)))
        np.testing.assert_allclose(res.singular_values, 0.0)

    def test_reconstruction(self):
        rng = np.random.default_rng(10)
        A = _random_complex(rng, (4, 4))
        res = svd(A)
        rebuilt = (
            res.left_vectors * res.singular_values
        ) @ res.right_vectors.conj().T
        np.testing.assert_allclose(rebuilt, A, atol=1e-10 * res.singular_values[0])

    def test_pair_identities_and_order(self):
        rng = np.random.default_rng(11)
        A = _random_complex(rng, (5, 3))
        res = svd(A)
        s, U, V = res.singular_values, res.left_vectors, res.right_vectors
        assert np.all(np.diff(s) <= 0)
        np.testing.assert_allclose(np.linalg.norm(U, axis=0), 1.0, atol=1e-12)
        np.testing.assert_allclose(np.linalg.norm(V, axis=0), 1.0, atol=1e-12)
        np.testing.assert_allclose(A @ V, U * s, atol=1e-10 * s[0])
        np.testing.assert_allclose(A.conj().T @ U, V * s, atol=1e-10 * s[0])


class TestPseudoinverse:
    def test_inverse_of_nonsingular(self):
        rng = np.random.default_rng(12)
        A = _random_complex(rng, (4, 4)) + 4 * np.eye(4)
        np.testing.assert_allclose(
            pseudoinverse(A), np.linalg.inv(A), atol=1e-10 * np.linalg.norm(A, 2)
        )

    def test_left_inverse_of_tall_full_rank(self):
        rng = np.random.default_rng(13)
        V = _random_complex(rng, (6, 2))
        np.testing.assert_allclose(pseudoinverse(V) @ V, np.eye(2), atol=1e-10)

    def test_unit_column(self):
        e1 = np.zeros((3, 1))
        e1[0, 0] = 1.0
        np.testing.assert_allclose(pseudoinverse(e1), e1.T, atol=1e-14)

    def test_moore_penrose_identities(self):
        rng = np.random.default_rng(14)
        for trial in range(12):
            rows = int(rng.integers(2, 9))
            cols = int(rng.integers(2, 9))
            A = _random_complex(rng, (rows, cols))
            if trial % 3 == 0:  # force rank deficiency
                A[:, -1] = A[:, 0] * (1.5 - 0.5j)
            X = pseudoinverse(A)
            scale = max(np.linalg.norm(A, 2), 1.0)
            np.testing.assert_allclose(A @ X @ A, A, atol=1e-9 * scale)
            np.testing.assert_allclose(X @ A @ X, X, atol=1e-9 * scale)
            np.testing.assert_allclose(
                (A @ X).conj().T, A @ X, atol=1e-9
            )
            np.testing.assert_allclose(
                (X @ A).conj().T, X @ A, atol=1e-9
            )

    def test_zero_maps_to_zero(self):
        assert not pseudoinverse(np.zeros((2, 5))).any()


class TestMaximizeScalar:
    def test_parabola(self):
        res = maximize_scalar(lambda g: -(g - 2.0) ** 2 + 5.0, 10.0)
        assert isinstance(res, BracketedMax)
        assert not res.at_boundary
        assert res.argmax == pytest.approx(2.0, abs=1e-8)
        assert res.value == pytest.approx(5.0, abs=1e-8)

    def test_decreasing_profile_hits_boundary(self):
        res = maximize_scalar(lambda g: 1.0 / (1.0 + g), 10.0)
        assert res.at_boundary
        assert res.argmax == 0.0
        assert res.value == pytest.approx(1.0)

    def test_maximum_beyond_initial_span_is_found(self):
        res = maximize_scalar(lambda g: -(g - 60.0) ** 2, 1.0)
        assert res.argmax == pytest.approx(60.0, abs=1e-6)

    def test_affine_invariance_of_argmax(self):
        f = lambda g: np.exp(-((g - 1.3) ** 2) / 2.0)
        base = maximize_scalar(f, 8.0)
        scaled = maximize_scalar(lambda g: 7.5 * f(g) + 3.0, 8.0)
        assert scaled.argmax == pytest.approx(base.argmax, abs=1e-8)

    def test_example1_profile_objective(self, example1):
        P, _, mu1, mu2 = example1
        f = lambda g: np.linalg.svd(
            coupled_matrix(P, mu1, mu2, g).matrix, compute_uv=False
        )[-2]
        res = maximize_scalar(f, 10.0)
        assert res.argmax == pytest.approx(1.8914, abs=0.01)
        assert res.value == pytest.approx(4.1132, abs=1e-3)
