import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from varpro.exceptions import NonFiniteError, ShapeMismatch, SingularMatrix
from varpro.numkit import as_matrix, as_vector, matmul, one_norm, scale, solve_spd, sub, transpose


def qr_solve(m, rhs):
    q, r = np.linalg.qr(m)
    return np.linalg.solve(r, q.T @ rhs)


def random_spd(rng, n):
    g = rng.normal(size=(n, n))
    return g @ g.T + n * np.eye(n)


class TestOneNorm:
    def test_column_sums(self):
        assert one_norm(np.array([[1.0, -2.0], [3.0, 4.0]])) == 6.0

    def test_zero(self):
        assert one_norm(np.array([[0.0]])) == 0.0

    def test_column_vector(self):
        assert one_norm(np.array([[1.0], [-1.0], [1.0]])) == 3.0
        assert one_norm(np.array([1.0, -1.0, 1.0])) == 3.0

    @given(arrays(np.float64, (3, 4), elements=st.floats(-1e6, 1e6)),
           st.floats(-1e3, 1e3))
    def test_homogeneous(self, m, c):
        assert one_norm(c * m) == pytest.approx(abs(c) * one_norm(m), rel=1e-12, abs=1e-300)

    @given(arrays(np.float64, (3, 2), elements=st.floats(-1e6, 1e6)))
    def test_nonnegative_and_zero_iff_zero(self, m):
        n = one_norm(m)
        assert n >= 0
        assert (n == 0) == (not np.any(m))


class TestSolveSpd:
    def test_identity(self):
        np.testing.assert_array_equal(solve_spd(np.eye(2), [3.0, 5.0]), [3.0, 5.0])

    def test_diagonal(self):
        np.testing.assert_allclose(solve_spd([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0]), [1.0, 2.0])

    def test_rank_deficient(self):
        with pytest.raises(SingularMatrix):
            solve_spd([[1.0, 1.0], [1.0, 1.0]], [1.0, 2.0])

    def test_zero_matrix(self):
        with pytest.raises(SingularMatrix):
            solve_spd(np.zeros((2, 2)), [1.0, 1.0])

    def test_nearly_singular(self):
        m = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-15]])
        with pytest.raises(SingularMatrix):
            solve_spd(m, [1.0, 1.0])

    def test_indefinite_falls_back(self):
        m = np.array([[1.0, 2.0], [2.0, 1.0]])
        x = solve_spd(m, [3.0, 3.0])
        np.testing.assert_allclose(m @ x, [3.0, 3.0], atol=1e-12)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_qr_oracle(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(10):
            m = random_spd(rng, n)
            rhs = rng.normal(size=n)
            x = solve_spd(m, rhs)
            np.testing.assert_allclose(x, qr_solve(m, rhs), rtol=1e-8, atol=1e-12)
            assert one_norm(m @ x - rhs) <= 1e-9 * (1 + one_norm(rhs))

    def test_matches_explicit_inverse(self):
        rng = np.random.default_rng(7)
        m = random_spd(rng, 5)
        rhs = rng.normal(size=5)
        np.testing.assert_allclose(solve_spd(m, rhs), np.linalg.inv(m) @ rhs, rtol=1e-10)

    def test_shape_checks(self):
        with pytest.raises(ShapeMismatch):
            solve_spd(np.ones((2, 3)), [1.0, 2.0])
        with pytest.raises(ShapeMismatch):
            solve_spd(np.eye(2), [1.0, 2.0, 3.0])


class TestPlumbing:
    def test_matmul_identity(self):
        np.testing.assert_array_equal(matmul(np.eye(2), [[1.0], [2.0]]), [[1.0], [2.0]])

    def test_transpose_involution(self):
        m = np.random.default_rng(0).normal(size=(3, 2))
        np.testing.assert_array_equal(transpose(transpose(m)), m)

    def test_sub_self(self):
        np.testing.assert_array_equal(sub([1.0, 2.0], [1.0, 2.0]), [0.0, 0.0])

    def test_scale(self):
        np.testing.assert_array_equal(scale([1.0, -2.0], 3), [3.0, -6.0])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            matmul(np.ones((2, 3)), np.ones((2, 3)))
        with pytest.raises(ShapeMismatch):
            sub([1.0, 2.0], [1.0])

    @settings(max_examples=50)
    @given(st.integers(0, 2**32 - 1))
    def test_matmul_associative(self, seed):
        rng = np.random.default_rng(seed)
        p, q, r, s = rng.integers(1, 6, size=4)
        a, b, c = rng.normal(size=(p, q)), rng.normal(size=(q, r)), rng.normal(size=(r, s))
        left = matmul(matmul(a, b), c)
        right = matmul(a, matmul(b, c))
        assert one_norm(left - right) <= 1e-10 * (1 + one_norm(left))

    def test_constructors_reject_nonfinite(self):
        with pytest.raises(NonFiniteError):
            as_vector([1.0, np.nan])
        with pytest.raises(NonFiniteError):
            as_matrix([[np.inf]])
        with pytest.raises(ShapeMismatch):
            as_matrix([1.0, 2.0])
