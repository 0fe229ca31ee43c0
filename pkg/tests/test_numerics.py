import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gensamp import numerics
from gensamp.numerics import DimensionError, DomainError, SingularSystemError

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def complex_matrices(max_side=6):
    shapes = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shapes.flatmap(
        lambda s: st.tuples(arrays(float, s, elements=finite), arrays(float, s, elements=finite)).map(
            lambda ab: ab[0] + 1j * ab[1]
        )
    )


class TestHermitianEigenvalues:
    def test_identity(self):
        assert np.allclose(numerics.hermitian_eigenvalues(np.eye(2)), [1, 1])

    def test_diagonal_descending(self):
        assert np.allclose(numerics.hermitian_eigenvalues(np.diag([1.0, 3.0])), [3, 1])

    def test_two_by_two_complex(self):
        m = np.array([[2, 1j], [-1j, 2]])
        assert np.allclose(numerics.hermitian_eigenvalues(m), [3, 1], atol=1e-14)

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            numerics.hermitian_eigenvalues(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            numerics.hermitian_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            numerics.hermitian_eigenvalues(np.array([[np.nan]]))


class TestOperatorNorm:
    def test_zero(self):
        assert numerics.operator_norm(np.zeros((3, 2))) == 0

    def test_identity(self):
        assert numerics.operator_norm(np.eye(5)) == pytest.approx(1, abs=1e-14)

    def test_nilpotent(self):
        assert numerics.operator_norm(np.array([[0, 2], [0, 0]])) == pytest.approx(2)

    @given(complex_matrices())
    def test_adjoint_has_same_norm(self, m):
        a, b = numerics.operator_norm(m), numerics.operator_norm(m.conj().T)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12)

    @given(complex_matrices())
    def test_matches_largest_singular_value(self, m):
        assert numerics.operator_norm(m) == pytest.approx(np.linalg.norm(m, 2), rel=1e-9, abs=1e-9)


class TestMinSingularValue:
    def test_identity(self):
        assert numerics.min_singular_value(np.eye(3)) == pytest.approx(1)

    def test_diagonal(self):
        assert numerics.min_singular_value(np.diag([2.0, 0.5])) == pytest.approx(0.5)

    def test_column(self):
        assert numerics.min_singular_value(np.array([[3.0], [4.0]])) == pytest.approx(5)

    @given(complex_matrices())
    def test_bounded_by_operator_norm(self, m):
        assert numerics.min_singular_value(m) <= numerics.operator_norm(m) * (1 + 1e-12) + 1e-12

    def test_inverse_norm_of_positive_definite(self, rng):
        for n in (2, 5, 12):
            x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            a = x @ x.conj().T + 0.1 * np.eye(n)
            expected = numerics.operator_norm(np.linalg.inv(a))
            assert 1 / numerics.min_singular_value(a) == pytest.approx(expected, rel=1e-10)


class TestLeastSquares:
    def test_identity(self):
        b = np.array([1 + 2j, -3, 0.5j])
        assert np.allclose(numerics.least_squares_solve(np.eye(3), b), b)

    def test_mean_of_two_points(self):
        x = numerics.least_squares_solve(np.array([[1.0], [1.0]]), np.array([0.0, 2.0]))
        assert np.allclose(x, [1.0])

    def test_exact_linear_fit(self):
        v = np.vander([0.0, 1.0, 2.0], 2, increasing=True)
        assert np.allclose(numerics.least_squares_solve(v, np.array([1.0, 2.0, 3.0])), [1, 1])

    def test_rank_deficient_reports_ratio(self):
        m = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
        with pytest.raises(SingularSystemError) as info:
            numerics.least_squares_solve(m, np.ones(3))
        assert info.value.ratio < 1e-13

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            numerics.least_squares_solve(np.eye(3), np.ones(2))

    @pytest.mark.parametrize("shape", [(30, 10), (400, 100), (2000, 500)])
    def test_normal_equation_residual(self, rng, shape):
        m = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        b = rng.normal(size=shape[0]) + 1j * rng.normal(size=shape[0])
        x = numerics.least_squares_solve(m, b)
        r = m.conj().T @ (m @ x - b)
        assert np.linalg.norm(r) <= 1e-10 * np.linalg.norm(m, 2) * np.linalg.norm(b)

    def test_agrees_with_normal_equations(self, rng):
        m = rng.normal(size=(50, 8)) + 1j * rng.normal(size=(50, 8))
        b = rng.normal(size=50) + 0j
        direct = np.linalg.solve(m.conj().T @ m, m.conj().T @ b)
        x = numerics.least_squares_solve(m, b)
        assert np.linalg.norm(x - direct) <= 1e-8 * np.linalg.norm(direct)
