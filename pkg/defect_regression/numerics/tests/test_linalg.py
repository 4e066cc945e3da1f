import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.numerics import qr_factorize, qr_least_squares, xtx_inverse

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _random_system(seed: int, n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, p))
    y = x @ rng.normal(size=p) + rng.normal(scale=0.5, size=n)
    return x, y


def test_qr_least_squares_small_systems():
    # Mean of the observations
    beta, sse, qr = qr_least_squares(np.ones((3, 1)), np.array([2.0, 4.0, 6.0]))
    npt.assert_allclose(beta, [4.0])
    assert sse == pytest.approx(8.0)
    assert qr.shape == (3, 1)

    # Exact fit
    beta, sse, _ = qr_least_squares(np.eye(2), np.array([3.0, 5.0]))
    npt.assert_allclose(beta, [3.0, 5.0])
    assert sse == 0.0


def test_qr_factorize_reconstruction():
    x, _ = _random_system(seed=42, n=9, p=4)
    qr = qr_factorize(x)
    q = qr.q()
    assert np.linalg.norm(q @ qr.r - x) <= 1e-10 * np.linalg.norm(x)
    npt.assert_allclose(q.T @ q, np.eye(4), atol=1e-12)
    npt.assert_array_equal(qr.r, np.triu(qr.r))
    npt.assert_allclose(qr.diagonal_magnitudes, np.abs(np.diag(qr.r)))
    assert qr.deficient_column() is None

    # Qᵀ applied to the columns of X gives R on top and zeros below
    qtx = np.column_stack([qr.apply_qt(x[:, j]) for j in range(4)])
    npt.assert_allclose(qtx[:4], qr.r, atol=1e-12)
    npt.assert_allclose(qtx[4:], 0.0, atol=1e-12)


def test_qr_least_squares_matches_exact_oracle(exact_least_squares):
    x, y = _random_system(seed=1234, n=12, p=4)
    beta, sse, _ = qr_least_squares(x, y)
    exact = exact_least_squares(x, y)
    npt.assert_allclose(beta, exact.beta, rtol=1e-8)
    assert sse == pytest.approx(exact.sse, rel=1e-8)


def test_xtx_inverse():
    # Identity
    qr = qr_factorize(np.eye(3))
    npt.assert_allclose(xtx_inverse(qr), np.eye(3), atol=1e-15)

    # Diagonal, padded with zero rows
    x = np.array([[2.0, 0.0], [0.0, 2.0], [0.0, 0.0], [0.0, 0.0]])
    npt.assert_allclose(xtx_inverse(qr_factorize(x)), np.diag([0.25, 0.25]), atol=1e-15)


def test_xtx_inverse_matches_exact_oracle(exact_least_squares):
    x, y = _random_system(seed=7, n=10, p=3)
    inverse = xtx_inverse(qr_factorize(x))
    npt.assert_allclose(inverse, exact_least_squares(x, y).xtx_inv, rtol=1e-8)
    assert np.max(np.abs(inverse - inverse.T)) <= 1e-12


def test_rank_deficiency():
    # The second column is twice the first one
    x = np.array([[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]])
    with pytest.raises(DefectRegressionException) as e:
        qr_least_squares(x, np.array([1.0, 2.0, 3.0]))
    assert e.value.code == DefectRegressionExceptionCode.RANK_DEFICIENT
    assert e.value.msg == "The design matrix is rank deficient: column 1 is collinear with the previous columns."

    # A column of zeros in the middle
    x = np.array([[1.0, 0.0, 1.0], [1.0, 0.0, 2.0], [1.0, 0.0, 4.0], [1.0, 0.0, 8.0]])
    qr = qr_factorize(x)
    assert qr.deficient_column() == 1
    with pytest.raises(DefectRegressionException) as e:
        xtx_inverse(qr)
    assert e.value.code == DefectRegressionExceptionCode.RANK_DEFICIENT
    assert "column 1 is collinear" in e.value.msg

    # Only zeros
    assert qr_factorize(np.zeros((3, 2))).deficient_column() == 0


def test_bad_inputs():
    with pytest.raises(DefectRegressionException) as e:
        qr_least_squares(np.ones((2, 3)), np.ones(2))
    assert e.value.code == DefectRegressionExceptionCode.INSUFFICIENT_DEGREES_OF_FREEDOM
    assert e.value.msg == "Insufficient degrees of freedom: 2 observation(s) for 3 parameter(s)."

    with pytest.raises(DefectRegressionException) as e:
        qr_factorize(np.ones(3))
    assert e.value.code == DefectRegressionExceptionCode.BAD_MATRIX_SHAPE
    assert e.value.msg == "A matrix is expected, got an array with 1 dimension(s)."

    with pytest.raises(DefectRegressionException) as e:
        qr_factorize(np.array([[1.0, np.nan], [1.0, 2.0], [1.0, 3.0]]))
    assert e.value.code == DefectRegressionExceptionCode.NON_FINITE_VALUE
    assert e.value.msg == "The design matrix contains non-finite values."

    with pytest.raises(DefectRegressionException) as e:
        qr_least_squares(np.ones((3, 1)), np.array([1.0, np.inf, 2.0]))
    assert e.value.code == DefectRegressionExceptionCode.NON_FINITE_VALUE
    assert e.value.msg == "The observations vector contains non-finite values."

    with pytest.raises(DefectRegressionException) as e:
        qr_least_squares(np.ones((3, 1)), np.ones(4))
    assert e.value.code == DefectRegressionExceptionCode.BAD_MATRIX_SHAPE
    assert e.value.msg == "The observations vector has shape (4,) but the design matrix has 3 rows."


@settings(deadline=None, max_examples=50)
@given(seed=seeds, n=st.integers(min_value=4, max_value=20), p=st.integers(min_value=1, max_value=4))
def test_residuals_orthogonal_to_columns(seed, n, p):
    x, y = _random_system(seed=seed, n=n, p=p)
    beta, sse, _ = qr_least_squares(x, y)
    residuals = y - x @ beta
    assert np.max(np.abs(x.T @ residuals)) <= 1e-8 * np.linalg.norm(y)
    assert sse >= 0.0
    assert sse == pytest.approx(residuals @ residuals, rel=1e-9, abs=1e-12)


@settings(deadline=None, max_examples=50)
@given(
    seed=seeds,
    column=st.integers(min_value=0, max_value=2),
    scale=st.sampled_from([-1000.0, -3.5, 0.001, 0.25, 7.0, 1e4]),
)
def test_column_scaling(seed, column, scale):
    x, y = _random_system(seed=seed, n=10, p=3)
    beta, sse, _ = qr_least_squares(x, y)
    scaled = x.copy()
    scaled[:, column] *= scale
    scaled_beta, scaled_sse, _ = qr_least_squares(scaled, y)
    assert scaled_beta[column] == pytest.approx(beta[column] / scale, rel=1e-9, abs=1e-12)
    npt.assert_allclose(scaled @ scaled_beta, x @ beta, rtol=1e-9, atol=1e-9 * np.abs(y).max())
    assert scaled_sse == pytest.approx(sse, rel=1e-9, abs=1e-12)


@settings(deadline=None, max_examples=100)
@given(seed=seeds, n=st.integers(min_value=7, max_value=20), p=st.integers(min_value=1, max_value=6))
def test_equivalence_with_exact_oracle(exact_least_squares, seed, n, p):
    x, y = _random_system(seed=seed, n=n, p=p)
    beta, sse, qr = qr_least_squares(x, y)
    exact = exact_least_squares(x, y)
    scale = np.abs(exact.beta).max()
    npt.assert_allclose(beta, exact.beta, rtol=1e-8, atol=1e-8 * scale)
    npt.assert_allclose(xtx_inverse(qr), exact.xtx_inv, rtol=1e-8, atol=1e-8 * np.abs(exact.xtx_inv).max())
