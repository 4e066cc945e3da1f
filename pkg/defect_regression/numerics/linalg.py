"""
Least squares through a Householder QR factorization.

Matrices are plain 64-bit numpy arrays. The normal equations are never formed: the factorization
works on the design matrix directly, which keeps the coefficients stable on the small, poorly scaled
design matrices the defect data produce.
"""

import logging
from dataclasses import dataclass
from typing import Final

import numpy as np
from scipy.linalg import solve_triangular

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.typing import FloatArray

logger = logging.getLogger(__name__)

RANK_TOLERANCE: Final = 1e-10
"""A column is collinear when ``|R[j, j]| <= RANK_TOLERANCE * max |R[i, i]|``."""


@dataclass(frozen=True)
class QrFactors:
    """The Householder QR factorization of a ``n × p`` matrix ``X = Q R``.

    Attributes:
        householder:
            The ``n × p`` matrix whose column ``k`` is the unit Householder vector of the ``k``-th
            reflection (zero above row ``k``). A zero column stands for the identity reflection.

        r:
            The ``p × p`` upper-triangular factor.
    """

    householder: FloatArray
    r: FloatArray

    @property
    def shape(self) -> tuple[int, int]:
        """The shape ``(n, p)`` of the factorized matrix."""
        n, p = self.householder.shape
        return n, p

    @property
    def diagonal_magnitudes(self) -> FloatArray:
        """The magnitudes ``|R[j, j]|`` used to detect collinear columns."""
        return np.abs(np.diag(self.r))

    def deficient_column(self) -> int | None:
        """The index of the first collinear column, or None when the matrix has full column rank."""
        diag = self.diagonal_magnitudes
        largest = diag.max(initial=0.0)
        if largest == 0.0:
            return 0
        (deficient,) = np.nonzero(diag <= RANK_TOLERANCE * largest)
        return int(deficient[0]) if deficient.size else None

    def apply_qt(self, y: FloatArray) -> FloatArray:
        """Compute ``Qᵀ y`` by applying the reflections in order."""
        qty = np.array(y, dtype=np.float64, copy=True)
        for k in range(self.householder.shape[1]):
            v = self.householder[k:, k]
            qty[k:] -= 2.0 * v * (v @ qty[k:])
        return qty

    def q(self) -> FloatArray:
        """The thin ``n × p`` orthonormal factor, mostly useful to check the factorization."""
        n, p = self.shape
        q = np.eye(n, p)
        for k in range(p - 1, -1, -1):
            v = self.householder[k:, k]
            q[k:, :] -= 2.0 * np.outer(v, v @ q[k:, :])
        return q


def _check_finite(name: str, values: FloatArray) -> None:
    if not np.all(np.isfinite(values)):
        msg = f"The {name} contains non-finite values."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.NON_FINITE_VALUE)


def qr_factorize(x: FloatArray) -> QrFactors:
    """Factorize a ``n × p`` matrix (``n >= p``) with Householder reflections.

    Args:
        x:
            The matrix to factorize.

    Returns:
        The Householder vectors and the triangular factor.
    """
    a = np.array(x, dtype=np.float64, copy=True)
    if a.ndim != 2:
        msg = f"A matrix is expected, got an array with {a.ndim} dimension(s)."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_MATRIX_SHAPE)
    n, p = a.shape
    if p < 1 or n < p:
        msg = f"Insufficient degrees of freedom: {n} observation(s) for {p} parameter(s)."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.INSUFFICIENT_DEGREES_OF_FREEDOM)
    _check_finite("design matrix", a)

    householder = np.zeros((n, p), dtype=np.float64)
    for k in range(p):
        column = a[k:, k]
        norm = np.linalg.norm(column)
        if norm == 0.0:
            continue  # Identity reflection, the zero pivot is caught by the rank check
        v = column.copy()
        v[0] += norm if column[0] >= 0.0 else -norm
        v /= np.linalg.norm(v)
        a[k:, k:] -= 2.0 * np.outer(v, v @ a[k:, k:])
        householder[k:, k] = v

    return QrFactors(householder=householder, r=np.triu(a[:p, :]))


def _check_rank(qr: QrFactors) -> None:
    column = qr.deficient_column()
    if column is not None:
        msg = f"The design matrix is rank deficient: column {column} is collinear with the previous columns."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.RANK_DEFICIENT)


def qr_least_squares(x: FloatArray, y: FloatArray) -> tuple[FloatArray, float, QrFactors]:
    """Solve the least squares problem ``min ‖y − X β‖²``.

    Args:
        x:
            The ``n × p`` design matrix, ``n >= p >= 1`` and full column rank.

        y:
            The ``n`` observations.

    Returns:
        The coefficients ``β``, the residual sum of squares and the factorization of ``X``.
    """
    y = np.asarray(y, dtype=np.float64)
    qr = qr_factorize(x)
    n, p = qr.shape
    if y.shape != (n,):
        msg = f"The observations vector has shape {y.shape} but the design matrix has {n} rows."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_MATRIX_SHAPE)
    _check_finite("observations vector", y)
    _check_rank(qr)

    qty = qr.apply_qt(y)
    beta = solve_triangular(qr.r, qty[:p], lower=False)
    tail = qty[p:]
    sse = float(tail @ tail)
    return beta, sse, qr


def xtx_inverse(qr: QrFactors) -> FloatArray:
    """Compute ``(XᵀX)⁻¹ = R⁻¹ R⁻ᵀ`` from the factorization of ``X``.

    Args:
        qr:
            A full rank factorization.

    Returns:
        The symmetric ``p × p`` inverse.
    """
    _check_rank(qr)
    p = qr.r.shape[0]
    r_inv = solve_triangular(qr.r, np.eye(p), lower=False)
    inverse = r_inv @ r_inv.T
    return 0.5 * (inverse + inverse.T)
