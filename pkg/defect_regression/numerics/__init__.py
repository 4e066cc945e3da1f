"""
The numerical kernel: least squares and the t and F distributions.
"""

from defect_regression.numerics.linalg import RANK_TOLERANCE, QrFactors, qr_factorize, qr_least_squares, xtx_inverse
from defect_regression.numerics.special import (
    f_cdf,
    f_sf,
    ln_gamma,
    reg_inc_beta,
    t_cdf,
    t_pdf,
    t_quantile,
    t_sf,
)

__all__ = [
    "RANK_TOLERANCE",
    "QrFactors",
    "qr_factorize",
    "qr_least_squares",
    "xtx_inverse",
    "ln_gamma",
    "reg_inc_beta",
    "t_sf",
    "t_cdf",
    "t_pdf",
    "t_quantile",
    "f_cdf",
    "f_sf",
]
