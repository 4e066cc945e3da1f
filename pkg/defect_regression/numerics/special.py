"""
Special functions behind the t and F distributions.

The regularized incomplete beta function is evaluated with the modified Lentz algorithm on its
continued fraction; the log-gamma function uses the Lanczos approximation (g = 7, 9 terms).
"""

import logging
import math
from typing import Final

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode

logger = logging.getLogger(__name__)

_LANCZOS_G: Final = 7.0
_LANCZOS_COEFFICIENTS: Final = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI: Final = 0.5 * math.log(2.0 * math.pi)

_CF_EPSILON: Final = 3e-16
_CF_TINY: Final = 1e-300
_CF_MAX_ITERATIONS: Final = 10_000

_QUANTILE_MAX_ITERATIONS: Final = 200


def _raise_domain(msg: str) -> None:
    logger.error(msg)
    raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_DOMAIN)


def _check_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0.0):
        _raise_domain(f"{name} must be a positive finite number, got {value!r}.")


def ln_gamma(x: float) -> float:
    """The natural logarithm of the gamma function for ``x > 0``."""
    _check_positive("The argument of ln_gamma", x)
    if x < 0.5:
        # Reflection formula Γ(x) Γ(1 − x) = π / sin(πx)
        return math.log(math.pi / math.sin(math.pi * x)) - ln_gamma(1.0 - x)
    z = x - 1.0
    series = _LANCZOS_COEFFICIENTS[0]
    for i, c in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        series += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(series)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Evaluate the continued fraction of the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITERATIONS + 1):
        m2 = 2 * m
        # Even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        # Odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _CF_EPSILON:
            return h
    msg = f"The incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}."
    logger.error(msg)
    raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.NO_CONVERGENCE)


def _reg_inc_beta(a: float, b: float, x: float, y: float) -> float:
    """``I_x(a, b)`` where ``y = 1 − x`` is given separately to keep its precision."""
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * math.log(x) + b * math.log(y)
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _beta_continued_fraction(a, b, x) / a)
    return max(0.0, 1.0 - front * _beta_continued_fraction(b, a, y) / b)


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """The regularized incomplete beta function ``I_x(a, b)``.

    Args:
        a, b:
            The positive shape parameters.

        x:
            The upper integration bound, in ``[0, 1]``.

    Returns:
        The value of ``I_x(a, b)`` in ``[0, 1]``.
    """
    _check_positive("The parameter a", a)
    _check_positive("The parameter b", b)
    if not 0.0 <= x <= 1.0:
        _raise_domain(f"The incomplete beta function is defined on [0, 1], got x={x!r}.")
    return _reg_inc_beta(a, b, x, 1.0 - x)


def t_sf(t: float, df: float) -> float:
    """The survival function ``P(T > t)`` of the Student t distribution."""
    _check_positive("The degrees of freedom", df)
    if math.isnan(t):
        _raise_domain("The t statistic is NaN.")
    t2 = t * t
    if math.isinf(t2):
        half_tail = 0.0
    else:
        half_tail = 0.5 * _reg_inc_beta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2))
    return half_tail if t >= 0.0 else 1.0 - half_tail


def t_cdf(t: float, df: float) -> float:
    """The cumulative distribution function of the Student t distribution."""
    _check_positive("The degrees of freedom", df)
    if math.isnan(t):
        _raise_domain("The t statistic is NaN.")
    return t_sf(-t, df)


def t_pdf(t: float, df: float) -> float:
    """The probability density function of the Student t distribution."""
    _check_positive("The degrees of freedom", df)
    log_norm = ln_gamma(0.5 * (df + 1.0)) - ln_gamma(0.5 * df) - 0.5 * math.log(df * math.pi)
    return math.exp(log_norm - 0.5 * (df + 1.0) * math.log1p(t * t / df))


def t_quantile(p: float, df: float) -> float:
    """The quantile function (inverse cdf) of the Student t distribution.

    The upper tail ``t_sf(t) = min(p, 1 − p)`` is solved for ``t >= 0`` by bracketing followed by
    safeguarded Newton steps, then the sign is restored.

    Args:
        p:
            The probability, in ``(0, 1)``.

        df:
            The degrees of freedom.

    Returns:
        The value ``t`` such that ``t_cdf(t, df) = p``.
    """
    _check_positive("The degrees of freedom", df)
    if not 0.0 < p < 1.0:
        _raise_domain(f"The probability must be in (0, 1), got {p!r}.")
    if p == 0.5:
        return 0.0
    tail = min(p, 1.0 - p)

    # Bracket the root of t_sf(t) - tail on [lo, hi]
    lo, hi = 0.0, 1.0
    while t_sf(hi, df) > tail:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            _raise_domain(f"The t quantile of {p!r} with {df} degrees of freedom is not representable.")

    t = 0.5 * (lo + hi)
    for _ in range(_QUANTILE_MAX_ITERATIONS):
        f = t_sf(t, df) - tail
        if f == 0.0:
            break
        if f > 0.0:
            lo = t
        else:
            hi = t
        step = f / t_pdf(t, df)  # d(t_sf)/dt = -pdf
        candidate = t + step
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        if abs(candidate - t) <= 1e-15 * max(1.0, abs(t)):
            t = candidate
            break
        t = candidate
    else:
        msg = f"The t quantile did not converge for p={p}, df={df}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.NO_CONVERGENCE)

    return t if p > 0.5 else -t


def f_cdf(x: float, df1: float, df2: float) -> float:
    """The cumulative distribution function of the Fisher-Snedecor F distribution."""
    _check_positive("The numerator degrees of freedom", df1)
    _check_positive("The denominator degrees of freedom", df2)
    if math.isnan(x) or x < 0.0:
        _raise_domain(f"The F statistic must be non-negative, got {x!r}.")
    if math.isinf(x):
        return 1.0
    scaled = df1 * x
    return _reg_inc_beta(0.5 * df1, 0.5 * df2, scaled / (scaled + df2), df2 / (scaled + df2))


def f_sf(x: float, df1: float, df2: float) -> float:
    """The survival function ``P(F > x)``, accurate for the small p-values of significant fits."""
    _check_positive("The numerator degrees of freedom", df1)
    _check_positive("The denominator degrees of freedom", df2)
    if math.isnan(x) or x < 0.0:
        _raise_domain(f"The F statistic must be non-negative, got {x!r}.")
    if math.isinf(x):
        return 0.0
    scaled = df1 * x
    return _reg_inc_beta(0.5 * df2, 0.5 * df1, df2 / (scaled + df2), scaled / (scaled + df2))
