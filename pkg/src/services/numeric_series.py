"""Adaptive real-number series summation

All values are mpmath numbers at the precision chosen in Config
(IEEE double or a decimal mode of at least 50 digits). Summation stops once
`guard_window` consecutive terms fall below tol * |partial sum|.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

import mpmath

from ..models.enums import SeriesKind
from ..utils.config import get_config
from ..utils.logger import get_logger

logger = get_logger(__name__)

RealLike = Union[int, float, str, Fraction, mpmath.mpf]


class ConvergenceError(ArithmeticError):
    """Raised when a series leaves its convergence domain or fails the ratio test"""

    pass


@dataclass(frozen=True)
class SeriesSum:
    """Value of a summed series with the number of terms consumed"""

    value: mpmath.mpf
    terms_used: int


def to_mpf(value: RealLike) -> mpmath.mpf:
    """Convert ints, floats, Fractions and "a/b" strings without going through float"""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, str) and "/" in value:
        return to_mpf(Fraction(value))
    return mpmath.mpf(value)


def check_domain(p: RealLike, q: RealLike, *arguments: RealLike) -> mpmath.mpf:
    """Check 0 < q/p < 1 and |y| < 1/(1 - q/p) for every argument y of e_{p,q}

    Returns:
        The ratio t = q/p

    Raises:
        ValueError: If p = q or a base is not positive
        ConvergenceError: If the point is outside the convergence domain
    """
    p, q = to_mpf(p), to_mpf(q)
    if p <= 0 or q <= 0:
        raise ValueError(f"Bases must be positive, got p={p}, q={q}")
    if p == q:
        raise ValueError("The numeric kernel needs p != q")
    t = q / p
    if t >= 1:
        raise ConvergenceError(f"q/p = {mpmath.nstr(t, 8)} is not below 1")
    radius = 1 / (1 - t)
    for y in arguments:
        if abs(to_mpf(y)) >= radius:
            raise ConvergenceError(
                f"|{mpmath.nstr(to_mpf(y), 8)}| is outside the radius {mpmath.nstr(radius, 8)}"
            )
    return t


def sum_series(terms: Iterable[mpmath.mpf], tol: Optional[float] = None,
               guard_window: Optional[int] = None, max_terms: Optional[int] = None) -> SeriesSum:
    """Sum terms until guard_window consecutive terms are below tol * |sum|

    A ratio test runs alongside: more than guard_window consecutive
    non-decreasing term ratios above 1 count as divergence.

    Raises:
        ConvergenceError: On divergence or when max_terms is exhausted
    """
    config = get_config()
    tol = config.series_tolerance if tol is None else tol
    guard_window = guard_window or config.guard_window
    max_terms = max_terms or config.max_series_terms

    total = mpmath.mpf(0)
    used = 0
    small = 0
    rising = 0
    last: Optional[mpmath.mpf] = None
    last_ratio: Optional[mpmath.mpf] = None

    for index, term in enumerate(terms):
        if index >= max_terms:
            raise ConvergenceError(f"No convergence within {max_terms} terms")
        used = index + 1
        total += term
        magnitude = abs(term)

        if total != 0 and magnitude <= tol * abs(total):
            small += 1
            if small >= guard_window:
                logger.debug("Series converged", terms_used=used)
                return SeriesSum(total, used)
        else:
            small = 0

        if magnitude:
            if last:
                ratio = magnitude / last
                if ratio > 1 and (last_ratio is None or ratio >= last_ratio):
                    rising += 1
                    if rising > guard_window:
                        raise ConvergenceError("Series failed the ratio test")
                else:
                    rising = 0
                last_ratio = ratio
            last = magnitude

    return SeriesSum(total, used)


def real_bracket(a: mpmath.mpf, p: mpmath.mpf, q: mpmath.mpf) -> mpmath.mpf:
    return (mpmath.power(p, a) - mpmath.power(q, a)) / (p - q)


def _exp_terms(weight: mpmath.mpf, y: mpmath.mpf, p: mpmath.mpf, q: mpmath.mpf) -> Iterator[mpmath.mpf]:
    # term_{k+1} = term_k * weight^k * y / [k+1]
    term = mpmath.mpf(1)
    k = 0
    while True:
        yield term
        term = term * mpmath.power(weight, k) * y / real_bracket(k + 1, p, q)
        k += 1


def exp_value(kind: SeriesKind, y: RealLike, p: RealLike, q: RealLike,
              tol: Optional[float] = None) -> SeriesSum:
    """e_{p,q}(y) (lower_e) or E_{p,q}(y) (upper_E) at a real point"""
    with mpmath.workdps(get_config().working_digits):
        p_val, q_val, y_val = to_mpf(p), to_mpf(q), to_mpf(y)
        if kind is SeriesKind.LOWER_E:
            check_domain(p_val, q_val, y_val)
            weight = p_val
        else:
            check_domain(p_val, q_val)
            weight = q_val
        return sum_series(_exp_terms(weight, y_val, p_val, q_val), tol=tol)
