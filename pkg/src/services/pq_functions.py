"""(p,q)-special functions

Twin-basic numbers, factorials, Gaussian binomials, the deformed
exponentials e_{p,q} / E_{p,q} as truncated series, the structure constant
h_{m,s} and the (q,h)-binomials used by the shift-binomial expansion.

Integer brackets are always built from the finite sum
sum_{k=1}^{n} p^{n-k} q^{k-1}, never from (p^n - q^n)/(p - q), so setting
p = q is a plain substitution.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional, Union

import mpmath

from ..models.enums import SeriesKind
from ..models.laurent import NotDivisibleError, Polynomial, RationalFunction, as_rational_function, div_exact
from ..models.series import TruncatedSeries
from ..utils.config import get_config
from ..utils.logger import get_logger
from .numeric_series import exp_value, real_bracket, to_mpf

logger = get_logger(__name__)


P = Polynomial.var("p")
Q = Polynomial.var("q")

BaseLike = Union[Polynomial, RationalFunction]


class UndefinedParameterError(ValueError):
    """Raised when h_{m,s} or a (q,h)-binomial is requested where it is undefined"""

    pass


# ---------------------------------------------------------------------- brackets


@lru_cache(maxsize=None)
def pq_number(n: int) -> Polynomial:
    """Twin-basic number [n]_{p,q}

    Args:
        n: Any integer; [0] = 0 and [-n] = -(pq)^{-n} [n]

    Returns:
        Laurent polynomial in p, q
    """
    if n == 0:
        return Polynomial.zero()
    if n < 0:
        return -(P * Q) ** n * pq_number(-n)
    return Polynomial({(n - k, k - 1, 0, 0): 1 for k in range(1, n + 1)})


def pq_number_in_base(n: int, base_p: Polynomial, base_q: Polynomial) -> Polynomial:
    """[n] in the base (base_p, base_q), e.g. [n]_{p^m,q^m}

    Both bases must be Laurent monomials when n < 0.
    """
    if n == 0:
        return Polynomial.zero()
    if n < 0:
        return -(base_p * base_q) ** n * pq_number_in_base(-n, base_p, base_q)
    total = Polynomial.zero()
    for k in range(1, n + 1):
        total = total + base_p ** (n - k) * base_q ** (k - 1)
    return total


def pq_number_real(a, p, q) -> mpmath.mpf:
    """Real-argument bracket (p^a - q^a)/(p - q)

    Args:
        a: Real argument
        p: Positive real base
        q: Positive real base, distinct from p

    Returns:
        mpmath value at the configured working precision

    Raises:
        ValueError: If p = q or a base is not positive
    """
    with mpmath.workdps(get_config().working_digits):
        a, p, q = to_mpf(a), to_mpf(p), to_mpf(q)
        if p <= 0 or q <= 0:
            raise ValueError(f"Bases must be positive, got p={p}, q={q}")
        if p == q:
            raise ValueError("Real-argument brackets need p != q")
        return real_bracket(a, p, q)


@lru_cache(maxsize=None)
def pq_factorial(n: int) -> Polynomial:
    """[n]_{p,q}! with [0]! = 1"""
    if n < 0:
        raise ValueError(f"Factorial needs n >= 0, got {n}")
    if n == 0:
        return Polynomial.one()
    return pq_factorial(n - 1) * pq_number(n)


@lru_cache(maxsize=None)
def pq_gauss_binomial(n: int, k: int) -> Polynomial:
    """(p,q)-Gaussian binomial [n]!/([n-k]![k]!), zero outside 0 <= k <= n

    Raises:
        RuntimeError: If the factorial quotient is not a polynomial (never expected)
    """
    if k < 0 or k > n or n < 0:
        return Polynomial.zero()
    try:
        return div_exact(pq_factorial(n), pq_factorial(n - k) * pq_factorial(k))
    except NotDivisibleError as e:
        logger.error("Gaussian binomial division left a remainder", n=n, k=k)
        raise RuntimeError(f"Gaussian binomial ({n},{k}) is not a polynomial") from e


def pq_gauss_binomial_in_base(n: int, k: int, base_p: Polynomial, base_q: Polynomial) -> Polynomial:
    """Gaussian binomial in the base (base_p, base_q) via the Pascal rule

    [n;k] = base_p^k [n-1;k] + base_q^{n-k} [n-1;k-1]
    """
    if k < 0 or k > n or n < 0:
        return Polynomial.zero()
    row = [Polynomial.one()]
    for i in range(1, n + 1):
        nxt = []
        for j in range(i + 1):
            left = row[j] * base_p ** j if j < i else Polynomial.zero()
            right = row[j - 1] * base_q ** (i - j) if j > 0 else Polynomial.zero()
            nxt.append(left + right)
        row = nxt
    return row[k]


def q_number(n: int, base: BaseLike) -> RationalFunction:
    """Single-base bracket 1 + t + ... + t^{n-1} for n >= 0"""
    if n < 0:
        raise ValueError(f"Single-base brackets need n >= 0, got {n}")
    t = as_rational_function(base)
    total = RationalFunction.zero()
    power = RationalFunction.one()
    for _ in range(n):
        total = total + power
        power = power * t
    return total


def q_gauss_binomial(n: int, k: int, base: BaseLike) -> RationalFunction:
    """Single-base Gaussian binomial via q-Pascal: [n;k] = [n-1;k-1] + t^k [n-1;k]"""
    if k < 0 or k > n or n < 0:
        return RationalFunction.zero()
    t = as_rational_function(base)
    row = [RationalFunction.one()]
    for i in range(1, n + 1):
        nxt = []
        for j in range(i + 1):
            left = row[j - 1] if j > 0 else RationalFunction.zero()
            right = row[j] * t ** j if j < i else RationalFunction.zero()
            nxt.append(left + right)
        row = nxt
    return row[k]


# ---------------------------------------------------------------------- h_{m,s}


@dataclass(frozen=True)
class HParam:
    """h_{m,s}(p,q) = q^s [m-1] / ([s] p^{m-1}); value is None where undefined"""

    m: int
    s: int
    value: Optional[RationalFunction]

    @property
    def defined(self) -> bool:
        return self.value is not None


def h_param(m: int, s: int, strict: bool = True) -> HParam:
    """Structure constant of the shift-binomial relation RS = t SR + h S^2

    Args:
        m: Touchard order
        s: Shift exponent
        strict: Raise on an undefined value instead of returning it flagged

    Raises:
        UndefinedParameterError: If m != 1 and s = 0 (strict mode)
    """
    if m == 1:
        return HParam(m, s, RationalFunction.zero())
    if s == 0:
        if not strict:
            return HParam(m, s, None)
        raise UndefinedParameterError(f"h_{{m,s}} is undefined for m={m}, s=0")
    value = RationalFunction(Q ** s * pq_number(m - 1), pq_number(s) * P ** (m - 1))
    return HParam(m, s, value)


def _h_value(h: Union[HParam, BaseLike, int, Fraction]) -> RationalFunction:
    if isinstance(h, HParam):
        if not h.defined:
            raise UndefinedParameterError(f"h_{{m,s}} undefined for m={h.m}, s={h.s}")
        return h.value  # type: ignore[return-value]
    return as_rational_function(h)


def qh_binomial(n: int, k: int, qhat: BaseLike, hhat: Union[HParam, BaseLike, int, Fraction]) -> RationalFunction:
    """(q,h)-binomial [n; n-k]_t * prod_{i<k} (1 + h [i]_t)

    For R, S with RS = t SR + h S^2 this is the coefficient of S^k R^{n-k}
    in (R + S)^n.

    Raises:
        ValueError: If k is outside 0..n
        UndefinedParameterError: If hhat is an undefined HParam
    """
    if k < 0 or k > n:
        raise ValueError(f"qh_binomial needs 0 <= k <= n, got n={n}, k={k}")
    h = _h_value(hhat)
    result = q_gauss_binomial(n, n - k, qhat)
    for i in range(k):
        result = result * (RationalFunction.one() + h * q_number(i, qhat))
    return result


def explicit_qh_binomial(n: int, k: int, base_p: Polynomial, base_q: Polynomial,
                      hhat: Union[HParam, BaseLike, int, Fraction]) -> RationalFunction:
    """Explicit (p,q,h)-binomial P^{k(k-1)} [n; n-k]_{P,Q} prod_{j<k} (1 + h P^{1-n} [j]_{P,Q})

    Kept for the binomial audit; the shift-binomial expansion uses qh_binomial.
    """
    if k < 0 or k > n:
        raise ValueError(f"explicit_qh_binomial needs 0 <= k <= n, got n={n}, k={k}")
    h = _h_value(hhat)
    result = RationalFunction(base_p ** (k * (k - 1)) * pq_gauss_binomial_in_base(n, n - k, base_p, base_q))
    for j in range(k):
        step = RationalFunction(base_p ** (1 - n) * pq_number_in_base(j, base_p, base_q))
        result = result * (RationalFunction.one() + h * step)
    return result


# ---------------------------------------------------------------------- exponentials


def exp_series(kind: Union[SeriesKind, str], order: int) -> TruncatedSeries:
    """e_{p,q}(x) (p-weights) or E_{p,q}(x) (q-weights) truncated at `order`

    Coefficient k is p^{C(k,2)}/[k]! for lower_e and q^{C(k,2)}/[k]! for upper_E.
    """
    kind = SeriesKind(kind)
    if order < 0:
        raise ValueError(f"Series order must be >= 0, got {order}")
    weight = P if kind is SeriesKind.LOWER_E else Q
    return TruncatedSeries([
        RationalFunction(weight ** comb(k, 2), pq_factorial(k)) for k in range(order + 1)
    ])


def series_derivative(series: TruncatedSeries) -> TruncatedSeries:
    """D_{p,q} on a series: coefficient k becomes [k+1] c_{k+1}; the order drops by one"""
    if series.order == 0:
        raise ValueError("Cannot differentiate an order-0 series")
    return TruncatedSeries([series[k + 1] * pq_number(k + 1) for k in range(series.order)])


def series_dilation_p(series: TruncatedSeries) -> TruncatedSeries:
    """N_p on a series: f(x) -> f(px)"""
    return series.dilate(P)


def exp_numeric(kind: Union[SeriesKind, str], y, p, q) -> mpmath.mpf:
    """e_{p,q}(y) or E_{p,q}(y) at a real point, summed adaptively

    Raises:
        ConvergenceError: If the point is outside the convergence domain
    """
    return exp_value(SeriesKind(kind), y, p, q).value
