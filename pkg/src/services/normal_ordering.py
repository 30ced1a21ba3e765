"""Normal ordering engine

Brute-force noncommutative rewriting for words in X, N_p, D_{p,q} and in the
abstract generators V, W_p, U. Results from this module serve as the oracle
against which every recurrence-computed Stirling number is checked.

Rewriting is done by left multiplication on normal terms X^a N^b D^c:

    X . X^a N^b D^c = X^{a+1} N^b D^c
    N . X^a N^b D^c = p^a X^a N^{b+1} D^c
    D . X^a N^b D^c = q^a p^b X^a N^b D^{c+1} + [a] X^{a-1} N^{b+1} D^c

and on abstract terms V^v W^w U^u:

    V . V^v W^w U^u = V^{v+1} W^w U^u
    W . V^v W^w U^u = p^v V^v W^{w+1} U^u
    U . V^v W^w U^u = q^v p^w V^v W^w U^{u+1} + h [v] V^{v+s-1} W^{w+1} U^u
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from ..models.laurent import Polynomial
from ..models.operators import AbstractExpr, AbstractTerm, NormalTerm, OperatorExpr
from ..models.series import TruncatedSeries
from ..utils.logger import get_logger
from .pq_functions import P, Q, pq_number, series_derivative

logger = get_logger(__name__)

X_POLY = Polynomial.var("x")
H_POLY = Polynomial.var("h")

StirlingRow = Dict[Tuple[int, int], Polynomial]


class SupportShapeError(RuntimeError):
    """Raised when a normal-ordered expansion has terms outside the predicted support"""

    pass


class UnsupportedSymbolicError(ValueError):
    """Raised when the abstract engine is asked for a non-integer shift s"""

    pass


def _accumulate(acc: Dict, term, coeff: Polynomial) -> None:
    total = acc.get(term)
    total = coeff if total is None else total + coeff
    if total.is_zero():
        acc.pop(term, None)
    else:
        acc[term] = total


# ---------------------------------------------------------------------- generators


def generator(symbol: str, exponent: int = 1) -> OperatorExpr:
    """X^e, N^e or D^e as an OperatorExpr (only X takes negative exponents)"""
    if symbol == "X":
        return OperatorExpr.term(x=exponent)
    if symbol == "N":
        return OperatorExpr.term(n=exponent)
    if symbol == "D":
        return OperatorExpr.term(d=exponent)
    raise ValueError(f"Unknown generator '{symbol}'")


def shift_binomial_operators(m: int, s: int) -> Tuple[OperatorExpr, OperatorExpr]:
    """R = q^s X^m D and S = [s] X^{m-1} N, so that (X^m D) X^s = X^s (R + S)"""
    r = OperatorExpr.term(x=m, d=1, coeff=Q ** s)
    s_op = OperatorExpr.term(x=m - 1, n=1, coeff=pq_number(s))
    return r, s_op


# ---------------------------------------------------------------------- concrete engine


def _left_d(expr: OperatorExpr) -> OperatorExpr:
    acc: Dict[NormalTerm, Polynomial] = {}
    for (a, b, c), coeff in expr.items():
        _accumulate(acc, NormalTerm(a, b, c + 1), coeff * Polynomial({(b, a, 0, 0): 1}))
        bracket = pq_number(a)
        if not bracket.is_zero():
            _accumulate(acc, NormalTerm(a - 1, b + 1, c), coeff * bracket)
    return OperatorExpr(acc)


def op_mul(left: OperatorExpr, right: OperatorExpr) -> OperatorExpr:
    """Normal-ordered product left * right

    Each term X^a N^b D^c of `left` acts on `right` by D^c first, then
    N^b (a factor p^{b x} on each term X^x ...), then the X^a shift.
    """
    d_powers: List[OperatorExpr] = [right]
    acc: Dict[NormalTerm, Polynomial] = {}
    for (a, b, c), coeff in left.items():
        while len(d_powers) <= c:
            d_powers.append(_left_d(d_powers[-1]))
        for (x, n, d), rc in d_powers[c].items():
            weight = coeff * rc
            if b and x:
                weight = weight.shift((b * x, 0, 0, 0))
            _accumulate(acc, NormalTerm(x + a, n + b, d), weight)
    return OperatorExpr(acc)


def op_pow(expr: OperatorExpr, n: int) -> OperatorExpr:
    """expr^n by repeated left multiplication; expr^0 is the identity"""
    if n < 0:
        raise ValueError(f"op_pow needs n >= 0, got {n}")
    result = OperatorExpr.identity()
    for _ in range(n):
        result = op_mul(expr, result)
    return result


def nc_binomial_expand(r: OperatorExpr, s: OperatorExpr, n: int) -> OperatorExpr:
    """(R + S)^n, normal ordered"""
    return op_pow(r + s, n)


# ---------------------------------------------------------------------- actions


def _poly_d(poly: Polynomial) -> Polynomial:
    result = Polynomial.zero()
    for k in {mono[3] for mono, _ in poly.items()}:
        if k:
            result = result + poly.coefficient("x", k) * pq_number(k) * X_POLY ** (k - 1)
    return result


def apply_to_poly(expr: OperatorExpr, f: Polynomial) -> Polynomial:
    """Act on a Laurent polynomial in x: X multiplies by x, N is f(px), D sends x^k to [k] x^{k-1}"""
    total = Polynomial.zero()
    d_powers: List[Polynomial] = [f]
    for (a, b, c), coeff in expr.items():
        while len(d_powers) <= c:
            d_powers.append(_poly_d(d_powers[-1]))
        g = d_powers[c]
        if b:
            g = g.substitute("x", (P ** b) * X_POLY)
        total = total + g.shift((0, 0, 0, a)) * coeff
    return total


def apply_to_series(expr: OperatorExpr, series: TruncatedSeries) -> TruncatedSeries:
    """Act on a truncated series; every D lowers the usable order by one

    Raises:
        ValueError: If a term carries a negative power of X
    """
    total: Optional[TruncatedSeries] = None
    d_powers: List[TruncatedSeries] = [series]
    for (a, b, c), coeff in expr.sorted_terms():
        if a < 0:
            raise ValueError("Series action needs nonnegative powers of X")
        while len(d_powers) <= c:
            d_powers.append(series_derivative(d_powers[-1]))
        g = d_powers[c]
        if b:
            g = g.dilate(P ** b)
        g = g.shift(a).scale(coeff)
        total = g if total is None else total + g
    if total is None:
        return TruncatedSeries.zero(series.order)
    return total


# ---------------------------------------------------------------------- oracle extraction


def extract_stirling(n: int, m: int) -> StirlingRow:
    """Order-m Stirling numbers read off the normal form of (X^m D)^n

    Returns:
        {(n, k): coefficient of X^{n(m-1)+k} N^{n-k} D^k} for k = 0..n

    Raises:
        ValueError: If m = 0
        SupportShapeError: If a term lies outside the predicted support
    """
    if m == 0:
        raise ValueError("Touchard order m must be nonzero")
    expr = op_pow(OperatorExpr.term(x=m, d=1), n)
    row: StirlingRow = {(n, k): Polynomial.zero() for k in range(n + 1)}
    for (x, nn, d), coeff in expr.items():
        if x != n * (m - 1) + d or nn != n - d:
            raise SupportShapeError(f"(X^{m}D)^{n} has stray term X^{x} N^{nn} D^{d}")
        row[(n, d)] = coeff
    logger.debug("Extracted Stirling row", n=n, m=m, terms=len(expr))
    return row


def binomial_coefficients_oracle(m: int, s: int, n: int) -> Dict[int, Polynomial]:
    """Coefficients of (R + S)^n in the basis (X^{m-1} N)^{n-k} (X^m D)^k

    Basis element k has a unique top term X^{(m-1)n+k} N^{n-k} D^k, so the
    coefficients are found by elimination from k = n down to 0.

    Returns:
        {k: d_k}; d_k equals the (q,h)-binomial coefficient of S^{n-k} R^k
        times [s]^{n-k} q^{sk}

    Raises:
        SupportShapeError: If the elimination leaves a remainder
    """
    r, s_op = shift_binomial_operators(m, s)
    remaining = nc_binomial_expand(r, s_op, n)
    s_prime = OperatorExpr.term(x=m - 1, n=1)
    r_prime = OperatorExpr.term(x=m, d=1)

    coefficients: Dict[int, Polynomial] = {}
    for k in range(n, -1, -1):
        basis = op_mul(op_pow(s_prime, n - k), op_pow(r_prime, k))
        top = NormalTerm((m - 1) * n + k, n - k, k)
        lead = basis.coefficient(top)
        if not lead.is_monomial():
            raise SupportShapeError(f"Basis element {k} has non-monomial top coefficient {lead}")
        d_k = remaining.coefficient(top) * lead ** -1
        coefficients[k] = d_k
        remaining = remaining - basis.scale(d_k)
    if not remaining.is_zero():
        raise SupportShapeError(f"(R+S)^{n} is not spanned by the shift-binomial basis: {remaining}")
    return coefficients


# ---------------------------------------------------------------------- abstract engine


def _h_poly(h: Union[Polynomial, int, Fraction, None]) -> Polynomial:
    if h is None:
        return H_POLY
    if isinstance(h, Polynomial):
        return h
    return Polynomial.constant(h)


def _left_u(expr: AbstractExpr, s: int, h: Polynomial) -> AbstractExpr:
    acc: Dict[AbstractTerm, Polynomial] = {}
    for (v, w, u), coeff in expr.items():
        _accumulate(acc, AbstractTerm(v, w, u + 1), coeff * Polynomial({(w, v, 0, 0): 1}))
        bracket = pq_number(v)
        if not bracket.is_zero() and not h.is_zero():
            _accumulate(acc, AbstractTerm(v + s - 1, w + 1, u), coeff * h * bracket)
    return AbstractExpr(acc)


def abstract_mul(left: AbstractExpr, right: AbstractExpr, s: int,
                 h: Union[Polynomial, int, Fraction, None] = None) -> AbstractExpr:
    """Normal-ordered product in the algebra UV - qVU = h V^s W, WV = pVW, UW = pWU"""
    if not isinstance(s, int):
        raise UnsupportedSymbolicError(f"Abstract rewriting needs an integer s, got {s!r}")
    h_poly = _h_poly(h)
    u_powers: List[AbstractExpr] = [right]
    acc: Dict[AbstractTerm, Polynomial] = {}
    for (a, b, c), coeff in left.items():
        while len(u_powers) <= c:
            u_powers.append(_left_u(u_powers[-1], s, h_poly))
        for (v, w, u), rc in u_powers[c].items():
            weight = coeff * rc
            if b and v:
                weight = weight.shift((b * v, 0, 0, 0))
            _accumulate(acc, AbstractTerm(v + a, w + b, u), weight)
    return AbstractExpr(acc)


def abstract_power_vu(n: int, s: int, h: Union[Polynomial, int, Fraction, None] = None) -> StirlingRow:
    """Generalized Stirling numbers as the normal-ordering coefficients of (VU)^n

    Args:
        n: Power
        s: Integer shift exponent
        h: None for the symbolic ring variable h, or a concrete value

    Returns:
        {(n, k): coefficient of V^{s(n-k)+k} W^{n-k} U^k} for k = 0..n

    Raises:
        UnsupportedSymbolicError: If s is not an integer
        SupportShapeError: If a term lies outside the predicted support
    """
    if not isinstance(s, int) or isinstance(s, bool):
        raise UnsupportedSymbolicError(f"Abstract rewriting needs an integer s, got {s!r}")
    vu = AbstractExpr.term(v=1, u=1)
    product = AbstractExpr.identity()
    for _ in range(n):
        product = abstract_mul(vu, product, s, h)

    row: StirlingRow = {(n, k): Polynomial.zero() for k in range(n + 1)}
    for (v, w, u), coeff in product.items():
        if v != s * (n - u) + u or w != n - u:
            raise SupportShapeError(f"(VU)^{n} has stray term V^{v} W^{w} U^{u}")
        row[(n, u)] = coeff
    logger.debug("Abstract (VU)^n expanded", n=n, s=s, terms=len(product))
    return row


def abstract_commutator(k: int, s: int, h: Union[Polynomial, int, Fraction, None] = None) -> AbstractExpr:
    """U V^k - q^k V^k U computed by the engine; equals h [k] V^{s+k-1} W"""
    u = AbstractExpr.term(u=1)
    vk = AbstractExpr.term(v=k)
    return abstract_mul(u, vk, s, h) - AbstractExpr.term(v=k, u=1, coeff=Q ** k)
