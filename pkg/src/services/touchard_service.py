"""Touchard service

Generalized (p,q)-Touchard polynomials T^{(m)}_n(x) = E(-p^n x) (X^m D)^n e(x),
their recurrence, the Dobinski formula and the Spivey relation.

Symbolic results are exact Laurent polynomials for integer m. The numeric
kernel accepts real m and sums the Dobinski series termwise with mpmath.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

import mpmath

from ..models.enums import SeriesKind, SpiveyForm, SpiveyMode, StirlingKind, Verdict
from ..models.laurent import EvaluationError, Polynomial, RationalFunction, Scalar, as_rational_function
from ..models.operators import OperatorExpr
from ..models.schema import RationalFunctionDocument, SpiveyReport, StirlingVariant
from ..models.series import TruncatedSeries
from ..utils.config import get_config
from ..utils.logger import get_logger
from .normal_ordering import apply_to_series, extract_stirling, op_pow
from .numeric_series import RealLike, SeriesSum, check_domain, exp_value, real_bracket, sum_series, to_mpf
from .pq_functions import (
    P,
    Q,
    UndefinedParameterError,
    exp_series,
    explicit_qh_binomial,
    h_param,
    pq_number,
    qh_binomial,
    series_derivative,
)
from .stirling_service import StirlingService, get_stirling_service

logger = get_logger(__name__)

X = Polynomial.var("x")

Factor = Union[Polynomial, RationalFunction]

# (n, l, m, form) instances whose Spivey summands stay memoized
SPIVEY_CACHE_SIZE = 256


@dataclass(frozen=True)
class TouchardPoly:
    """T^{(m)}_n(x) with coefficients in p, q"""

    n: int
    m: int
    value: Polynomial

    @property
    def top_coefficient(self) -> Polynomial:
        """Coefficient of x^{nm}"""
        return self.value.coefficient("x", self.n * self.m)


@dataclass(frozen=True)
class NumericResult:
    """Real value from the numeric kernel with the number of series terms consumed"""

    value: mpmath.mpf
    terms_used: int


def _monomial(p_exp: int, q_exp: int) -> Polynomial:
    return Polynomial({(p_exp, q_exp, 0, 0): 1})


def _dilate_x(poly: Polynomial, factor: Polynomial) -> Polynomial:
    return poly.substitute("x", factor * X)


class TouchardService:
    """Touchard polynomials, Dobinski sums and Spivey checks

    Stirling entries come from a StirlingService; the Spivey left-hand side
    is rebuilt from the normal-ordering oracle so the two sides never share
    a recurrence.
    """

    def __init__(self, stirling: Optional[StirlingService] = None):
        self.stirling = stirling or get_stirling_service()
        self._spivey_summands = lru_cache(maxsize=SPIVEY_CACHE_SIZE)(self._build_spivey_summands)

    # ------------------------------------------------------------------ symbolic

    def tilde_bell(self, n: int, m: int) -> Polynomial:
        """sum_k p^{C(k,2)} S^{(m)}(n,k) x^k"""
        if m == 0:
            raise ValueError("Touchard order m must be nonzero for Bell polynomials")
        variant = StirlingVariant(kind=StirlingKind.TOUCHARD, m=m, tilde=True)
        return self.stirling.bell(n, variant)

    def touchard_symbolic(self, n: int, m: int) -> TouchardPoly:
        """T^{(m)}_n(x) = x^{n(m-1)} sum_k p^{C(k,2)} S^{(m)}(n,k) x^k; m = 0 gives p^{C(n,2)}"""
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        if m == 0:
            return TouchardPoly(n, m, Polynomial.var("p", comb(n, 2)))
        value = self.tilde_bell(n, m).shift((0, 0, 0, n * (m - 1)))
        return TouchardPoly(n, m, value)

    def touchard_recurrence_residual(self, n: int, m: int, order: int, literal: bool = False) -> TruncatedSeries:
        """T_{n+1} - x^m (p^n N + E(-p^{n+1} x) e(p^n q x) D) T_n in series arithmetic

        Args:
            n: Index of the known polynomial
            m: Touchard order, m >= 0
            order: Truncation order of the residual
            literal: Drop the p^n factor on the dilation term

        Returns:
            Residual series; zero through `order` when the recurrence holds
        """
        if m < 0:
            raise ValueError("Series arithmetic needs m >= 0")
        lhs = TruncatedSeries.from_polynomial(self.touchard_symbolic(n + 1, m).value, order)
        current = TruncatedSeries.from_polynomial(self.touchard_symbolic(n, m).value, order + 1)

        dilated = current.dilate(P).truncate(order)
        if not literal:
            dilated = dilated.scale(P ** n)
        multiplier = (
            exp_series(SeriesKind.UPPER_E, order).dilate(-(P ** (n + 1)))
            * exp_series(SeriesKind.LOWER_E, order).dilate(P ** n * Q)
        )
        rhs = (dilated + multiplier * series_derivative(current)).shift(m)
        return lhs - rhs

    def touchard_series_residual(self, n: int, m: int, order: int) -> TruncatedSeries:
        """T^{(m)}_n - E(-p^n x) (X^m D)^n e(x), all in series arithmetic (m >= 0)"""
        if m < 0:
            raise ValueError("Series arithmetic needs m >= 0")
        word = op_pow(OperatorExpr.term(x=m, d=1), n)
        applied = apply_to_series(word, exp_series(SeriesKind.LOWER_E, order + n)).truncate(order)
        rhs = exp_series(SeriesKind.UPPER_E, order).dilate(-(P ** n)) * applied
        lhs = TruncatedSeries.from_polynomial(self.touchard_symbolic(n, m).value, order)
        return lhs - rhs

    # ------------------------------------------------------------------ numeric

    @staticmethod
    def _dobinski_terms(n: int, m: mpmath.mpf, p: mpmath.mpf, q: mpmath.mpf,
                        x: mpmath.mpf) -> Iterator[mpmath.mpf]:
        # weight_k = p^{C(k,2)} x^k / [k]!
        weight = mpmath.mpf(1)
        k = 0
        while True:
            product = mpmath.mpf(1)
            for j in range(n):
                product *= real_bracket(k + j * (m - 1), p, q)
            yield weight * product
            weight = weight * mpmath.power(p, k) * x / real_bracket(k + 1, p, q)
            k += 1

    def _dobinski_sum(self, n: int, m: RealLike, p: RealLike, q: RealLike, x: RealLike,
                      tol: Optional[float]) -> Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf, mpmath.mpf, SeriesSum]:
        p_val, q_val, x_val, m_val = to_mpf(p), to_mpf(q), to_mpf(x), to_mpf(m)
        check_domain(p_val, q_val, x_val, mpmath.power(p_val, n) * x_val)
        inner = sum_series(self._dobinski_terms(n, m_val, p_val, q_val, x_val), tol=tol)
        return p_val, q_val, x_val, m_val, inner

    def touchard_numeric(self, n: int, m: RealLike, p: RealLike, q: RealLike, x: RealLike,
                         tol: Optional[float] = None) -> NumericResult:
        """x^{n(m-1)} E(-p^n x) sum_k p^{C(k,2)} prod_j [k + j(m-1)] x^k / [k]!

        Raises:
            ValueError: If p = q or a base is not positive
            ConvergenceError: Outside the convergence domain
        """
        if n == 0:
            return NumericResult(mpmath.mpf(1), 0)
        with mpmath.workdps(get_config().working_digits):
            p_val, q_val, x_val, m_val, inner = self._dobinski_sum(n, m, p, q, x, tol)
            damping = exp_value(SeriesKind.UPPER_E, -mpmath.power(p_val, n) * x_val, p_val, q_val, tol)
            prefactor = mpmath.power(x_val, n * (m_val - 1))
            if isinstance(prefactor, mpmath.mpc):
                raise ValueError("x^{n(m-1)} is not real at this point")
            value = prefactor * damping.value * inner.value
            logger.debug("Touchard numeric", n=n, m=str(m), terms=inner.terms_used)
            return NumericResult(+value, inner.terms_used + damping.terms_used)

    def dobinski(self, n: int, m: RealLike, p: RealLike, q: RealLike, x: RealLike,
                 tol: Optional[float] = None) -> NumericResult:
        """Dobinski quotient sum_k prod_j [k + j(m-1)] p^{C(k,2)} x^k / [k]! divided by e(p^n x)

        Raises:
            ValueError: If p = q or a base is not positive
            ConvergenceError: Outside the convergence domain
        """
        if n == 0:
            return NumericResult(mpmath.mpf(1), 0)
        with mpmath.workdps(get_config().working_digits):
            p_val, q_val, x_val, _, inner = self._dobinski_sum(n, m, p, q, x, tol)
            normalizer = exp_value(SeriesKind.LOWER_E, mpmath.power(p_val, n) * x_val, p_val, q_val, tol)
            logger.debug("Dobinski sum", n=n, m=str(m), terms=inner.terms_used)
            return NumericResult(inner.value / normalizer.value, inner.terms_used + normalizer.terms_used)

    # ------------------------------------------------------------------ Spivey

    def _oracle_bell(self, n: int, m: int) -> Polynomial:
        row = extract_stirling(n, m)
        total = Polynomial.zero()
        for (_, k), coeff in row.items():
            total = total + coeff.shift((comb(k, 2), 0, 0, k))
        return total

    def _build_spivey_summands(self, n: int, l: int, m: int,
                               form: SpiveyForm) -> Tuple[Polynomial, List[List[Factor]]]:
        """Oracle left-hand side and the factor lists of every right-hand summand

        Raises:
            UndefinedParameterError: If a summand needs h_{m,0} with m != 1 (no-bracket-power form)
        """
        lhs = self._oracle_bell(n + l, m)
        t = _monomial(1 - m, m - 1)
        summands: List[List[Factor]] = []
        for j in range(l + 1):
            stirling = self.stirling.touchard(l, j, m)
            if stirling.is_zero():
                continue
            s_j = j + l * (m - 1)
            tilde = stirling.shift((comb(j, 2), 0, 0, j))
            for k in range(n + 1):
                if form is SpiveyForm.CORRECTED:
                    p_exp = (m - 1) * (comb(n, 2) - comb(k, 2))
                else:
                    p_exp = (m - 1) * ((n - k) * (1 + k) + k * l)
                factors: List[Factor] = [tilde, _monomial(p_exp, k * s_j)]

                if s_j == 0 and m != 1 and form is not SpiveyForm.NO_BRACKET_POWER:
                    # S = [s] X^{m-1} N vanishes, so (R + S)^n = R^n
                    if k != n:
                        continue
                else:
                    h = h_param(m, s_j, strict=False)
                    if form is SpiveyForm.CORRECTED:
                        factors.append(qh_binomial(n, n - k, t, h))
                    else:
                        factors.append(explicit_qh_binomial(n, k, P ** (m - 1), Q ** (m - 1), h))
                    if form is not SpiveyForm.NO_BRACKET_POWER:
                        factors.append(pq_number(s_j) ** (n - k))

                factors.append(_dilate_x(self.tilde_bell(k, m), P ** (n + l - k)))
                summands.append(factors)

        return lhs, summands

    def spivey_shape(self, n: int, l: int, m: int,
                     form: Union[SpiveyForm, str] = SpiveyForm.CORRECTED) -> Tuple[int, List[Polynomial]]:
        """Degree estimate and right-hand denominators of one Spivey instance

        The degree is the largest total degree of the left-hand side or of a
        summand with its denominators cleared; rational-point checks draw more
        points than that and avoid zeros of the denominators.
        """
        try:
            lhs, summands = self._spivey_summands(n, l, m, SpiveyForm(form))
        except UndefinedParameterError:
            return self._oracle_bell(n + l, m).total_degree(), []
        degree = lhs.total_degree()
        denominators: List[Polynomial] = []
        for factors in summands:
            summand_degree = 0
            for f in factors:
                if isinstance(f, RationalFunction):
                    summand_degree += f.num.total_degree() + f.den.total_degree()
                    if not f.den.is_constant():
                        denominators.append(f.den)
                else:
                    summand_degree += f.total_degree()
            degree = max(degree, summand_degree)
        return degree, denominators

    def spivey_sides(self, n: int, l: int, m: int, point: Optional[Mapping[str, Scalar]] = None,
                     form: Union[SpiveyForm, str] = SpiveyForm.CORRECTED,
                     classical: bool = False) -> SpiveyReport:
        """Both sides of the Spivey relation for B~_{n+l}(x)

        Args:
            n, l: Split of the Bell index
            m: Nonzero Touchard order
            point: Rational p, q, x (rational-point mode); with classical, an optional x
            form: Right-hand side variant
            classical: Specialize p = q = 1 and compare as polynomials in x

        Returns:
            SpiveyReport; the corrected form fails on a nonzero residual,
            the other forms report it as a documented discrepancy
        """
        form = SpiveyForm(form)
        if m == 0:
            raise ValueError("Spivey relation needs a nonzero order m")
        params = {"n": str(n), "l": str(l), "m": str(m)}
        if classical:
            mode = SpiveyMode.SYMBOLIC_CLASSICAL
            specialization: Dict[str, Scalar] = {"p": 1, "q": 1}
            if point and "x" in point:
                specialization["x"] = Fraction(point["x"])
        elif point is not None:
            mode = SpiveyMode.RATIONAL_POINT
            missing = {"p", "q", "x"} - set(point)
            if missing:
                raise ValueError(f"Rational-point mode needs p, q and x; missing {sorted(missing)}")
            specialization = {name: Fraction(point[name]) for name in ("p", "q", "x")}
        else:
            mode = SpiveyMode.SYMBOLIC
            specialization = {}
        params.update({name: str(value) for name, value in specialization.items()})

        try:
            lhs_poly, summands = self._spivey_summands(n, l, m, form)
        except UndefinedParameterError as e:
            return SpiveyReport(form=form, params=params, mode=mode, residual_zero=False,
                                verdict=Verdict.DISCREPANCY_DOCUMENTED, note=str(e))

        try:
            if mode is SpiveyMode.RATIONAL_POINT:
                lhs_value: Union[Fraction, RationalFunction] = lhs_poly.evaluate(specialization)
                rhs_value: Union[Fraction, RationalFunction] = Fraction(0)
                for factors in summands:
                    product = Fraction(1)
                    for f in factors:
                        product *= f.evaluate(specialization)
                    rhs_value += product
            else:
                lhs_value = as_rational_function(lhs_poly.specialize(specialization))
                rhs_value = RationalFunction.zero()
                for factors in summands:
                    product_rf = RationalFunction.one()
                    for f in factors:
                        product_rf = product_rf * as_rational_function(f).specialize(specialization)
                    rhs_value = rhs_value + product_rf
        except (EvaluationError, UndefinedParameterError, TypeError) as e:
            # TypeError: an undefined h value reached the arithmetic
            return SpiveyReport(form=form, params=params, mode=mode, residual_zero=False,
                                verdict=Verdict.DISCREPANCY_DOCUMENTED, note=str(e))

        residual = lhs_value - rhs_value
        if isinstance(residual, Fraction):
            zero = residual == 0
            lhs_out, rhs_out, res_out = str(lhs_value), str(rhs_value), str(residual)
        else:
            zero = residual.is_zero()
            lhs_out = RationalFunctionDocument.from_value(lhs_value)  # type: ignore[arg-type]
            rhs_out = RationalFunctionDocument.from_value(rhs_value)  # type: ignore[arg-type]
            res_out = RationalFunctionDocument.from_value(residual)

        if zero:
            verdict = Verdict.PASS
        elif form is SpiveyForm.CORRECTED:
            verdict = Verdict.FAIL
        else:
            verdict = Verdict.DISCREPANCY_DOCUMENTED
        logger.debug("Spivey check", form=form.value, mode=mode.value, verdict=verdict.value, **params)
        return SpiveyReport(form=form, params=params, mode=mode, lhs=lhs_out, rhs=rhs_out,
                            residual=res_out, residual_zero=zero, verdict=verdict)

    def spivey_m1(self, n: int, mm: int, point: Optional[Mapping[str, Scalar]] = None) -> SpiveyReport:
        """pq-Spivey relation for B_{n+mm}(p,q;1) built from the pq-Stirling table

        Args:
            n, mm: Split of the Bell index
            point: Optional partial specialization, {"p": 1} for the q-case or
                {"p": 1, "q": 1} for the classical case
        """
        variant = StirlingVariant(kind=StirlingKind.PQ)
        specialization = {name: Fraction(v) for name, v in (point or {}).items()}

        def bell_at(j: int, y: Polynomial) -> Polynomial:
            total = Polynomial.zero()
            power = Polynomial.one()
            for i in range(j + 1):
                total = total + self.stirling.entry(variant, j, i).shift((comb(i, 2), 0, 0, 0)) * power
                power = power * y
            return total

        lhs = bell_at(n + mm, Polynomial.one())
        rhs = Polynomial.zero()
        for k in range(n + 1):
            s_nk = self.stirling.entry(variant, n, k)
            if s_nk.is_zero():
                continue
            for j in range(mm + 1):
                rhs = rhs + (
                    s_nk * pq_number(k) ** (mm - j) * _monomial(comb(k, 2), j * k)
                    * comb(mm, j) * bell_at(j, P ** (n + mm - j))
                )

        lhs = lhs.specialize(specialization)
        rhs = rhs.specialize(specialization)
        residual = lhs - rhs
        zero = residual.is_zero()
        mode = SpiveyMode.SYMBOLIC_CLASSICAL if {"p", "q"} <= set(specialization) else SpiveyMode.SYMBOLIC
        params = {"n": str(n), "mm": str(mm), **{k: str(v) for k, v in specialization.items()}}
        return SpiveyReport(
            identity="spivey-pq",
            form=SpiveyForm.CORRECTED,
            params=params,
            mode=mode,
            lhs=RationalFunctionDocument.from_value(lhs),
            rhs=RationalFunctionDocument.from_value(rhs),
            residual=RationalFunctionDocument.from_value(residual),
            residual_zero=zero,
            verdict=Verdict.PASS if zero else Verdict.FAIL,
        )

