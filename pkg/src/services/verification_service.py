"""Verification service

Named identity checks over the exact engines. Every check returns verdict
rows (CheckResult or SpiveyReport); a violated identity is a verdict, not an
exception, and one failing sub-check never stops the others.
"""

import random
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Union

import mpmath
from pydantic import ValidationError

from ..models.enums import IdentityName, SeriesKind, SpiveyForm, StirlingKind, Verdict
from ..models.laurent import EvaluationError, Polynomial, RationalFunction, as_rational_function, rf_equal
from ..models.operators import AbstractExpr, OperatorExpr
from ..models.schema import CheckResult, SpiveyReport, StirlingVariant, VerificationReport, VerifyRequest
from ..models.series import TruncatedSeries
from ..utils.config import get_config
from ..utils.logger import get_logger
from ..utils.sampling import point_count, sample_points
from .normal_ordering import (
    abstract_commutator,
    abstract_power_vu,
    apply_to_poly,
    binomial_coefficients_oracle,
    extract_stirling,
    generator,
    nc_binomial_expand,
    op_mul,
    op_pow,
    shift_binomial_operators,
)
from .pq_functions import (
    P,
    Q,
    exp_series,
    explicit_qh_binomial,
    h_param,
    pq_gauss_binomial,
    pq_number,
    pq_number_in_base,
    qh_binomial,
    series_derivative,
)
from .stirling_service import StirlingService, get_stirling_service
from .touchard_service import TouchardService

logger = get_logger(__name__)

H = Polynomial.var("h")
X = Polynomial.var("x")

Row = Union[CheckResult, SpiveyReport]
Handler = Callable[[VerifyRequest], List[Row]]

DOBINSKI_POINTS = (
    (Fraction(1, 2), Fraction(1, 4), Fraction(1)),
    (Fraction(1), Fraction(1, 2), Fraction(1)),
    (Fraction(1), Fraction(1, 2), Fraction(1, 2)),
)


class VerificationError(Exception):
    """Raised when a verify request names an unknown identity or carries malformed params"""

    pass


def _check(name: str, ok: bool, params: Optional[Dict[str, Any]] = None, residual: Any = None,
           detail: Optional[str] = None, mismatch: Verdict = Verdict.FAIL) -> CheckResult:
    result = CheckResult(
        name=name,
        params={k: str(v) for k, v in (params or {}).items()},
        verdict=Verdict.PASS if ok else mismatch,
        residual=None if ok or residual is None else str(residual),
        detail=detail,
    )
    logger.debug("Sub-check", name=name, verdict=result.verdict.value, **result.params)
    return result


def _series_residual(series: TruncatedSeries) -> Optional[str]:
    indices = series.nonzero_indices()
    if not indices:
        return None
    return f"x^{indices[0]}: {series[indices[0]]}"


def _same(a: Union[Polynomial, RationalFunction], b: Union[Polynomial, RationalFunction]) -> bool:
    if isinstance(a, Polynomial) and isinstance(b, Polynomial):
        return a == b
    return rf_equal(as_rational_function(a), as_rational_function(b))


def _swap_pq(poly: Polynomial) -> Polynomial:
    return Polynomial({(q, p, h, x): c for (p, q, h, x), c in poly.items()})


def _random_poly(rng: random.Random, degree: int) -> Polynomial:
    return Polynomial({(0, 0, 0, i): rng.randint(-3, 3) for i in range(degree + 1)})


class VerificationService:
    """Run the named identity suite

    Sizes default to the ranges each identity is stated for; `max_n`,
    `order`, `points` and `tol` on the request override them, and
    params may narrow the parameter lists (`m`, `s`).
    """

    def __init__(self, stirling: Optional[StirlingService] = None, touchard: Optional[TouchardService] = None):
        self.config = get_config()
        self.stirling = stirling or get_stirling_service()
        self.touchard = touchard or TouchardService(self.stirling)
        self._registry: Dict[IdentityName, Handler] = {
            IdentityName.EXP_ID: self._exp_id,
            IdentityName.LEIBNIZ: self._leibniz,
            IdentityName.DQ_EXP: self._dq_exp,
            IdentityName.BRACKET_LAWS: self._bracket_laws,
            IdentityName.ABSTRACT_COMMUTATOR: self._abstract_commutator,
            IdentityName.GENERAL_ORACLE: self._general_oracle,
            IdentityName.TOUCHARD_ORACLE: self._touchard_oracle,
            IdentityName.H_HOMOGENEITY: self._h_homogeneity,
            IdentityName.CLASSICAL_ANCHOR: self._classical_anchor,
            IdentityName.Q_SPECIALIZATION: self._q_specialization,
            IdentityName.LANG_NUMBERS: self._lang_numbers,
            IdentityName.SHIFT_BINOMIAL: self._shift_binomial,
            IdentityName.TOUCHARD_SERIES: self._touchard_series,
            IdentityName.TOUCHARD_RECURRENCE: self._touchard_recurrence,
            IdentityName.SPIVEY: self._spivey,
            IdentityName.SPIVEY_PQ: self._spivey_pq,
            IdentityName.DOBINSKI: self._dobinski,
            IdentityName.QH_BINOMIAL_AUDIT: self._qh_binomial_audit,
            IdentityName.SPIVEY_AUDIT: self._spivey_audit,
        }

    @property
    def identities(self) -> List[str]:
        return [name.value for name in self._registry]

    def run(self, identity: str, **kwargs: Any) -> VerificationReport:
        """Build a VerifyRequest from loose arguments and verify it

        Raises:
            VerificationError: If the identity or a parameter is invalid
        """
        try:
            request = VerifyRequest(identity=identity, **kwargs)
        except ValidationError as e:
            raise VerificationError(f"Invalid verify request: {e}") from e
        return self.verify(request)

    def verify(self, request: VerifyRequest) -> VerificationReport:
        """Run every sub-check of one identity

        Raises:
            VerificationError: On malformed params
            ConvergenceError: If a numeric check leaves its convergence domain
        """
        handler = self._registry.get(request.identity)
        if handler is None:
            raise VerificationError(f"Unknown identity '{request.identity}'")

        logger.info("Verifying identity", identity=request.identity.value, mode=request.mode.value, seed=request.seed)
        rows = handler(request)
        report = VerificationReport(
            identity=request.identity,
            mode=request.mode,
            seed=request.seed,
            checks=[r for r in rows if isinstance(r, CheckResult)],
            spivey=[r for r in rows if isinstance(r, SpiveyReport)],
        )
        logger.info("Verification finished", identity=request.identity.value,
                    verdict=report.verdict.value, checks=len(rows))
        return report

    # ------------------------------------------------------------------ request helpers

    @staticmethod
    def _max_n(request: VerifyRequest, default: int) -> int:
        return default if request.max_n is None else request.max_n

    def _order(self, request: VerifyRequest, default: Optional[int] = None) -> int:
        if request.order is not None:
            return request.order
        return self.config.default_series_order if default is None else default

    def _points(self, request: VerifyRequest, degree: int,
                denominators: Sequence[Polynomial] = ()) -> List[Dict[str, Fraction]]:
        """Seeded points, at least max(min_points, degree + 1), where no denominator vanishes"""

        def nonsingular(point: Mapping[str, Fraction]) -> bool:
            try:
                return all(den.evaluate(point) != 0 for den in denominators)
            except EvaluationError:
                return False

        count = point_count(degree, request.points)
        logger.debug("Sampling points", identity=request.identity.value, degree=degree, count=count)
        return sample_points(request.seed, count, ("p", "q", "x"), accept=nonsingular)

    @staticmethod
    def _values(request: VerifyRequest, key: str, default: Sequence[int]) -> List[int]:
        raw = request.params.get(key)
        if raw is None:
            return list(default)
        items: Iterable[Any] = raw if isinstance(raw, (list, tuple)) else str(raw).split(",")
        try:
            return [int(item) for item in items]
        except (TypeError, ValueError) as e:
            raise VerificationError(f"Parameter '{key}' must be integers, got {raw!r}") from e

    # ------------------------------------------------------------------ pqcore

    def _exp_id(self, request: VerifyRequest) -> List[Row]:
        order = self._order(request)
        product = exp_series(SeriesKind.LOWER_E, order) * exp_series(SeriesKind.UPPER_E, order).dilate(-Polynomial.one())
        residual = product - TruncatedSeries.from_polynomial(Polynomial.one(), order)
        return [_check("e(x) E(-x) = 1", residual.is_zero(), {"order": order}, _series_residual(residual))]

    def _leibniz(self, request: VerifyRequest) -> List[Row]:
        rng = random.Random(request.seed)
        rows: List[Row] = []
        for n in range(self._max_n(request, 4) + 1):
            f, g = _random_poly(rng, 4), _random_poly(rng, 4)
            lhs = apply_to_poly(generator("D", n), f * g)
            rhs = Polynomial.zero()
            for k in range(n + 1):
                df = apply_to_poly(generator("D", n - k), f).substitute("x", P ** k * X)
                dg = apply_to_poly(generator("D", k), g).substitute("x", Q ** (n - k) * X)
                rhs = rhs + pq_gauss_binomial(n, k) * df * dg
            rows.append(_check("D^n(fg)", lhs == rhs, {"n": n, "f": f, "g": g}, lhs - rhs))
        return rows

    def _dq_exp(self, request: VerifyRequest) -> List[Row]:
        order = self._order(request, 15)
        rows: List[Row] = []
        for n in range(self._max_n(request, 5) + 1):
            lhs = exp_series(SeriesKind.LOWER_E, order + n)
            for _ in range(n):
                lhs = series_derivative(lhs)
            rhs = exp_series(SeriesKind.LOWER_E, order).dilate(P ** n).scale(P ** comb(n, 2))
            residual = lhs - rhs
            rows.append(_check("D^n e(x) = p^C(n,2) e(p^n x)", residual.is_zero(),
                               {"n": n, "order": order}, _series_residual(residual)))
        return rows

    def _bracket_laws(self, request: VerifyRequest) -> List[Row]:
        size = self._max_n(request, 12)
        rows: List[Row] = []

        failures = [(a, b) for a in range(size + 1) for b in range(size + 1)
                    if pq_number(a + b) != P ** b * pq_number(a) + Q ** a * pq_number(b)]
        rows.append(_check("[a+b] = p^b [a] + q^a [b]", not failures, {"max": size},
                           detail=f"failing pairs {failures}" if failures else None))

        small = min(size, 8)
        failures = [(a, b) for a in range(1, small + 1) for b in range(1, small + 1)
                    if pq_number(a * b) != pq_number(a) * pq_number_in_base(b, P ** a, Q ** a)]
        rows.append(_check("[ab] = [a] [b]_{p^a,q^a}", not failures, {"max": small},
                           detail=f"failing pairs {failures}" if failures else None))

        failures = [n for n in range(size + 1) if _swap_pq(pq_number(n)) != pq_number(n)]
        rows.append(_check("[n] symmetric in p, q", not failures, {"max": size},
                           detail=f"failing n {failures}" if failures else None))

        failures = []
        for n in range(min(size, 10) + 1):
            for k in range(n + 1):
                value = pq_gauss_binomial(n, k)
                positive = all(c > 0 and c.denominator == 1 for _, c in value.items())
                if value != pq_gauss_binomial(n, n - k) or not positive:
                    failures.append((n, k))
        rows.append(_check("Gaussian binomial symmetry and positivity", not failures, {"max": min(size, 10)},
                           detail=f"failing (n, k) {failures}" if failures else None))

        failures = []
        for n in range(size + 1):
            q_number = Polynomial({(0, i, 0, 0): 1 for i in range(n)})
            if pq_number(n).specialize({"p": 1}) != q_number or pq_number(n).evaluate({"p": 1, "q": 1}) != n:
                failures.append(n)
        rows.append(_check("[n] at p = 1 and p = q = 1", not failures, {"max": size},
                           detail=f"failing n {failures}" if failures else None))
        return rows

    # ------------------------------------------------------------------ operator algebra and Stirling tables

    def _abstract_commutator(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        for s in self._values(request, "s", (0, 1, 2)):
            for k in range(self._max_n(request, 8) + 1):
                got = abstract_commutator(k, s)
                expected = AbstractExpr.term(v=s + k - 1, w=1, coeff=H * pq_number(k)) if k else AbstractExpr()
                rows.append(_check("U V^k - q^k V^k U = h [k] V^(s+k-1) W", got == expected,
                                   {"s": s, "k": k}, got - expected))
        return rows

    def _general_oracle(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        for s in self._values(request, "s", (0, 1, 2)):
            for n in range(self._max_n(request, 6) + 1):
                oracle = abstract_power_vu(n, s)
                bad = [k for k in range(n + 1) if self.stirling.general(n, k, s) != oracle[(n, k)]]
                rows.append(_check("recurrence = (VU)^n coefficients", not bad, {"s": s, "n": n},
                                   detail=f"mismatched k {bad}" if bad else None))
        return rows

    def _touchard_oracle(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        for m in self._values(request, "m", (-2, -1, 1, 2, 3)):
            for n in range(self._max_n(request, 6) + 1):
                oracle = extract_stirling(n, m)
                bad = [k for k in range(n + 1) if self.stirling.touchard(n, k, m) != oracle[(n, k)]]
                rows.append(_check("recurrence = (X^m D)^n coefficients", not bad, {"m": m, "n": n},
                                   detail=f"mismatched k {bad}" if bad else None))
        return rows

    def _h_homogeneity(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        for s in self._values(request, "s", (0, 1, 2)):
            for n in range(self._max_n(request, 8) + 1):
                bad = [k for k in range(n + 1)
                       if self.stirling.general(n, k, s) != H ** (n - k) * self.stirling.general(n, k, s, 1)]
                rows.append(_check("S_h(n,k) = h^(n-k) S_1(n,k)", not bad, {"s": s, "n": n},
                                   detail=f"mismatched k {bad}" if bad else None))

                diagonal = self.stirling.general(n, n, s)
                rows.append(_check("S(n,n) = q^C(n,2)", diagonal == Q ** comb(n, 2), {"s": s, "n": n}, diagonal))
                if n >= 1:
                    expected = H ** (n - 1)
                    for i in range(1, n):
                        expected = expected * pq_number(s * (i - 1) + 1)
                    first = self.stirling.general(n, 1, s)
                    rows.append(_check("S(n,1) = h^(n-1) prod [s(i-1)+1]", first == expected,
                                       {"s": s, "n": n}, first - expected))
        return rows

    def _classical_anchor(self, request: VerifyRequest) -> List[Row]:
        classical = StirlingVariant(kind=StirlingKind.CLASSICAL)
        at_one = {"p": 1, "q": 1, "h": 1}
        rows: List[Row] = []
        for n in range(min(self._max_n(request, 8), self.config.enumeration_limit) + 1):
            counts = self.stirling.classical_oracle(n)
            table = [self.stirling.entry(classical, n, k).evaluate(at_one) for k in range(n + 1)]
            general = [self.stirling.general(n, k, 0, 1).evaluate(at_one) for k in range(n + 1)]
            abstract = abstract_power_vu(n, 0, 1)
            engine = [abstract[(n, k)].evaluate(at_one) for k in range(n + 1)]
            expected = [counts.get(k, 0) for k in range(n + 1)]
            ok = table == expected and general == expected and engine == expected
            rows.append(_check("p = q = h = 1 tables = set-partition counts", ok,
                               {"n": n, "bell": sum(expected)},
                               detail=None if ok else f"table {table}, engine {engine}, counts {expected}"))
        return rows

    def _q_specialization(self, request: VerifyRequest) -> List[Row]:
        size = self._max_n(request, 5)
        q_variant = StirlingVariant(kind=StirlingKind.Q)
        tilde = StirlingVariant(kind=StirlingKind.PQ, tilde=True)
        rows: List[Row] = []
        for n in range(size + 1):
            bad = [k for k in range(n + 1) if self.stirling.entry(q_variant, n, k) != self.stirling.q_stirling(n, k)]
            rows.append(_check("S_pq at p = 1 = q-recurrence", not bad, {"n": n},
                               detail=f"mismatched k {bad}" if bad else None))
            bad = [k for k in range(n + 1)
                   if self.stirling.entry(tilde, n, k).specialize({"p": 1}) != self.stirling.entry(q_variant, n, k)]
            rows.append(_check("tilde variant at p = 1 = plain", not bad, {"n": n},
                               detail=f"mismatched k {bad}" if bad else None))
        for total in range(size + 1):
            for n in range(total + 1):
                rows.append(self.touchard.spivey_m1(n, total - n, point={"p": 1}))
        return rows

    def _lang_numbers(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        at_one = {"p": 1, "q": 1}
        for m in self._values(request, "m", (-1, 1, 2, 3)):
            for n in range(self._max_n(request, 6) + 1):
                bad = [k for k in range(n + 1)
                       if self.stirling.touchard(n, k, m).evaluate(at_one) != self.stirling.lang_number(n, k, m)]
                rows.append(_check("order-m Stirling at p = q = 1 = rational-s recurrence", not bad,
                                   {"m": m, "n": n}, detail=f"mismatched k {bad}" if bad else None))
        return rows

    def _shift_binomial(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        for m in self._values(request, "m", (2, 3)):
            for s in self._values(request, "s", (1, 2, 3)):
                r, s_op = shift_binomial_operators(m, s)
                x_s = OperatorExpr.term(x=s)
                step = OperatorExpr.term(x=m, d=1)
                t = Polynomial({(1 - m, m - 1, 0, 0): 1})
                h = h_param(m, s)
                for n in range(self._max_n(request, 4) + 1):
                    lhs = op_mul(op_pow(step, n), x_s)
                    rhs = op_mul(x_s, nc_binomial_expand(r, s_op, n))
                    rows.append(_check("(X^m D)^n X^s = X^s (R + S)^n", lhs == rhs,
                                       {"m": m, "s": s, "n": n}, lhs - rhs))

                    oracle = binomial_coefficients_oracle(m, s, n)
                    bad = [
                        k for k in range(n + 1)
                        if not _same(oracle[k], qh_binomial(n, n - k, t, h)
                                     * RationalFunction(pq_number(s) ** (n - k) * Q ** (s * k)))
                    ]
                    rows.append(_check("(R + S)^n coefficients = (q,h)-binomials", not bad,
                                       {"m": m, "s": s, "n": n}, detail=f"mismatched k {bad}" if bad else None))
        return rows

    # ------------------------------------------------------------------ Touchard

    def _touchard_series(self, request: VerifyRequest) -> List[Row]:
        size = self._max_n(request, 4)
        pq_tilde = StirlingVariant(kind=StirlingKind.PQ, tilde=True)
        rows: List[Row] = []
        for m in self._values(request, "m", (0, 1, 2, 3)):
            for n in range(size + 1):
                order = self._order(request, n * max(m, 1) + 2)
                residual = self.touchard.touchard_series_residual(n, m, order)
                rows.append(_check("T_n = E(-p^n x) (X^m D)^n e(x)", residual.is_zero(),
                                   {"m": m, "n": n, "order": order}, _series_residual(residual)))
                if m == 0:
                    continue
                value = self.touchard.touchard_symbolic(n, m).value
                top = self.touchard.touchard_symbolic(n, m).top_coefficient
                expected_top = Polynomial({(comb(n, 2), m * comb(n, 2), 0, 0): 1})
                rows.append(_check("top coefficient = (p q^m)^C(n,2)", top == expected_top,
                                   {"m": m, "n": n}, top - expected_top))
                if n == 1:
                    rows.append(_check("T_1 = x^m", value == X ** m, {"m": m}, value - X ** m))
                if m == 1:
                    bell = self.stirling.bell(n, pq_tilde)
                    rows.append(_check("T^(1)_n = tilde pq-Bell polynomial", value == bell, {"n": n}, value - bell))
        return rows

    def _touchard_recurrence(self, request: VerifyRequest) -> List[Row]:
        order = self._order(request)
        rows: List[Row] = []
        for m in self._values(request, "m", (1, 2)):
            for n in range(self._max_n(request, 4) + 1):
                params = {"m": m, "n": n, "order": order}
                residual = self.touchard.touchard_recurrence_residual(n, m, order)
                rows.append(_check("T_(n+1) = x^m (p^n N + E e D) T_n", residual.is_zero(), params,
                                   _series_residual(residual)))
                literal = self.touchard.touchard_recurrence_residual(n, m, order, literal=True)
                rows.append(_check("T_(n+1) = x^m (N + E e D) T_n", literal.is_zero(), params,
                                   _series_residual(literal), mismatch=Verdict.DISCREPANCY_DOCUMENTED,
                                   detail="dilation term without the p^n factor"))
        return rows

    def _spivey_points(self, request: VerifyRequest, instances: Sequence[Any]) -> List[Dict[str, Fraction]]:
        """One point set for all (n, l, m, form) instances, sized by the largest degree"""
        degree = 0
        denominators: List[Polynomial] = []
        for n, l, m, form in instances:
            instance_degree, instance_dens = self.touchard.spivey_shape(n, l, m, form)
            degree = max(degree, instance_degree)
            denominators.extend(instance_dens)
        return self._points(request, degree, denominators)

    def _spivey(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        for total in range(self._max_n(request, 6) + 1):
            for n in range(total + 1):
                rows.append(self.touchard.spivey_sides(n, total - n, 1, classical=True))

        instances = [
            (n, total - n, m, SpiveyForm.CORRECTED)
            for m in self._values(request, "m", (1, 2, 3))
            for total in range(min(self._max_n(request, 4), 4) + 1)
            for n in range(total + 1)
        ]
        points = self._spivey_points(request, instances)
        for n, l, m, form in instances:
            for point in points:
                rows.append(self.touchard.spivey_sides(n, l, m, point=point, form=form))
        return rows

    def _spivey_pq(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        size = self._max_n(request, 4)
        for total in range(size + 1):
            for n in range(total + 1):
                rows.append(self.touchard.spivey_m1(n, total - n))
        for total in range(size + 2):
            for n in range(total + 1):
                rows.append(self.touchard.spivey_m1(n, total - n, point={"p": 1}))
                rows.append(self.touchard.spivey_m1(n, total - n, point={"p": 1, "q": 1}))
        return rows

    def _dobinski(self, request: VerifyRequest) -> List[Row]:
        tol = request.tol or 1e-10
        rows: List[Row] = []
        for m in self._values(request, "m", (1, 2)):
            for n in range(self._max_n(request, 5) + 1):
                bell = self.touchard.tilde_bell(n, m)
                symbolic = self.touchard.touchard_symbolic(n, m).value
                for p, q, x in DOBINSKI_POINTS:
                    point = {"p": p, "q": q, "x": x}
                    params = {"m": m, "n": n, **point}

                    exact = bell.evaluate(point)
                    numeric = self.touchard.dobinski(n, m, p, q, x)
                    error = abs(numeric.value - mpmath.mpf(exact.numerator) / exact.denominator)
                    rows.append(_check("Dobinski sum = tilde Bell polynomial", error < tol, params,
                                       mpmath.nstr(error, 5), detail=f"terms {numeric.terms_used}"))

                    exact = symbolic.evaluate(point)
                    numeric = self.touchard.touchard_numeric(n, m, p, q, x)
                    error = abs(numeric.value - mpmath.mpf(exact.numerator) / exact.denominator)
                    rows.append(_check("numeric Touchard = symbolic Touchard", error < tol, params,
                                       mpmath.nstr(error, 5), detail=f"terms {numeric.terms_used}"))
        return rows

    # ------------------------------------------------------------------ audits

    def _qh_binomial_audit(self, request: VerifyRequest) -> List[Row]:
        rows: List[Row] = []
        for m in self._values(request, "m", (2, 3)):
            for s in self._values(request, "s", (1, 2)):
                t = Polynomial({(1 - m, m - 1, 0, 0): 1})
                h = h_param(m, s)
                for n in range(self._max_n(request, 3) + 1):
                    oracle = binomial_coefficients_oracle(m, s, n)
                    params = {"m": m, "s": s, "n": n}

                    def mismatches(coefficient: Callable[[int], RationalFunction]) -> List[int]:
                        return [
                            k for k in range(n + 1)
                            if not _same(oracle[k], coefficient(k) * RationalFunction(pq_number(s) ** (n - k) * Q ** (s * k)))
                        ]

                    bad = mismatches(lambda k: qh_binomial(n, n - k, t, h))
                    rows.append(_check("product over the S-power, base q/p", not bad, params,
                                       detail=f"mismatched k {bad}" if bad else None))
                    bad = mismatches(lambda k: qh_binomial(n, k, t, h))
                    rows.append(_check("product over the R-power, base q/p", not bad, params,
                                       mismatch=Verdict.DISCREPANCY_DOCUMENTED,
                                       detail=f"mismatched k {bad}" if bad else None))
                    bad = mismatches(lambda k: explicit_qh_binomial(n, k, P ** (m - 1), Q ** (m - 1), h))
                    rows.append(_check("explicit (p^(m-1), q^(m-1), h) conversion", not bad, params,
                                       mismatch=Verdict.DISCREPANCY_DOCUMENTED,
                                       detail=f"mismatched k {bad}" if bad else None))
        return rows

    def _forms(self, request: VerifyRequest) -> List[SpiveyForm]:
        raw = request.params.get("form")
        if raw is None:
            return list(SpiveyForm)
        labels = raw if isinstance(raw, (list, tuple)) else str(raw).split(",")
        forms: List[SpiveyForm] = []
        try:
            for label in labels:
                for form in SpiveyForm.select(str(label).strip()):
                    if form not in forms:
                        forms.append(form)
        except ValueError as e:
            raise VerificationError(str(e)) from e
        return forms

    def _spivey_audit(self, request: VerifyRequest) -> List[Row]:
        forms = self._forms(request)
        instances = [
            (n, total - n, m, form)
            for m in self._values(request, "m", (2, 3))
            for total in range(self._max_n(request, 3) + 1)
            for n in range(total + 1)
            for form in forms
        ]
        points = self._spivey_points(request, instances)
        rows: List[Row] = []
        for n, l, m, form in instances:
            for point in points:
                rows.append(self.touchard.spivey_sides(n, l, m, point=point, form=form))
        return rows


# Global service instance
_service: Optional[VerificationService] = None


def get_verification_service() -> VerificationService:
    """Get or create the shared VerificationService"""
    global _service
    if _service is None:
        _service = VerificationService()
    return _service
