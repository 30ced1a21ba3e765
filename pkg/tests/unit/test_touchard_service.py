"""Unit tests for TouchardService"""

from fractions import Fraction

import mpmath
import pytest

from src.models.enums import SpiveyForm, SpiveyMode, Verdict
from src.models.laurent import Polynomial
from src.services.numeric_series import ConvergenceError
from src.services.stirling_service import StirlingService
from src.services.touchard_service import SPIVEY_CACHE_SIZE, TouchardService

P = Polynomial.var("p")
Q = Polynomial.var("q")
X = Polynomial.var("x")

POINT = {"p": Fraction(3, 2), "q": Fraction(2, 5), "x": Fraction(7, 3)}


@pytest.fixture(scope="module")
def touchard():
    """Service over a private Stirling table store"""
    return TouchardService(StirlingService())


class TestSymbolic:
    """Test exact Touchard polynomials"""

    def test_order_one(self, touchard):
        """Test T_2 = x + pq x^2"""
        assert touchard.touchard_symbolic(2, 1).value == X + P * Q * X ** 2

    def test_order_two(self, touchard):
        """Test T_2 = (p + q) x^3 + p q^2 x^4"""
        result = touchard.touchard_symbolic(2, 2)
        assert result.value == (P + Q) * X ** 3 + P * Q ** 2 * X ** 4
        assert result.top_coefficient == P * Q ** 2

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_first_index(self, touchard, m):
        """Test T_0 = 1 and T_1 = x^m"""
        assert touchard.touchard_symbolic(0, m).value == 1
        assert touchard.touchard_symbolic(1, m).value == X ** m

    def test_order_zero(self, touchard):
        """Test m = 0 gives p^C(n,2)"""
        assert touchard.touchard_symbolic(3, 0).value == P ** 3

    def test_negative_index(self, touchard):
        """Test n < 0"""
        with pytest.raises(ValueError):
            touchard.touchard_symbolic(-1, 1)

    def test_bell_needs_nonzero_order(self, touchard):
        """Test tilde Bell at m = 0"""
        with pytest.raises(ValueError, match="nonzero"):
            touchard.tilde_bell(2, 0)

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_operator_definition(self, touchard, m):
        """Test T_n = E(-p^n x) (X^m D)^n e(x) as series"""
        for n in range(4):
            order = n * max(m, 1) + 2
            assert touchard.touchard_series_residual(n, m, order).is_zero()

    @pytest.mark.parametrize("m", [1, 2])
    def test_recurrence(self, touchard, m):
        """Test T_(n+1) from T_n with the p^n dilation factor"""
        for n in range(3):
            assert touchard.touchard_recurrence_residual(n, m, 8).is_zero()

    def test_recurrence_without_factor_fails(self, touchard):
        """Test the dilation term needs p^n once n >= 1"""
        assert touchard.touchard_recurrence_residual(0, 1, 6, literal=True).is_zero()
        assert not touchard.touchard_recurrence_residual(1, 1, 6, literal=True).is_zero()


class TestNumeric:
    """Test the Dobinski series at real points"""

    def test_dobinski_first_index(self, touchard):
        """Test the Dobinski quotient for n = 1 is x"""
        result = touchard.dobinski(1, 1, 2, 1, "1/4")
        assert mpmath.almosteq(result.value, mpmath.mpf("0.25"), rel_eps=1e-12)
        assert result.terms_used > 0

    def test_numeric_matches_symbolic(self, touchard):
        """Test T_2 = x + pq x^2 at p = 2, q = 1, x = 1/4"""
        result = touchard.touchard_numeric(2, 1, 2, 1, "1/4")
        assert mpmath.almosteq(result.value, mpmath.mpf("0.375"), rel_eps=1e-12)

    def test_index_zero(self, touchard):
        """Test n = 0 is 1 without summing"""
        result = touchard.touchard_numeric(0, 2, 2, 1, "1/4")
        assert result.value == 1
        assert result.terms_used == 0

    def test_outside_domain(self, touchard):
        """Test q/p >= 1"""
        with pytest.raises(ConvergenceError):
            touchard.dobinski(2, 1, 1, 2, "1/4")

    def test_equal_bases(self, touchard):
        """Test p = q"""
        with pytest.raises(ValueError):
            touchard.touchard_numeric(2, 1, 1, 1, "1/4")


class TestSpivey:
    """Test the Spivey relation"""

    def test_classical(self, touchard):
        """Test p = q = 1 sides agree as polynomials in x"""
        for total in range(5):
            for n in range(total + 1):
                report = touchard.spivey_sides(n, total - n, 1, classical=True)
                assert report.mode is SpiveyMode.SYMBOLIC_CLASSICAL
                assert report.verdict is Verdict.PASS

    @pytest.mark.parametrize("m", [1, 2])
    def test_corrected_at_point(self, touchard, m):
        """Test the corrected right-hand side at a rational point"""
        for total in range(4):
            for n in range(total + 1):
                report = touchard.spivey_sides(n, total - n, m, point=POINT)
                assert report.mode is SpiveyMode.RATIONAL_POINT
                assert report.verdict is Verdict.PASS, report.params
                assert report.residual == "0"

    def test_symbolic(self, touchard):
        """Test a fully symbolic comparison"""
        report = touchard.spivey_sides(1, 1, 1)
        assert report.mode is SpiveyMode.SYMBOLIC
        assert report.residual_zero

    def test_undefined_h_is_documented(self, touchard):
        """Test a summand needing h_{m,0} is reported, not raised"""
        report = touchard.spivey_sides(1, 0, 2, point=POINT, form=SpiveyForm.NO_BRACKET_POWER)
        assert report.verdict is Verdict.DISCREPANCY_DOCUMENTED
        assert "undefined" in report.note

    def test_point_needs_all_variables(self, touchard):
        """Test rational-point mode without x"""
        with pytest.raises(ValueError, match="missing"):
            touchard.spivey_sides(1, 1, 1, point={"p": 2, "q": 1})

    def test_order_zero(self, touchard):
        """Test m = 0"""
        with pytest.raises(ValueError, match="nonzero"):
            touchard.spivey_sides(1, 1, 0)

    def test_family_label_accepted(self, touchard):
        """Test the lemma-derived family label evaluates the corrected form"""
        report = touchard.spivey_sides(1, 1, 2, point=POINT, form="lemma-derived")
        assert report.form is SpiveyForm.CORRECTED
        assert report.family == "lemma-derived"
        assert report.verdict is Verdict.PASS

    def test_summand_cache_is_bounded(self):
        """Test summands are memoized in a bounded cache"""
        service = TouchardService(StirlingService())
        service.spivey_sides(1, 1, 1, point=POINT)
        service.spivey_sides(1, 1, 1, point=POINT)
        info = service._spivey_summands.cache_info()
        assert info.maxsize == SPIVEY_CACHE_SIZE
        assert info.currsize == 1
        assert info.hits == 1

    def test_shape_covers_left_side(self, touchard):
        """Test the degree estimate bounds the left-hand Bell polynomial"""
        degree, denominators = touchard.spivey_shape(2, 1, 2)
        assert degree >= touchard._oracle_bell(3, 2).total_degree()
        assert all(not d.is_constant() for d in denominators)


class TestSpiveyPQ:
    """Test the pq-Spivey relation for Bell numbers"""

    def test_symbolic(self, touchard):
        """Test B_(n+m) for small splits"""
        for total in range(4):
            for n in range(total + 1):
                report = touchard.spivey_m1(n, total - n)
                assert report.identity == "spivey-pq"
                assert report.verdict is Verdict.PASS

    def test_classical(self, touchard):
        """Test p = q = 1"""
        report = touchard.spivey_m1(2, 2, point={"p": 1, "q": 1})
        assert report.mode is SpiveyMode.SYMBOLIC_CLASSICAL
        assert report.verdict is Verdict.PASS
        assert report.params["p"] == "1"
