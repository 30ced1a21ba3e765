"""Unit tests for the adaptive real-number kernel"""

from fractions import Fraction

import mpmath
import pytest

from src.models.enums import SeriesKind
from src.services.numeric_series import (
    ConvergenceError,
    check_domain,
    exp_value,
    sum_series,
    to_mpf,
)
from src.utils.config import get_config


def geometric(ratio):
    term = mpmath.mpf(1)
    while True:
        yield term
        term *= ratio


class TestConversion:
    """Test exact conversion into mpmath"""

    def test_fraction_string(self):
        """Test "1/3" is parsed as a rational"""
        assert to_mpf("1/3") == mpmath.mpf(1) / 3

    def test_fraction(self):
        """Test Fraction input"""
        assert to_mpf(Fraction(3, 4)) == mpmath.mpf("0.75")


class TestDomain:
    """Test the convergence domain check"""

    def test_inside(self):
        """Test q/p is returned inside the domain"""
        assert check_domain(2, 1, "1/2") == mpmath.mpf("0.5")

    def test_ratio_not_below_one(self):
        """Test q/p >= 1"""
        with pytest.raises(ConvergenceError, match="not below 1"):
            check_domain(2, 3)

    def test_argument_outside_radius(self):
        """Test |y| >= 1/(1 - q/p)"""
        with pytest.raises(ConvergenceError, match="radius"):
            check_domain(2, 1, 3)

    def test_equal_bases(self):
        """Test p = q is a usage error"""
        with pytest.raises(ValueError, match="p != q"):
            check_domain(1, 1)

    def test_nonpositive_base(self):
        """Test a nonpositive base"""
        with pytest.raises(ValueError, match="positive"):
            check_domain(-1, 1)


class TestSumSeries:
    """Test adaptive summation"""

    def test_geometric_half(self):
        """Test 1 + 1/2 + 1/4 + ... = 2"""
        result = sum_series(geometric(mpmath.mpf("0.5")))
        assert mpmath.almosteq(result.value, 2, rel_eps=1e-13)
        assert result.terms_used > get_config().guard_window

    def test_divergent_ratio(self):
        """Test growing terms fail the ratio test"""
        with pytest.raises(ConvergenceError, match="ratio test"):
            sum_series(geometric(mpmath.mpf(2)))

    def test_max_terms(self):
        """Test a slowly converging series runs out of terms"""
        slow = (mpmath.mpf(1) / (k + 1) ** 2 for k in range(10 ** 6))
        with pytest.raises(ConvergenceError, match="within 50 terms"):
            sum_series(slow, max_terms=50)

    def test_finite_iterable(self):
        """Test a finite iterable is summed in full"""
        result = sum_series([mpmath.mpf(1), mpmath.mpf(2), mpmath.mpf(3)])
        assert result.value == 6
        assert result.terms_used == 3


class TestExponentials:
    """Test e_{p,q} and E_{p,q} at real points"""

    def test_inverse_pair(self):
        """Test e(y) E(-y) = 1"""
        e = exp_value(SeriesKind.LOWER_E, "1/2", 2, 1).value
        big_e = exp_value(SeriesKind.UPPER_E, "-1/2", 2, 1).value
        assert mpmath.almosteq(e * big_e, 1, rel_eps=1e-12)

    def test_lower_e_outside_radius(self):
        """Test e_{p,q} outside its radius"""
        with pytest.raises(ConvergenceError):
            exp_value(SeriesKind.LOWER_E, 5, 2, 1)

    def test_decimal_precision(self, monkeypatch):
        """Test decimal mode carries at least 50 digits"""
        from src.utils.config import reset_config

        monkeypatch.setenv("PQS_NUMERIC_PRECISION", "decimal")
        reset_config()
        assert get_config().working_digits == 50
        e = exp_value(SeriesKind.LOWER_E, "1/2", 2, 1, tol=1e-45).value
        big_e = exp_value(SeriesKind.UPPER_E, "-1/2", 2, 1, tol=1e-45).value
        with mpmath.workdps(50):
            assert abs(e * big_e - 1) < mpmath.mpf("1e-40")
