"""Unit tests for seeded rational sample points"""

from fractions import Fraction

import pytest

from src.utils.sampling import point_count, sample_points


class TestSamplePoints:
    """Test sample_points"""

    def test_deterministic(self):
        """Test the same seed gives the same points"""
        assert sample_points(7, 5) == sample_points(7, 5)

    def test_seed_changes_points(self):
        """Test different seeds draw different points"""
        assert sample_points(1, 5) != sample_points(2, 5)

    def test_points_are_admissible(self):
        """Test positivity, height, distinctness and p != q"""
        points = sample_points(3, 20, height=5)
        keys = {tuple(pt[v] for v in ("p", "q", "x")) for pt in points}
        assert len(keys) == 20
        for pt in points:
            assert pt["p"] != pt["q"]
            for value in pt.values():
                assert value > 0
                assert value.numerator <= 5 and value.denominator <= 5

    def test_accept_predicate(self):
        """Test extra rejection"""
        points = sample_points(0, 6, accept=lambda pt: pt["x"] < 1)
        assert all(pt["x"] < 1 for pt in points)

    def test_custom_variables(self):
        """Test drawing only p and q"""
        points = sample_points(0, 3, variables=("p", "q"))
        assert all(set(pt) == {"p", "q"} for pt in points)
        assert all(isinstance(v, Fraction) for pt in points for v in pt.values())

    def test_impossible_request(self):
        """Test an unsatisfiable predicate fails"""
        with pytest.raises(ValueError, match="admissible"):
            sample_points(0, 2, accept=lambda pt: False)


class TestPointCount:
    """Test point_count"""

    def test_floor(self):
        """Test the configured minimum applies to low degree"""
        assert point_count(1) == 5

    def test_degree_bound(self):
        """Test degree + 1 points for high degree"""
        assert point_count(9) == 10
        assert point_count(2, requested=8) == 8

    def test_request_never_lowers_count(self):
        """Test a small request keeps the degree and minimum floors"""
        assert point_count(2, requested=2) == 5
        assert point_count(9, requested=3) == 10
