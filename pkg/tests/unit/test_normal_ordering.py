"""Unit tests for the normal ordering engine"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.models.laurent import Polynomial
from src.models.operators import AbstractExpr, NormalTerm, OperatorExpr
from src.services.normal_ordering import (
    UnsupportedSymbolicError,
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
from src.services.pq_functions import pq_number
from src.services.stirling_service import StirlingService

P = Polynomial.var("p")
Q = Polynomial.var("q")
H = Polynomial.var("h")
X = Polynomial.var("x")

letters = st.sampled_from(["X", "N", "D"])
words = st.lists(letters, min_size=0, max_size=4)


def word_expr(word):
    expr = OperatorExpr.identity()
    for letter in reversed(word):
        expr = op_mul(generator(letter), expr)
    return expr


class TestGenerators:
    """Test generator construction"""

    def test_known_generators(self):
        """Test X, N and D terms"""
        assert generator("X", 2) == OperatorExpr.term(x=2)
        assert generator("N") == OperatorExpr.term(n=1)
        assert generator("D", 3) == OperatorExpr.term(d=3)

    def test_unknown_generator(self):
        """Test an unknown letter"""
        with pytest.raises(ValueError, match="Unknown generator"):
            generator("Y")

    def test_negative_d_power_rejected(self):
        """Test only X may carry a negative exponent"""
        with pytest.raises(ValueError, match="Negative exponent"):
            OperatorExpr.term(d=-1)


class TestProducts:
    """Test the rewriting rules"""

    def test_d_past_x(self):
        """Test D X = q X D + N"""
        assert op_mul(generator("D"), generator("X")) == OperatorExpr.term(x=1, d=1, coeff=Q) + generator("N")

    def test_n_past_x(self):
        """Test N X = p X N"""
        assert op_mul(generator("N"), generator("X")) == OperatorExpr.term(x=1, n=1, coeff=P)

    def test_d_past_n(self):
        """Test D N = p N D"""
        assert op_mul(generator("D"), generator("N")) == OperatorExpr.term(n=1, d=1, coeff=P)

    def test_xd_squared(self):
        """Test (XD)^2 = X N D + q X^2 D^2"""
        expected = OperatorExpr.term(x=1, n=1, d=1) + OperatorExpr.term(x=2, d=2, coeff=Q)
        assert op_pow(OperatorExpr.term(x=1, d=1), 2) == expected

    def test_d_past_inverse_x(self):
        """Test D X^-1 = q^-1 X^-1 D + [-1] X^-2 N"""
        expected = OperatorExpr.term(x=-1, d=1, coeff=Q ** -1) + OperatorExpr.term(x=-2, n=1, coeff=pq_number(-1))
        assert op_mul(generator("D"), generator("X", -1)) == expected

    def test_power_zero_is_identity(self):
        """Test expr^0 = 1"""
        assert op_pow(generator("D"), 0) == OperatorExpr.identity()

    def test_negative_power(self):
        """Test expr^-1 is rejected"""
        with pytest.raises(ValueError):
            op_pow(generator("D"), -1)

    @settings(max_examples=30, deadline=None)
    @given(words, words, words)
    def test_associative(self, a, b, c):
        """Test (A B) C = A (B C) on random words"""
        ea, eb, ec = word_expr(a), word_expr(b), word_expr(c)
        assert op_mul(op_mul(ea, eb), ec) == op_mul(ea, op_mul(eb, ec))


class TestAction:
    """Test the action on polynomials in x"""

    def test_d_on_power(self):
        """Test D x^3 = [3] x^2"""
        assert apply_to_poly(generator("D"), X ** 3) == pq_number(3) * X ** 2

    def test_n_is_dilation(self):
        """Test N f(x) = f(px)"""
        assert apply_to_poly(generator("N"), X ** 2 + X) == P ** 2 * X ** 2 + P * X

    def test_d_on_constant(self):
        """Test D 1 = 0"""
        assert apply_to_poly(generator("D"), Polynomial.one()).is_zero()

    @settings(max_examples=30, deadline=None)
    @given(words, words, st.lists(st.integers(-2, 2), min_size=1, max_size=4))
    def test_action_respects_products(self, a, b, coeffs):
        """Test (A B) f = A (B f)"""
        f = Polynomial({(0, 0, 0, i): c for i, c in enumerate(coeffs)})
        ea, eb = word_expr(a), word_expr(b)
        assert apply_to_poly(op_mul(ea, eb), f) == apply_to_poly(ea, apply_to_poly(eb, f))


class TestStirlingExtraction:
    """Test Stirling numbers read off (X^m D)^n"""

    @pytest.fixture(scope="class")
    def stirling(self):
        """Fresh Stirling service"""
        return StirlingService()

    def test_second_row(self):
        """Test (XD)^2 gives S(2,1) = 1, S(2,2) = q"""
        row = extract_stirling(2, 1)
        assert row[(2, 0)].is_zero()
        assert row[(2, 1)] == 1
        assert row[(2, 2)] == Q

    def test_order_two(self):
        """Test (X^2 D)^2 = [2] X^3 N D + q^2 X^4 D^2"""
        row = extract_stirling(2, 2)
        assert row[(2, 1)] == P + Q
        assert row[(2, 2)] == Q ** 2

    def test_order_zero_rejected(self):
        """Test m = 0"""
        with pytest.raises(ValueError, match="nonzero"):
            extract_stirling(2, 0)

    @pytest.mark.parametrize("m", [-1, 1, 2, 3])
    def test_matches_recurrence(self, stirling, m):
        """Test the engine agrees with the order-m recurrence"""
        for n in range(5):
            row = extract_stirling(n, m)
            for k in range(n + 1):
                assert row[(n, k)] == stirling.touchard(n, k, m), (n, k)


class TestShiftBinomial:
    """Test the shift-binomial operators"""

    @pytest.mark.parametrize("m,s", [(2, 1), (2, 2), (3, 1)])
    def test_commutation(self, m, s):
        """Test (X^m D)^n X^s = X^s (R + S)^n"""
        r, s_op = shift_binomial_operators(m, s)
        x_s = generator("X", s)
        for n in range(4):
            lhs = op_mul(op_pow(OperatorExpr.term(x=m, d=1), n), x_s)
            rhs = op_mul(x_s, nc_binomial_expand(r, s_op, n))
            assert lhs == rhs

    @pytest.mark.parametrize("m,s", [(2, 1), (3, 2)])
    def test_oracle_first_power(self, m, s):
        """Test (R + S)^1 = q^s R' + [s] S'"""
        coefficients = binomial_coefficients_oracle(m, s, 1)
        assert coefficients == {1: Q ** s, 0: pq_number(s)}


class TestAbstractEngine:
    """Test the V, W, U algebra"""

    @pytest.mark.parametrize("s", [0, 1, 2])
    def test_commutator(self, s):
        """Test U V^k - q^k V^k U = h [k] V^(s+k-1) W"""
        for k in range(1, 5):
            expected = AbstractExpr.term(v=s + k - 1, w=1, coeff=H * pq_number(k))
            assert abstract_commutator(k, s) == expected

    def test_commutator_k_zero(self):
        """Test U commutes with V^0"""
        assert abstract_commutator(0, 1).is_zero()

    @pytest.mark.parametrize("s", [0, 1, 2])
    def test_matches_general_recurrence(self, s):
        """Test (VU)^n coefficients equal the general Stirling numbers"""
        stirling = StirlingService()
        for n in range(5):
            row = abstract_power_vu(n, s)
            for k in range(n + 1):
                assert row[(n, k)] == stirling.general(n, k, s), (n, k)

    def test_concrete_h(self):
        """Test substituting h = 1 in the engine"""
        row = abstract_power_vu(3, 0, 1)
        at_one = {"p": 1, "q": 1}
        assert [row[(3, k)].evaluate(at_one) for k in range(4)] == [0, 1, 3, 1]

    def test_non_integer_shift(self):
        """Test a rational s is refused"""
        with pytest.raises(UnsupportedSymbolicError):
            abstract_power_vu(2, Fraction(1, 2))

    def test_normal_term_order(self):
        """Test sorted_terms puts the highest right power first"""
        expr = op_pow(OperatorExpr.term(x=1, d=1), 2)
        assert [t for t, _ in expr.sorted_terms()] == [NormalTerm(2, 0, 2), NormalTerm(1, 1, 1)]
