"""Unit tests for the operator word parser"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.models.laurent import Polynomial
from src.models.operators import OperatorExpr
from src.services.normal_ordering import op_pow
from src.services.word_parser import (
    Factor,
    OperatorWord,
    Token,
    WordSyntaxError,
    evaluate_word,
    parse_word,
    tokenize,
)

Q = Polynomial.var("q")


class TestTokenize:
    """Test the lexer"""

    def test_tokens(self):
        """Test generators, numbers and punctuation"""
        tokens = tokenize("(X^12 D)")
        assert [t.typ for t in tokens] == [
            Token.left_paren, Token.generator, Token.caret, Token.number,
            Token.generator, Token.right_paren, Token.eof,
        ]
        assert tokens[3].text == "12"
        assert tokens[4].offset == 6

    def test_byte_offsets(self):
        """Test offsets count UTF-8 bytes"""
        with pytest.raises(WordSyntaxError) as info:
            tokenize("X\u00a0Y")
        assert info.value.offset == 3


class TestParse:
    """Test the grammar"""

    def test_simple_word(self):
        """Test factors without spaces"""
        word = parse_word("XD")
        assert word.factors == (Factor("X"), Factor("D"))
        assert str(word) == "X D"

    def test_nested_group(self):
        """Test a parenthesized power prints back unchanged"""
        assert str(parse_word("(X^2 D)^3")) == "(X^2 D)^3"
        assert str(parse_word(" ( (X D)^2 N ) ")) == "((X D)^2 N)"

    def test_negative_x_power(self):
        """Test X^-1 is allowed"""
        assert parse_word("X^-1").factors == (Factor("X", -1),)

    @pytest.mark.parametrize(
        "text,offset,fragment",
        [
            ("", 0, "Expected a factor"),
            ("D Y", 2, "Unexpected character"),
            ("(X D", 4, "Unexpected"),
            ("X)", 1, "Unexpected"),
            ("X^", 2, "Expected an exponent"),
            ("D^-1", 0, "Negative exponent on D"),
            ("(X D)^-2", 0, "Negative exponent on a group"),
        ],
    )
    def test_syntax_errors(self, text, offset, fragment):
        """Test error offsets and messages"""
        with pytest.raises(WordSyntaxError, match=fragment) as info:
            parse_word(text)
        assert info.value.offset == offset

    def test_expected_set(self):
        """Test the error lists what would have been accepted"""
        with pytest.raises(WordSyntaxError) as info:
            parse_word("X^")
        assert info.value.expected == {Token.number, Token.minus}


class TestEvaluate:
    """Test normal-ordered values of words"""

    def test_commutation(self):
        """Test D X = q X D + N"""
        expected = OperatorExpr.term(x=1, d=1, coeff=Q) + OperatorExpr.term(n=1)
        assert evaluate_word(parse_word("D X")) == expected

    def test_inverse_cancels(self):
        """Test X^-1 X = 1"""
        assert evaluate_word(parse_word("X^-1 X")) == OperatorExpr.identity()

    def test_group_power(self):
        """Test (X^2 D)^3 equals the engine power"""
        expected = op_pow(OperatorExpr.term(x=2, d=1), 3)
        assert evaluate_word(parse_word("(X^2 D)^3")) == expected

    def test_zero_power(self):
        """Test D^0 = 1"""
        assert evaluate_word(parse_word("D^0 X")) == OperatorExpr.term(x=1)


generator_factors = st.one_of(
    st.builds(Factor, st.just("X"), st.integers(-3, 3)),
    st.builds(Factor, st.sampled_from(["D", "N"]), st.integers(0, 3)),
)


def group_factors(children):
    return st.builds(
        lambda factors, exponent: Factor(OperatorWord(tuple(factors)), exponent),
        st.lists(children, min_size=1, max_size=3),
        st.integers(0, 3),
    )


operator_words = st.lists(
    st.recursive(generator_factors, group_factors, max_leaves=8), min_size=1, max_size=4
).map(lambda factors: OperatorWord(tuple(factors)))


class TestRoundTrip:
    """Test printing and re-parsing"""

    @settings(max_examples=100, deadline=None)
    @given(operator_words)
    def test_print_then_parse(self, word):
        """Test parse_word(str(w)) rebuilds the same tree"""
        assert parse_word(str(word)) == word
