"""Operator word parser

Recursive-descent parser and printer for words in X, D, N:

    word   := factor+
    factor := atom ['^' signed-int]
    atom   := 'X' | 'D' | 'N' | '(' word ')'

Whitespace between factors is optional. Only X takes negative exponents.
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

from ..models.operators import OperatorExpr
from ..utils.logger import get_logger
from .normal_ordering import generator, op_mul, op_pow

logger = get_logger(__name__)

GENERATORS = ("X", "D", "N")


class WordSyntaxError(ValueError):
    """Raised when an operator word does not match the grammar"""

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected: FrozenSet[str] = frozenset(expected)
        hint = f" (expected one of {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


class Token:
    """Lexical token with its byte offset in the input"""

    generator = "generator"
    number = "number"
    caret = "^"
    minus = "-"
    left_paren = "("
    right_paren = ")"
    eof = "end of input"

    def __init__(self, typ: str, text: str, offset: int):
        self.typ = typ
        self.text = text
        self.offset = offset

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"({self.typ}, {self.text!r}, {self.offset})"


def tokenize(text: str) -> List[Token]:
    """Split text into tokens; offsets count UTF-8 bytes"""
    tokens: List[Token] = []
    offset = 0
    i = 0
    while i < len(text):
        ch = text[i]
        width = len(ch.encode("utf-8"))
        if ch.isspace():
            pass
        elif ch in GENERATORS:
            tokens.append(Token(Token.generator, ch, offset))
        elif ch in "^-()":
            tokens.append(Token(ch, ch, offset))
        elif ch.isdigit():
            start, start_offset = i, offset
            while i + 1 < len(text) and text[i + 1].isdigit():
                i += 1
                offset += 1
            tokens.append(Token(Token.number, text[start:i + 1], start_offset))
        else:
            raise WordSyntaxError(f"Unexpected character {ch!r}", offset,
                                  {*GENERATORS, Token.left_paren})
        offset += width
        i += 1
    tokens.append(Token(Token.eof, "", offset))
    return tokens


@dataclass(frozen=True)
class Factor:
    """Generator or parenthesized word raised to an integer power"""

    atom: Union[str, "OperatorWord"]
    exponent: int = 1

    def __str__(self) -> str:
        base = self.atom if isinstance(self.atom, str) else f"({self.atom})"
        return base if self.exponent == 1 else f"{base}^{self.exponent}"


@dataclass(frozen=True)
class OperatorWord:
    """Product of factors, read left to right"""

    factors: Tuple[Factor, ...]

    def __str__(self) -> str:
        return " ".join(str(f) for f in self.factors)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def word(self, closing: Optional[str]) -> OperatorWord:
        factors = []
        while self.current.typ in (Token.generator, Token.left_paren):
            factors.append(self.factor())
        if not factors:
            raise WordSyntaxError(f"Expected a factor, found {self.current.typ!r}",
                                  self.current.offset, {*GENERATORS, Token.left_paren})
        if self.current.typ != (closing or Token.eof):
            expected = {*GENERATORS, Token.left_paren, Token.caret, closing or Token.eof}
            raise WordSyntaxError(f"Unexpected {self.current.typ!r}", self.current.offset, expected)
        return OperatorWord(tuple(factors))

    def factor(self) -> Factor:
        token = self.advance()
        atom: Union[str, OperatorWord]
        if token.typ == Token.generator:
            atom = token.text
        else:
            atom = self.word(Token.right_paren)
            self.advance()

        if self.current.typ != Token.caret:
            return Factor(atom)
        self.advance()
        sign = 1
        if self.current.typ == Token.minus:
            sign = -1
            self.advance()
        number = self.current
        if number.typ != Token.number:
            raise WordSyntaxError("Expected an exponent", number.offset, {Token.number, Token.minus})
        self.advance()
        exponent = sign * int(number.text)
        if exponent < 0 and atom != "X":
            name = atom if isinstance(atom, str) else "a group"
            raise WordSyntaxError(f"Negative exponent on {name}", token.offset, {"nonnegative exponent"})
        return Factor(atom, exponent)


def parse_word(text: str) -> OperatorWord:
    """Parse an operator word

    Args:
        text: Input such as "(X^2 D)^3" or "D X"

    Returns:
        OperatorWord parse tree

    Raises:
        WordSyntaxError: On a syntax error or a negative D, N or group exponent
    """
    return _Parser(text).word(None)


def evaluate_word(word: OperatorWord) -> OperatorExpr:
    """Normal-ordered value of a word: the engine product of its factors in order"""
    result = OperatorExpr.identity()
    for factor in word.factors:
        if isinstance(factor.atom, str):
            value = generator(factor.atom, factor.exponent)
        else:
            value = op_pow(evaluate_word(factor.atom), factor.exponent)
        result = op_mul(result, value)
    logger.debug("Word evaluated", word=str(word), terms=len(result))
    return result
