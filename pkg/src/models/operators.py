"""
Normal-ordered operator expressions.

Concrete terms are X^x N^n D^d (multiplication by x, dilation, the (p,q)
difference operator); abstract terms are V^v W^w U^u. Both are linear
combinations with Polynomial coefficients. Multiplication lives in
src.services.normal_ordering.
"""

from __future__ import annotations

from typing import Dict, Generic, Iterator, List, Mapping, NamedTuple, Optional, Tuple, TypeVar, Union

from .laurent import Polynomial, Scalar, coerce_polynomial


class NormalTerm(NamedTuple):
    """X^x N^n D^d"""

    x: int
    n: int
    d: int


class AbstractTerm(NamedTuple):
    """V^v W^w U^u"""

    v: int
    w: int
    u: int


T = TypeVar("T", NormalTerm, AbstractTerm)
CoeffLike = Union[Polynomial, Scalar]


class _Combination(Generic[T]):
    __slots__ = ("_terms",)

    _symbols: Tuple[str, str, str] = ("", "", "")

    def __init__(self, terms: Optional[Mapping[T, CoeffLike]] = None):
        clean: Dict[T, Polynomial] = {}
        for term, coeff in (terms or {}).items():
            if term[1] < 0 or term[2] < 0:
                raise ValueError(f"Negative exponent on the middle or right generator: {term}")
            poly = coerce_polynomial(coeff)
            if poly is None:
                raise TypeError(f"Coefficient {coeff!r} is not a polynomial")
            total = clean.get(term, Polynomial.zero()) + poly
            if total.is_zero():
                clean.pop(term, None)
            else:
                clean[term] = total
        self._terms = clean

    @classmethod
    def _wrap(cls, terms: Dict[T, Polynomial]):
        expr = cls.__new__(cls)
        expr._terms = terms
        return expr

    def items(self) -> Iterator[Tuple[T, Polynomial]]:
        return iter(self._terms.items())

    @property
    def terms(self) -> Dict[T, Polynomial]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[T]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, term: T) -> Polynomial:
        return self._terms.get(term, Polynomial.zero())

    def sorted_terms(self) -> List[Tuple[T, Polynomial]]:
        """Canonical order: highest right-generator power first."""
        return sorted(self._terms.items(), key=lambda item: (item[0][2], item[0][1], item[0][0]), reverse=True)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        result = dict(self._terms)
        for term, coeff in other._terms.items():
            total = result.get(term, Polynomial.zero()) + coeff
            if total.is_zero():
                result.pop(term, None)
            else:
                result[term] = total
        return self._wrap(result)

    def __neg__(self):
        return self._wrap({t: -c for t, c in self._terms.items()})

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: CoeffLike):
        poly = coerce_polynomial(factor)
        if poly is None:
            raise TypeError(f"Cannot scale by {factor!r}")
        if poly.is_zero():
            return self._wrap({})
        return self._wrap({t: c * poly for t, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for term, coeff in self.sorted_terms():
            factors = []
            for symbol, e in zip(self._symbols, term):
                if e == 1:
                    factors.append(symbol)
                elif e:
                    factors.append(f"{symbol}^{e}")
            word = "*".join(factors)
            if coeff.is_one():
                pieces.append(word or "1")
            elif not word:
                pieces.append(f"({coeff})")
            else:
                pieces.append(f"({coeff})*{word}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


class OperatorExpr(_Combination[NormalTerm]):
    """Linear combination of normal terms X^x N^n D^d"""

    _symbols = ("X", "N", "D")

    @classmethod
    def identity(cls) -> "OperatorExpr":
        return cls({NormalTerm(0, 0, 0): 1})

    @classmethod
    def term(cls, x: int = 0, n: int = 0, d: int = 0, coeff: CoeffLike = 1) -> "OperatorExpr":
        return cls({NormalTerm(x, n, d): coeff})


class AbstractExpr(_Combination[AbstractTerm]):
    """Linear combination of abstract terms V^v W^w U^u"""

    _symbols = ("V", "W", "U")

    @classmethod
    def identity(cls) -> "AbstractExpr":
        return cls({AbstractTerm(0, 0, 0): 1})

    @classmethod
    def term(cls, v: int = 0, w: int = 0, u: int = 0, coeff: CoeffLike = 1) -> "AbstractExpr":
        return cls({AbstractTerm(v, w, u): coeff})
