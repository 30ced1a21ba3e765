"""Truncated power series in x with rational-function coefficients"""

from __future__ import annotations

from typing import Iterator, List, Sequence, Tuple, Union

from .laurent import Polynomial, RationalFunction, Scalar, as_rational_function

Coefficient = Union[RationalFunction, Polynomial, Scalar]


class TruncatedSeries:
    """
    Power series sum_{k <= order} c_k x^k.

    Coefficients are free of x. Binary operations truncate at the smaller
    of the two orders, so every stored coefficient is exact.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Sequence[Coefficient]):
        if not coeffs:
            raise ValueError("A truncated series needs at least the constant coefficient")
        self._coeffs: Tuple[RationalFunction, ...] = tuple(as_rational_function(c) for c in coeffs)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([RationalFunction.zero()] * (order + 1))

    @classmethod
    def from_polynomial(cls, poly: Polynomial, order: int) -> "TruncatedSeries":
        """Expand a polynomial in x (nonnegative powers only) to the given order."""
        if poly.min_degree("x") < 0:
            raise ValueError("Series expansion needs nonnegative powers of x")
        return cls([poly.coefficient("x", k) for k in range(order + 1)])

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> Tuple[RationalFunction, ...]:
        return self._coeffs

    def __getitem__(self, k: int) -> RationalFunction:
        return self._coeffs[k]

    def __iter__(self) -> Iterator[RationalFunction]:
        return iter(self._coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"Cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self._coeffs[: order + 1])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self._coeffs)

    def nonzero_indices(self) -> List[int]:
        return [k for k, c in enumerate(self._coeffs) if not c.is_zero()]

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        return TruncatedSeries([self._coeffs[k] + other._coeffs[k] for k in range(order + 1)])

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self._coeffs])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        product: List[RationalFunction] = []
        for k in range(order + 1):
            acc = RationalFunction.zero()
            for i in range(k + 1):
                a = self._coeffs[i]
                b = other._coeffs[k - i]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            product.append(acc)
        return TruncatedSeries(product)

    def scale(self, factor: Coefficient) -> "TruncatedSeries":
        factor = as_rational_function(factor)
        return TruncatedSeries([c * factor for c in self._coeffs])

    def dilate(self, factor: Polynomial) -> "TruncatedSeries":
        """f(x) -> f(factor * x); factor must be free of x."""
        if factor.degree("x") or factor.min_degree("x"):
            raise ValueError("Dilation factor must not contain x")
        power = Polynomial.one()
        dilated = []
        for c in self._coeffs:
            dilated.append(c * power)
            power = power * factor
        return TruncatedSeries(dilated)

    def shift(self, m: int) -> "TruncatedSeries":
        """Multiply by x^m (m >= 0), keeping the order."""
        if m < 0:
            raise ValueError("Series shift needs m >= 0")
        zeros = [RationalFunction.zero()] * m
        return TruncatedSeries((zeros + list(self._coeffs))[: self.order + 1])

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self._coeffs)
        return f"TruncatedSeries(order={self.order}, [{shown}])"
