"""
Exact Laurent polynomials and rational functions over Q.

Every coefficient in the package lives here: polynomials in the variables
p, q, h and x with integer (possibly negative) exponents and Fraction
coefficients. Values are immutable; all operations return new objects.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

VARIABLES: Tuple[str, ...] = ("p", "q", "h", "x")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}

Monomial = Tuple[int, int, int, int]
Scalar = Union[int, Fraction]

UNIT: Monomial = (0, 0, 0, 0)


class NotDivisibleError(ArithmeticError):
    """Raised when exact division leaves a nonzero remainder"""

    pass


class EvaluationError(ValueError):
    """Raised when a value cannot be evaluated at the requested point"""

    pass


def _var_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"Unknown variable '{name}', expected one of {VARIABLES}")


def _add_mono(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def _graded_key(mono: Monomial) -> Tuple[int, Monomial]:
    return (sum(mono), mono)


class Polynomial:
    """
    Multivariate Laurent polynomial in p, q, h, x with rational coefficients.

    Terms are stored as a mapping from exponent tuples (p, q, h, x) to
    Fractions. Zero coefficients are never stored, so two polynomials are
    equal exactly when their term mappings are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != 4:
                    raise ValueError(f"Monomial must have 4 exponents, got {mono}")
                if coeff:
                    key = tuple(int(e) for e in mono)
                    clean[key] = clean.get(key, Fraction(0)) + Fraction(coeff)  # type: ignore[index]
                    if not clean[key]:  # type: ignore[index]
                        del clean[key]  # type: ignore[arg-type]
        self._terms: Dict[Monomial, Fraction] = clean
        self._hash: Optional[int] = None

    @classmethod
    def _wrap(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # terms must already be canonical
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    # ------------------------------------------------------------------ builders

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._wrap({})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls._wrap({UNIT: Fraction(1)})

    @classmethod
    def constant(cls, value: Scalar) -> "Polynomial":
        value = Fraction(value)
        return cls._wrap({UNIT: value} if value else {})

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "Polynomial":
        exps = [0, 0, 0, 0]
        exps[_var_index(name)] = exponent
        return cls._wrap({tuple(exps): Fraction(1)})  # type: ignore[dict-item]

    @classmethod
    def monomial(cls, coeff: Scalar = 1, **exponents: int) -> "Polynomial":
        exps = [0, 0, 0, 0]
        for name, e in exponents.items():
            exps[_var_index(name)] = e
        return cls({tuple(exps): coeff})  # type: ignore[dict-item]

    # ------------------------------------------------------------------ access

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return len(self._terms) == 1 and self._terms.get(UNIT) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and UNIT in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"Polynomial {self} is not constant")
        return self._terms.get(UNIT, Fraction(0))

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for mono in self._terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(VARIABLES[i])
        return tuple(v for v in VARIABLES if v in used)

    def degree(self, name: str) -> int:
        i = _var_index(name)
        return max((m[i] for m in self._terms), default=0)

    def min_degree(self, name: str) -> int:
        i = _var_index(name)
        return min((m[i] for m in self._terms), default=0)

    def total_degree(self) -> int:
        return max((sum(abs(e) for e in m) for m in self._terms), default=0)

    def coefficient(self, name: str, exponent: int) -> "Polynomial":
        """Coefficient of name^exponent, as a polynomial free of that variable."""
        i = _var_index(name)
        picked: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            if mono[i] == exponent:
                stripped = list(mono)
                stripped[i] = 0
                picked[tuple(stripped)] = c  # type: ignore[index]
        return Polynomial._wrap(picked)

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in canonical graded lexicographic order, largest first."""
        return sorted(self._terms.items(), key=lambda item: _graded_key(item[0]), reverse=True)

    # ------------------------------------------------------------------ ring

    def __add__(self, other: object) -> "Polynomial":
        other_poly = coerce_polynomial(other)
        if other_poly is None:
            return NotImplemented
        if not other_poly._terms:
            return self
        result = dict(self._terms)
        for mono, c in other_poly._terms.items():
            value = result.get(mono, 0) + c
            if value:
                result[mono] = value
            else:
                result.pop(mono, None)
        return Polynomial._wrap(result)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> "Polynomial":
        other_poly = coerce_polynomial(other)
        if other_poly is None:
            return NotImplemented
        return self + (-other_poly)

    def __rsub__(self, other: object) -> "Polynomial":
        other_poly = coerce_polynomial(other)
        if other_poly is None:
            return NotImplemented
        return other_poly + (-self)

    def __mul__(self, other: object) -> "Polynomial":
        other_poly = coerce_polynomial(other)
        if other_poly is None:
            return NotImplemented
        if not self._terms or not other_poly._terms:
            return Polynomial._wrap({})
        result: Dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other_poly._terms.items():
                mono = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3])
                value = result.get(mono, 0) + ca * cb
                if value:
                    result[mono] = value
                else:
                    result.pop(mono, None)
        return Polynomial._wrap(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if not self.is_monomial():
                raise ValueError("Only monomials have Laurent inverses")
            ((mono, c),) = self._terms.items()
            return Polynomial._wrap(
                {tuple(e * exponent for e in mono): c ** exponent}  # type: ignore[dict-item]
            )
        if self.is_monomial():
            ((mono, c),) = self._terms.items()
            return Polynomial._wrap(
                {tuple(e * exponent for e in mono): c ** exponent}  # type: ignore[dict-item]
            )
        result = Polynomial.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        other_poly = coerce_polynomial(other)
        if other_poly is None:
            return NotImplemented
        return self._terms == other_poly._terms

    def __hash__(self) -> int:
        if self._hash is None:
            # constants compare equal to ints and Fractions, so they must hash alike
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # ------------------------------------------------------------------ substitution

    def shift(self, mono: Monomial) -> "Polynomial":
        """Multiply by the monomial with exponent tuple `mono`."""
        return Polynomial._wrap({_add_mono(m, mono): c for m, c in self._terms.items()})

    def substitute_power(self, name: str, m: int) -> "Polynomial":
        """Replace name by name^m (a ring homomorphism for m != 0)."""
        if m == 0:
            raise ValueError("substitute_power requires a nonzero power")
        i = _var_index(name)
        result: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            scaled = list(mono)
            scaled[i] *= m
            result[tuple(scaled)] = c  # type: ignore[index]
        return Polynomial._wrap(result)

    def substitute(self, name: str, value: "Polynomial") -> "Polynomial":
        """Replace name by a polynomial; negative powers need a monomial value."""
        i = _var_index(name)
        powers: Dict[int, Polynomial] = {}
        result = Polynomial.zero()
        for mono, c in self._terms.items():
            e = mono[i]
            if e not in powers:
                powers[e] = value ** e
            stripped = list(mono)
            stripped[i] = 0
            result = result + powers[e].shift(tuple(stripped)) * c  # type: ignore[arg-type]
        return result

    def specialize(self, point: Mapping[str, Scalar]) -> "Polynomial":
        """Partially evaluate the assigned variables, keeping the others symbolic."""
        assigned = {_var_index(name): Fraction(v) for name, v in point.items()}
        result: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            value = c
            rest = list(mono)
            for i, v in assigned.items():
                e = mono[i]
                if e:
                    if v == 0 and e < 0:
                        raise EvaluationError(f"Division by zero: {VARIABLES[i]}=0 with exponent {e}")
                    value *= v ** e
                    rest[i] = 0
            key = tuple(rest)
            total = result.get(key, 0) + value  # type: ignore[call-overload]
            if total:
                result[key] = total  # type: ignore[index]
            else:
                result.pop(key, None)  # type: ignore[call-overload]
        return Polynomial._wrap(result)

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.variables() if v not in point]
        if missing:
            raise EvaluationError(f"Unassigned variable(s): {', '.join(missing)}")
        return self.specialize(point).constant_value()

    # ------------------------------------------------------------------ display

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for mono, c in self.sorted_terms():
            factors = []
            for name, e in zip(VARIABLES, mono):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            magnitude = abs(c)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = f"{magnitude}*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            pieces.append(f"{sign} {body}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def coerce_polynomial(value: object) -> Optional[Polynomial]:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Polynomial.constant(value)
    return None


def _min_exponents(poly: Polynomial) -> Monomial:
    monos = list(poly._terms)
    return tuple(min(m[i] for m in monos) for i in range(4))  # type: ignore[return-value]


def div_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """
    Exact quotient a / b in the Laurent ring.

    Both operands are first shifted to ordinary polynomials with no monomial
    content, then divided by graded-lex leading terms.

    Raises:
        ZeroDivisionError: If b is zero
        NotDivisibleError: If b does not divide a
    """
    if b.is_zero():
        raise ZeroDivisionError("div_exact by the zero polynomial")
    if a.is_zero():
        return Polynomial.zero()

    a_low = _min_exponents(a)
    b_low = _min_exponents(b)
    neg_b = tuple(-e for e in b_low)
    divisor = b.shift(neg_b)._terms  # type: ignore[arg-type]
    lead = max(divisor, key=_graded_key)
    lead_coeff = divisor[lead]

    remainder = a.shift(tuple(-e for e in a_low))._terms.copy()  # type: ignore[arg-type]
    quotient: Dict[Monomial, Fraction] = {}
    while remainder:
        top = max(remainder, key=_graded_key)
        if any(top[i] < lead[i] for i in range(4)):
            raise NotDivisibleError(f"{b} does not divide {a}")
        step = (top[0] - lead[0], top[1] - lead[1], top[2] - lead[2], top[3] - lead[3])
        factor = remainder[top] / lead_coeff
        quotient[step] = quotient.get(step, 0) + factor
        for mono, c in divisor.items():
            key = _add_mono(mono, step)
            value = remainder.get(key, 0) - factor * c
            if value:
                remainder[key] = value
            else:
                remainder.pop(key, None)

    offset = tuple(x - y for x, y in zip(a_low, b_low))
    return Polynomial({m: c for m, c in quotient.items()}).shift(offset)  # type: ignore[arg-type]


class RationalFunction:
    """
    Quotient of two Laurent polynomials, reduced only on demand.

    Monomial denominators are folded into the numerator since they are units
    of the Laurent ring. Equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[Polynomial, Scalar], den: Union[Polynomial, Scalar] = 1):
        num_poly = coerce_polynomial(num)
        den_poly = coerce_polynomial(den)
        if num_poly is None or den_poly is None:
            raise TypeError("RationalFunction needs Polynomial or rational parts")
        if den_poly.is_zero():
            raise ZeroDivisionError("RationalFunction with zero denominator")
        if den_poly.is_monomial():
            num_poly = num_poly * den_poly ** -1
            den_poly = Polynomial.one()
        self.num: Polynomial = num_poly
        self.den: Polynomial = den_poly

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(Polynomial.zero())

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(Polynomial.one())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __add__(self, other: object) -> "RationalFunction":
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        if self.den.is_one():
            return RationalFunction(self.num * o.den + o.num, o.den)
        if o.den.is_one():
            return RationalFunction(self.num + o.num * self.den, self.den)
        # keep the larger denominator when one divides the other
        if len(self.den) >= len(o.den):
            try:
                factor = div_exact(self.den, o.den)
                return RationalFunction(self.num + o.num * factor, self.den)
            except NotDivisibleError:
                pass
        else:
            try:
                factor = div_exact(o.den, self.den)
                return RationalFunction(self.num * factor + o.num, o.den)
            except NotDivisibleError:
                pass
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: object) -> "RationalFunction":
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "RationalFunction":
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "RationalFunction":
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RationalFunction.zero()
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RationalFunction":
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("Division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __pow__(self, exponent: int) -> "RationalFunction":
        if exponent < 0:
            return RationalFunction(self.den ** -exponent, self.num ** -exponent)
        return RationalFunction(self.num ** exponent, self.den ** exponent)

    def __eq__(self, other: object) -> bool:
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return rf_equal(self, o)

    __hash__ = None  # type: ignore[assignment]

    def reduced(self) -> "RationalFunction":
        """Return num/den as a polynomial when the division is exact."""
        if self.den.is_one():
            return self
        try:
            return RationalFunction(div_exact(self.num, self.den))
        except NotDivisibleError:
            return self

    def to_polynomial(self) -> Polynomial:
        """
        Raises:
            NotDivisibleError: If the quotient is not a Laurent polynomial
        """
        if self.den.is_one():
            return self.num
        return div_exact(self.num, self.den)

    def substitute(self, name: str, value: Polynomial) -> "RationalFunction":
        return RationalFunction(self.num.substitute(name, value), self.den.substitute(name, value))

    def specialize(self, point: Mapping[str, Scalar]) -> "RationalFunction":
        den = self.den.specialize(point)
        if den.is_zero():
            raise EvaluationError(f"Denominator {self.den} vanishes at {dict(point)}")
        return RationalFunction(self.num.specialize(point), den)

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        den = self.den.evaluate(point)
        if den == 0:
            raise EvaluationError(f"Denominator {self.den} vanishes at {dict(point)}")
        return self.num.evaluate(point) / den

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def _coerce_rf(value: object) -> Optional[RationalFunction]:
    if isinstance(value, RationalFunction):
        return value
    poly = coerce_polynomial(value)
    return RationalFunction(poly) if poly is not None else None


def as_rational_function(value: Union[RationalFunction, Polynomial, Scalar]) -> RationalFunction:
    rf = _coerce_rf(value)
    if rf is None:
        raise TypeError(f"Cannot convert {value!r} to a rational function")
    return rf


def rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    """a == b as rational functions, via a.num * b.den == b.num * a.den."""
    if a.den == b.den:
        return a.num == b.num
    return a.num * b.den == b.num * a.den


def evaluate(value: Union[Polynomial, RationalFunction], point: Mapping[str, Scalar]) -> Fraction:
    return value.evaluate(point)


class ArithKind(str, Enum):
    """Ring operations exposed through arith()"""

    ADD = "add"
    MUL = "mul"
    NEG = "neg"
    POW = "pow"


def arith(kind: Union[ArithKind, str], a: Polynomial, b: Union[Polynomial, int, None] = None) -> Polynomial:
    """Apply a ring operation by name; neg ignores b, pow needs b >= 0."""
    kind = ArithKind(kind)
    if kind is ArithKind.NEG:
        return -a
    if kind is ArithKind.POW:
        if not isinstance(b, int) or b < 0:
            raise ValueError("pow requires a nonnegative integer exponent")
        return a ** b
    other = coerce_polynomial(b)
    if other is None:
        raise TypeError(f"{kind.value} requires a polynomial operand")
    return a + other if kind is ArithKind.ADD else a * other
