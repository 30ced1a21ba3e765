"""Stirling service

Memoized Stirling triangles for every supported variant:

    general(s, h)  S(n+1,k) = p^{n-k+1} q^{s(n-k+1)+k-1} S(n,k-1) + h [s(n-k)+k] S(n,k)
    touchard(m)    S(n+1,k) = p^{n-k+1} q^{(m-1)n+k-1} S(n,k-1) + [(m-1)(n-k)+mk] S(n,k)
    pq             general with s = 0, h = 1
    q, classical   pq specialized at p = 1, resp. p = q = 1

with S(0,0) = 1. Rows are immutable once built; tables grow on demand.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from pydantic import ValidationError

from ..models.enums import StirlingKind
from ..models.laurent import Polynomial
from ..models.schema import (
    StirlingCacheDocument,
    StirlingTableDocument,
    StirlingVariant,
    polynomial_from_records,
    polynomial_to_records,
)
from ..utils.config import get_config
from ..utils.logger import get_logger
from .pq_functions import pq_number

logger = get_logger(__name__)

H = Polynomial.var("h")
X = Polynomial.var("x")

Row = Tuple[Polynomial, ...]


class StirlingError(Exception):
    """Raised when a Stirling table cannot be built, loaded or saved"""

    pass


class EnumerationLimitError(StirlingError):
    """Raised when brute-force set-partition enumeration exceeds the configured bound"""

    pass


@dataclass(frozen=True)
class StirlingTable:
    """Triangle (n, k) -> coefficient for one variant, rows 0..max_n"""

    variant: StirlingVariant
    rows: Tuple[Row, ...]

    @property
    def max_n(self) -> int:
        return len(self.rows) - 1

    def entry(self, n: int, k: int) -> Polynomial:
        if k < 0 or k > n:
            return Polynomial.zero()
        return self.rows[n][k]

    @property
    def entries(self) -> Dict[Tuple[int, int], Polynomial]:
        return {(n, k): c for n, row in enumerate(self.rows) for k, c in enumerate(row)}

    def to_document(self) -> StirlingTableDocument:
        return StirlingTableDocument(
            variant=self.variant,
            rows=[[polynomial_to_records(c) for c in row] for row in self.rows],
        )

    @classmethod
    def from_document(cls, document: StirlingTableDocument) -> "StirlingTable":
        rows = tuple(tuple(polynomial_from_records(c) for c in row) for row in document.rows)
        return cls(variant=document.variant, rows=rows)


def set_partitions(n: int) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings of length n, one per set partition of {1..n}"""

    def extend(prefix: Tuple[int, ...], blocks: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == n:
            yield prefix
            return
        for b in range(blocks + 1):
            yield from extend(prefix + (b,), max(blocks, b + 1))

    yield from extend((), 0)


def _monomial(p_exp: int, q_exp: int) -> Polynomial:
    return Polynomial({(p_exp, q_exp, 0, 0): 1})


class StirlingService:
    """Build, memoize and persist Stirling tables

    Tables are keyed by StirlingVariant; asking for a larger max_n extends
    the stored rows instead of recomputing them.
    """

    def __init__(self):
        self._rows: Dict[StirlingVariant, List[Row]] = {}
        self._q_rows: List[Row] = []
        self._lang_rows: Dict[int, List[Tuple[Fraction, ...]]] = {}

    # ------------------------------------------------------------------ tables

    def table(self, variant: StirlingVariant, max_n: int) -> StirlingTable:
        """Triangle rows 0..max_n for a variant

        Args:
            variant: Stirling family and parameters
            max_n: Largest row index

        Returns:
            Immutable StirlingTable
        """
        if max_n < 0:
            raise ValueError(f"max_n must be >= 0, got {max_n}")
        rows = self._extend(variant, max_n)
        return StirlingTable(variant=variant, rows=tuple(rows[: max_n + 1]))

    def entry(self, variant: StirlingVariant, n: int, k: int) -> Polynomial:
        if k < 0 or k > n:
            return Polynomial.zero()
        return self._extend(variant, n)[n][k]

    def _extend(self, variant: StirlingVariant, max_n: int) -> List[Row]:
        rows = self._rows.setdefault(variant, [])
        if len(rows) > max_n:
            return rows

        start = len(rows)
        if variant.tilde:
            base = self._extend(variant.model_copy(update={"tilde": False}), max_n)
            for n in range(start, max_n + 1):
                rows.append(tuple(c.shift((comb(k, 2), 0, 0, 0)) for k, c in enumerate(base[n])))
        elif variant.kind in (StirlingKind.Q, StirlingKind.CLASSICAL):
            point = {"p": 1} if variant.kind == StirlingKind.Q else {"p": 1, "q": 1}
            base = self._extend(StirlingVariant(kind=StirlingKind.PQ), max_n)
            for n in range(start, max_n + 1):
                rows.append(tuple(c.specialize(point) for c in base[n]))
        else:
            if not rows:
                rows.append((Polynomial.one(),))
            for n in range(len(rows) - 1, max_n):
                rows.append(self._next_row(variant, rows[n], n))

        logger.debug("Stirling table extended", variant=variant.label(), max_n=max_n)
        return rows

    def _next_row(self, variant: StirlingVariant, row: Row, n: int) -> Row:
        """Row n+1 from row n by the two-term recurrence"""
        if variant.kind == StirlingKind.TOUCHARD:
            m = variant.m or 0
            h = Polynomial.one()
        else:
            s = variant.s if variant.kind == StirlingKind.GENERAL else 0
            if variant.kind == StirlingKind.PQ:
                h = Polynomial.one()
            elif variant.h_value is None:
                h = H
            else:
                h = Polynomial.constant(variant.h_value)

        nxt = []
        for k in range(n + 2):
            if variant.kind == StirlingKind.TOUCHARD:
                q_exp = (m - 1) * n + k - 1
                bracket = (m - 1) * (n - k) + m * k
            else:
                q_exp = s * (n - k + 1) + k - 1
                bracket = s * (n - k) + k
            total = Polynomial.zero()
            if k >= 1:
                total = total + row[k - 1] * _monomial(n - k + 1, q_exp)
            if k <= n and not row[k].is_zero():
                total = total + h * pq_number(bracket) * row[k]
            nxt.append(total)
        return tuple(nxt)

    # ------------------------------------------------------------------ named families

    def general(self, n: int, k: int, s: int, h: Union[Fraction, int, None] = None) -> Polynomial:
        """S_{s;h}(n,k|p,q); h=None keeps h symbolic"""
        variant = StirlingVariant(kind=StirlingKind.GENERAL, s=s, h=None if h is None else str(Fraction(h)))
        return self.entry(variant, n, k)

    def touchard(self, n: int, k: int, m: int) -> Polynomial:
        """Order-m Stirling number, the normal-ordering coefficient of (X^m D)^n"""
        return self.entry(StirlingVariant(kind=StirlingKind.TOUCHARD, m=m), n, k)

    def bell(self, n: int, variant: StirlingVariant, x: Union[Fraction, int, None] = None) -> Polynomial:
        """Row generating polynomial sum_k S(n,k) x^k; x=None keeps x symbolic"""
        base = X if x is None else Polynomial.constant(x)
        total = Polynomial.zero()
        power = Polynomial.one()
        for k in range(n + 1):
            total = total + self.entry(variant, n, k) * power
            power = power * base
        return total

    def classical_oracle(self, n: int) -> Dict[int, int]:
        """S(n,k) counted by enumerating set partitions

        Raises:
            EnumerationLimitError: If n exceeds Config.enumeration_limit
        """
        limit = get_config().enumeration_limit
        if n > limit:
            raise EnumerationLimitError(f"Set-partition enumeration is limited to n <= {limit}, got {n}")
        counts: Dict[int, int] = {}
        for rgs in set_partitions(n):
            blocks = max(rgs) + 1 if rgs else 0
            counts[blocks] = counts.get(blocks, 0) + 1
        return dict(sorted(counts.items()))

    def q_stirling(self, n: int, k: int) -> Polynomial:
        """S_q(n,k) = q^{k-1} S_q(n-1,k-1) + [k]_q S_q(n-1,k), built independently of the pq table"""
        if k < 0 or k > n:
            return Polynomial.zero()
        rows = self._q_rows
        if not rows:
            rows.append((Polynomial.one(),))
        while len(rows) <= n:
            prev = rows[-1]
            size = len(prev)
            nxt = []
            for j in range(size + 1):
                total = Polynomial.zero()
                if j >= 1:
                    total = total + prev[j - 1] * Polynomial.var("q", j - 1)
                if j < size:
                    total = total + pq_number(j).specialize({"p": 1}) * prev[j]
                nxt.append(total)
            rows.append(tuple(nxt))
        return rows[n][k]

    def lang_number(self, n: int, k: int, m: int) -> Fraction:
        """p = q = 1 limit S_{(m-1)/m; m}(n,k|1) from the rational-s classical recurrence"""
        if m == 0:
            raise ValueError("Lang numbers need a nonzero order m")
        if k < 0 or k > n:
            return Fraction(0)
        s = Fraction(m - 1, m)
        rows = self._lang_rows.setdefault(m, [(Fraction(1),)])
        while len(rows) <= n:
            prev = rows[-1]
            i = len(prev) - 1
            nxt = []
            for j in range(i + 2):
                total = Fraction(0)
                if j >= 1:
                    total += prev[j - 1]
                if j <= i:
                    total += m * (s * (i - j) + j) * prev[j]
                nxt.append(total)
            rows.append(tuple(nxt))
        return rows[n][k]

    # ------------------------------------------------------------------ cache

    def load_cache(self, path: Union[str, Path]) -> int:
        """Merge tables stored at path into memory; a missing file is an empty cache

        Returns:
            Number of tables loaded

        Raises:
            StirlingError: If the file cannot be read or parsed
        """
        path = Path(path)
        if not path.exists():
            return 0
        try:
            document = StirlingCacheDocument.model_validate_json(path.read_text(encoding="utf-8"))
        except (OSError, ValidationError, ValueError) as e:
            raise StirlingError(f"Cannot load Stirling cache {path}: {e}") from e

        for stored in document.tables:
            table = StirlingTable.from_document(stored)
            current = self._rows.get(table.variant, [])
            if len(table.rows) > len(current):
                self._rows[table.variant] = list(table.rows)
        logger.info("Stirling cache loaded", path=str(path), tables=len(document.tables))
        return len(document.tables)

    def save_cache(self, path: Union[str, Path]) -> None:
        """Write every memoized table to path as JSON

        Raises:
            StirlingError: If the file cannot be written
        """
        path = Path(path)
        document = StirlingCacheDocument(tables=[
            StirlingTable(variant=v, rows=tuple(rows)).to_document()
            for v, rows in self._rows.items() if rows
        ])
        try:
            path.write_text(document.model_dump_json(indent=2), encoding="utf-8")
        except OSError as e:
            raise StirlingError(f"Cannot save Stirling cache {path}: {e}") from e
        logger.info("Stirling cache saved", path=str(path), tables=len(document.tables))


# Global service instance
_service: Optional[StirlingService] = None


def get_stirling_service() -> StirlingService:
    """Get or create the shared StirlingService"""
    global _service
    if _service is None:
        _service = StirlingService()
    return _service


def stirling_general(n: int, k: int, s: int, h: Union[Fraction, int, None] = None) -> Polynomial:
    return get_stirling_service().general(n, k, s, h)


def stirling_touchard(n: int, k: int, m: int) -> Polynomial:
    return get_stirling_service().touchard(n, k, m)


def bell(n: int, variant: StirlingVariant, x: Union[Fraction, int, None] = None) -> Polynomial:
    return get_stirling_service().bell(n, variant, x)
