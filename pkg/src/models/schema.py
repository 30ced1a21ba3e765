"""Document schema - JSON shapes emitted by the CLI and stored in the table cache

Polynomials serialize as lists of term records in canonical (graded
lexicographic, largest first) order, so output is deterministic.
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from .enums import IdentityName, SpiveyForm, SpiveyMode, StirlingKind, Verdict, VerifyMode
from .laurent import Polynomial, RationalFunction
from .operators import NormalTerm, OperatorExpr
from .series import TruncatedSeries


class PolynomialRecord(BaseModel):
    """One term c * p^p q^q h^h x^x with c = num/den"""

    p: int = 0
    q: int = 0
    h: int = 0
    x: int = 0
    num: str = Field(..., description="Numerator as a decimal integer string")
    den: str = Field("1", description="Positive denominator as a decimal integer string")

    @field_validator("den")
    @classmethod
    def validate_den(cls, v: str) -> str:
        """Denominators are positive"""
        if int(v) <= 0:
            raise ValueError(f"Denominator must be positive, got {v}")
        return v


def polynomial_to_records(poly: Polynomial) -> List[PolynomialRecord]:
    return [
        PolynomialRecord(
            p=mono[0], q=mono[1], h=mono[2], x=mono[3],
            num=str(c.numerator), den=str(c.denominator),
        )
        for mono, c in poly.sorted_terms()
    ]


def polynomial_from_records(records: List[PolynomialRecord]) -> Polynomial:
    return Polynomial({
        (r.p, r.q, r.h, r.x): Fraction(int(r.num), int(r.den)) for r in records
    })


class RationalFunctionDocument(BaseModel):
    """num / den, both as polynomial records"""

    num: List[PolynomialRecord]
    den: List[PolynomialRecord]

    @classmethod
    def from_value(cls, value: Union[RationalFunction, Polynomial]) -> "RationalFunctionDocument":
        if isinstance(value, Polynomial):
            value = RationalFunction(value)
        return cls(num=polynomial_to_records(value.num), den=polynomial_to_records(value.den))

    def to_value(self) -> RationalFunction:
        return RationalFunction(polynomial_from_records(self.num), polynomial_from_records(self.den))


class SeriesDocument(BaseModel):
    """Truncated power series in x"""

    order: int = Field(..., ge=0)
    coeffs: List[RationalFunctionDocument]

    @classmethod
    def from_series(cls, series: TruncatedSeries) -> "SeriesDocument":
        return cls(order=series.order, coeffs=[RationalFunctionDocument.from_value(c) for c in series])


class OperatorTermRecord(BaseModel):
    """Normal term X^x N^N D^D with its coefficient"""

    model_config = ConfigDict(populate_by_name=True)

    x: int
    n: int = Field(..., alias="N", ge=0)
    d: int = Field(..., alias="D", ge=0)
    coeff: List[PolynomialRecord]


class OperatorExprDocument(BaseModel):
    """Normal-ordered expansion of an operator word"""

    word: Optional[str] = Field(None, description="Input word, when parsed from text")
    terms: List[OperatorTermRecord]

    @classmethod
    def from_expr(cls, expr: OperatorExpr, word: Optional[str] = None) -> "OperatorExprDocument":
        return cls(
            word=word,
            terms=[
                OperatorTermRecord(x=t.x, n=t.n, d=t.d, coeff=polynomial_to_records(c))
                for t, c in expr.sorted_terms()
            ],
        )

    def to_expr(self) -> OperatorExpr:
        return OperatorExpr({
            NormalTerm(t.x, t.n, t.d): polynomial_from_records(t.coeff) for t in self.terms
        })


class StirlingVariant(BaseModel):
    """Which Stirling family a table holds, with its parameters

    h=None keeps h as the ring variable; otherwise h is a rational string.
    """

    model_config = ConfigDict(frozen=True)

    kind: StirlingKind
    s: int = 0
    h: Optional[str] = None
    m: Optional[int] = None
    tilde: bool = False

    @field_validator("h")
    @classmethod
    def validate_h(cls, v: Optional[str]) -> Optional[str]:
        """h must parse as a rational"""
        if v is None:
            return v
        return str(Fraction(v))

    @model_validator(mode="after")
    def validate_kind_parameters(self) -> "StirlingVariant":
        if self.kind == StirlingKind.TOUCHARD and not self.m:
            raise ValueError("touchard variant needs a nonzero order m")
        if self.kind != StirlingKind.TOUCHARD and self.m is not None:
            raise ValueError("only the touchard variant takes m")
        return self

    @property
    def h_value(self) -> Optional[Fraction]:
        return None if self.h is None else Fraction(self.h)

    def label(self) -> str:
        if self.kind == StirlingKind.GENERAL:
            base = f"general(s={self.s}, h={self.h or 'h'})"
        elif self.kind == StirlingKind.TOUCHARD:
            base = f"touchard(m={self.m})"
        else:
            base = self.kind.value
        return f"{base}~" if self.tilde else base


class StirlingTableDocument(BaseModel):
    """Triangle rows[n][k] for 0 <= k <= n"""

    variant: StirlingVariant
    rows: List[List[List[PolynomialRecord]]]

    @field_validator("rows")
    @classmethod
    def validate_triangle(cls, v: List[List[List[PolynomialRecord]]]) -> List[List[List[PolynomialRecord]]]:
        """Row n holds n + 1 entries"""
        for n, row in enumerate(v):
            if len(row) != n + 1:
                raise ValueError(f"Row {n} has {len(row)} entries, expected {n + 1}")
        return v

    def model_dump_json(self, **kwargs) -> str:
        kwargs.setdefault("indent", 2)
        return super().model_dump_json(**kwargs)


class StirlingCacheDocument(BaseModel):
    """On-disk store for --cache"""

    tables: List[StirlingTableDocument] = Field(default_factory=list)


class PolynomialDocument(BaseModel):
    """A single named polynomial result (Bell, Touchard)"""

    label: str
    params: Dict[str, str] = Field(default_factory=dict)
    value: List[PolynomialRecord]


class NumericResultDocument(BaseModel):
    """A real-valued result from the numeric kernel"""

    label: str
    params: Dict[str, str] = Field(default_factory=dict)
    value: str
    terms_used: int = Field(0, ge=0)


ValueField = Union[str, RationalFunctionDocument]


class SpiveyReport(BaseModel):
    """Both sides of one Spivey relation instance and their difference"""

    identity: str = "spivey"
    form: SpiveyForm
    params: Dict[str, str] = Field(default_factory=dict)
    mode: SpiveyMode
    lhs: Optional[ValueField] = None
    rhs: Optional[ValueField] = None
    residual: Optional[ValueField] = None
    residual_zero: bool = False
    verdict: Verdict
    note: Optional[str] = None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def family(self) -> str:
        """lemma-derived or paper-display"""
        return self.form.family

    @model_validator(mode="after")
    def validate_verdict(self) -> "SpiveyReport":
        """pass exactly when the residual vanishes"""
        if (self.verdict == Verdict.PASS) != self.residual_zero:
            raise ValueError("verdict pass requires a zero residual and vice versa")
        return self


class CheckResult(BaseModel):
    """One sub-check of a verification run"""

    name: str
    params: Dict[str, str] = Field(default_factory=dict)
    verdict: Verdict
    residual: Optional[str] = Field(None, description="Nonzero residual, when the check failed")
    detail: Optional[str] = None


class VerifyRequest(BaseModel):
    """Parameters of a verify command"""

    identity: IdentityName
    mode: VerifyMode = VerifyMode.SYMBOLIC
    seed: int = Field(0, ge=0)
    points: Optional[int] = Field(None, ge=1)
    tol: Optional[float] = Field(None, gt=0)
    order: Optional[int] = Field(None, ge=0)
    max_n: Optional[int] = Field(None, ge=0)
    params: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("identity", mode="before")
    @classmethod
    def resolve_alias(cls, v: Any) -> Any:
        """Short identity names map to their canonical identity"""
        if isinstance(v, str) and not isinstance(v, IdentityName):
            try:
                return IdentityName.resolve(v)
            except ValueError:
                return v
        return v


class VerificationReport(BaseModel):
    """Aggregated result of a verify command; sub-checks never abort the run"""

    identity: IdentityName
    mode: VerifyMode
    seed: int
    checks: List[CheckResult] = Field(default_factory=list)
    spivey: List[SpiveyReport] = Field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        verdicts = [c.verdict for c in self.checks] + [r.verdict for r in self.spivey]
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.DISCREPANCY_DOCUMENTED in verdicts:
            return Verdict.DISCREPANCY_DOCUMENTED
        return Verdict.PASS

    def model_dump_json(self, **kwargs) -> str:
        data = self.model_dump(mode="json", by_alias=True)
        data["verdict"] = self.verdict.value
        return json.dumps(data, indent=kwargs.get("indent", 2))
