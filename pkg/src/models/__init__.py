"""Value types and result documents"""

from .enums import (
    IdentityName,
    OutputFormat,
    SeriesKind,
    SpiveyForm,
    SpiveyMode,
    StirlingKind,
    Verdict,
    VerifyMode,
)
from .laurent import (
    EvaluationError,
    NotDivisibleError,
    Polynomial,
    RationalFunction,
    arith,
    div_exact,
    evaluate,
    rf_equal,
)
from .operators import AbstractExpr, AbstractTerm, NormalTerm, OperatorExpr
from .schema import (
    CheckResult,
    NumericResultDocument,
    OperatorExprDocument,
    PolynomialDocument,
    PolynomialRecord,
    RationalFunctionDocument,
    SeriesDocument,
    SpiveyReport,
    StirlingCacheDocument,
    StirlingTableDocument,
    StirlingVariant,
    VerificationReport,
    VerifyRequest,
)
from .series import TruncatedSeries

__all__ = [
    "IdentityName",
    "OutputFormat",
    "SeriesKind",
    "SpiveyForm",
    "SpiveyMode",
    "StirlingKind",
    "Verdict",
    "VerifyMode",
    "EvaluationError",
    "NotDivisibleError",
    "Polynomial",
    "RationalFunction",
    "arith",
    "div_exact",
    "evaluate",
    "rf_equal",
    "AbstractExpr",
    "AbstractTerm",
    "NormalTerm",
    "OperatorExpr",
    "CheckResult",
    "NumericResultDocument",
    "OperatorExprDocument",
    "PolynomialDocument",
    "PolynomialRecord",
    "RationalFunctionDocument",
    "SeriesDocument",
    "SpiveyReport",
    "StirlingCacheDocument",
    "StirlingTableDocument",
    "StirlingVariant",
    "VerificationReport",
    "VerifyRequest",
    "TruncatedSeries",
]
