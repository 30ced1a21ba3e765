"""Enumerations for variants, modes and verdicts"""

from enum import Enum
from typing import Dict, List, Optional

# Spivey form families
LEMMA_DERIVED = "lemma-derived"
PAPER_DISPLAY = "paper-display"


class StirlingKind(str, Enum):
    """Family of Stirling numbers a table is built from"""
    GENERAL = "general"
    TOUCHARD = "touchard"
    PQ = "pq"
    Q = "q"
    CLASSICAL = "classical"


class SeriesKind(str, Enum):
    """Deformed exponential: lower e (p-weights) or upper E (q-weights)"""
    LOWER_E = "lower_e"
    UPPER_E = "upper_E"


class SpiveyForm(str, Enum):
    """Which right-hand side of the Spivey relation is evaluated

    corrected: bracket power kept, p-exponent (m-1)(C(n,2) - C(k,2))
    literal-exponent: bracket power kept, p-exponent (m-1)((n-k)(1+k) + kl)
    no-bracket-power: literal exponent without the [s_j]^{n-k} factor

    The first belongs to the lemma-derived family, the other two to the
    paper-display family; family labels are accepted wherever a form is.
    """
    CORRECTED = "corrected"
    LITERAL_EXPONENT = "literal-exponent"
    NO_BRACKET_POWER = "no-bracket-power"

    @property
    def family(self) -> str:
        return LEMMA_DERIVED if self is SpiveyForm.CORRECTED else PAPER_DISPLAY

    @classmethod
    def _missing_(cls, value: object) -> Optional["SpiveyForm"]:
        # a bare family label picks its displayed member
        return {LEMMA_DERIVED: cls.CORRECTED, PAPER_DISPLAY: cls.NO_BRACKET_POWER}.get(str(value))

    @classmethod
    def select(cls, label: str) -> List["SpiveyForm"]:
        """Forms named by a form value or a family label

        Raises:
            ValueError: If the label names neither
        """
        forms = [form for form in cls if label in (form.value, form.family)]
        if not forms:
            raise ValueError(f"Unknown Spivey form '{label}'")
        return forms


class SpiveyMode(str, Enum):
    """How the two sides of the Spivey relation are compared"""
    SYMBOLIC = "symbolic"
    SYMBOLIC_CLASSICAL = "symbolic-classical"
    RATIONAL_POINT = "rational-point"


class Verdict(str, Enum):
    """Outcome of an identity check"""
    PASS = "pass"
    FAIL = "fail"
    DISCREPANCY_DOCUMENTED = "discrepancy-documented"


class VerifyMode(str, Enum):
    """Evaluation strategy requested for a verification run"""
    SYMBOLIC = "symbolic"
    RATIONAL_POINT = "rational-point"
    SERIES = "series"
    NUMERIC = "numeric"


class IdentityName(str, Enum):
    """Named identities understood by the verify command"""
    EXP_ID = "exp-id"
    LEIBNIZ = "leibniz"
    DQ_EXP = "dq-exp"
    BRACKET_LAWS = "bracket-laws"
    ABSTRACT_COMMUTATOR = "abstract-commutator"
    GENERAL_ORACLE = "general-oracle"
    TOUCHARD_ORACLE = "touchard-oracle"
    H_HOMOGENEITY = "h-homogeneity"
    CLASSICAL_ANCHOR = "classical-anchor"
    Q_SPECIALIZATION = "q-specialization"
    LANG_NUMBERS = "lang-numbers"
    SHIFT_BINOMIAL = "shift-binomial"
    TOUCHARD_SERIES = "touchard-series"
    TOUCHARD_RECURRENCE = "touchard-recurrence"
    SPIVEY = "spivey"
    SPIVEY_PQ = "spivey-pq"
    DOBINSKI = "dobinski"
    QH_BINOMIAL_AUDIT = "qh-binomial-audit"
    SPIVEY_AUDIT = "spivey-audit"

    @classmethod
    def resolve(cls, label: str) -> "IdentityName":
        """Identity for a canonical name or one of its short aliases

        Raises:
            ValueError: If the label is unknown
        """
        return cls(IDENTITY_ALIASES.get(label, label))


# Short names accepted by verify
IDENTITY_ALIASES: Dict[str, str] = {
    "eq5": IdentityName.ABSTRACT_COMMUTATOR.value,
    "mainlem1": IdentityName.SHIFT_BINOMIAL.value,
    "prop21-oracle": IdentityName.TOUCHARD_ORACLE.value,
    "recst-oracle": IdentityName.GENERAL_ORACLE.value,
    "corollary-h": IdentityName.H_HOMOGENEITY.value,
    "spivey-m1": IdentityName.SPIVEY_PQ.value,
    "mainthm-audit": IdentityName.SPIVEY_AUDIT.value,
}


class OutputFormat(str, Enum):
    """Document format written to stdout"""
    JSON = "json"
    CSV = "csv"
    LATEX = "latex"
