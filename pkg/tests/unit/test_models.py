"""Unit tests for Pydantic document models"""

import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from src.models.enums import IdentityName, SpiveyForm, SpiveyMode, StirlingKind, Verdict, VerifyMode
from src.models.laurent import Polynomial, RationalFunction
from src.models.operators import OperatorExpr
from src.models.schema import (
    CheckResult,
    OperatorExprDocument,
    PolynomialRecord,
    RationalFunctionDocument,
    SpiveyReport,
    StirlingTableDocument,
    StirlingVariant,
    VerificationReport,
    VerifyRequest,
    polynomial_from_records,
    polynomial_to_records,
)

P = Polynomial.var("p")
Q = Polynomial.var("q")


class TestPolynomialRecord:
    """Test polynomial term records"""

    def test_records_in_canonical_order(self):
        """Test the largest term comes first"""
        records = polynomial_to_records(Fraction(3, 4) * P * Q ** 3 - Q ** -1)
        assert (records[0].p, records[0].q, records[0].num, records[0].den) == (1, 3, "3", "4")
        assert (records[1].q, records[1].num) == (-1, "-1")

    def test_back_to_polynomial(self):
        """Test records rebuild the same polynomial"""
        poly = Fraction(3, 4) * P * Q ** 3 - Q ** -1
        assert polynomial_from_records(polynomial_to_records(poly)) == poly

    def test_positive_denominator(self):
        """Test den must be positive"""
        with pytest.raises(ValidationError, match="Denominator must be positive"):
            PolynomialRecord(num="1", den="0")


class TestDocuments:
    """Test document validation"""

    def test_triangle_shape(self):
        """Test row n must hold n + 1 entries"""
        with pytest.raises(ValidationError, match="Row 1 has 1 entries"):
            StirlingTableDocument(
                variant=StirlingVariant(kind=StirlingKind.PQ),
                rows=[[[]], [[]]],
            )

    def test_operator_aliases(self):
        """Test N and D keys in the JSON form"""
        document = OperatorExprDocument.from_expr(OperatorExpr.term(x=1, n=1, d=2, coeff=Q), word="X N D^2")
        data = document.model_dump(by_alias=True)
        assert set(data["terms"][0]) == {"x", "N", "D", "coeff"}
        assert document.to_expr() == OperatorExpr.term(x=1, n=1, d=2, coeff=Q)

    def test_rational_function_document(self):
        """Test num / den survive the document"""
        value = RationalFunction(P + 1, P - Q)
        assert RationalFunctionDocument.from_value(value).to_value() == value

    def test_verify_request_bounds(self):
        """Test negative seeds and zero points are refused"""
        with pytest.raises(ValidationError):
            VerifyRequest(identity=IdentityName.SPIVEY, seed=-1)
        with pytest.raises(ValidationError):
            VerifyRequest(identity=IdentityName.SPIVEY, points=0)

    def test_unknown_identity(self):
        """Test identity names are an enumeration"""
        with pytest.raises(ValidationError):
            VerifyRequest(identity="no-such-identity")


class TestReports:
    """Test verdict bookkeeping"""

    def test_pass_requires_zero_residual(self):
        """Test a pass verdict with a nonzero residual is rejected"""
        with pytest.raises(ValidationError, match="zero residual"):
            SpiveyReport(form=SpiveyForm.CORRECTED, mode=SpiveyMode.SYMBOLIC, residual_zero=False,
                         verdict=Verdict.PASS)

    def test_aggregate_verdict(self):
        """Test fail outranks discrepancy, which outranks pass"""
        report = VerificationReport(identity=IdentityName.SPIVEY_AUDIT, mode=VerifyMode.SYMBOLIC, seed=0)
        assert report.verdict is Verdict.PASS

        report.checks.append(CheckResult(name="a", verdict=Verdict.DISCREPANCY_DOCUMENTED))
        assert report.verdict is Verdict.DISCREPANCY_DOCUMENTED

        report.checks.append(CheckResult(name="b", verdict=Verdict.FAIL))
        assert report.verdict is Verdict.FAIL

    def test_json_carries_verdict(self):
        """Test the aggregated verdict is serialized"""
        report = VerificationReport(
            identity=IdentityName.EXP_ID, mode=VerifyMode.SYMBOLIC, seed=3,
            checks=[CheckResult(name="e(x) E(-x) = 1", params={"order": "4"}, verdict=Verdict.PASS)],
        )
        data = json.loads(report.model_dump_json())
        assert data["verdict"] == "pass"
        assert data["identity"] == "exp-id"
        assert data["checks"][0]["params"] == {"order": "4"}


class TestSpiveyForms:
    """Test Spivey form labels and their families"""

    def test_family_labels(self):
        """Test each form reports its family"""
        assert SpiveyForm.CORRECTED.family == "lemma-derived"
        assert SpiveyForm.LITERAL_EXPONENT.family == "paper-display"
        assert SpiveyForm.NO_BRACKET_POWER.family == "paper-display"

    def test_family_label_as_input(self):
        """Test a bare family label picks its displayed form"""
        assert SpiveyForm("lemma-derived") is SpiveyForm.CORRECTED
        assert SpiveyForm("paper-display") is SpiveyForm.NO_BRACKET_POWER
        with pytest.raises(ValueError):
            SpiveyForm("no-such-form")

    def test_select(self):
        """Test a family label selects every form in it"""
        assert SpiveyForm.select("paper-display") == [SpiveyForm.LITERAL_EXPONENT, SpiveyForm.NO_BRACKET_POWER]
        assert SpiveyForm.select("lemma-derived") == [SpiveyForm.CORRECTED]
        assert SpiveyForm.select("literal-exponent") == [SpiveyForm.LITERAL_EXPONENT]
        with pytest.raises(ValueError, match="Unknown Spivey form"):
            SpiveyForm.select("bogus")

    def test_report_json_carries_family(self):
        """Test the family is serialized next to the form"""
        report = SpiveyReport(form=SpiveyForm.LITERAL_EXPONENT, mode=SpiveyMode.SYMBOLIC,
                              residual_zero=True, verdict=Verdict.PASS)
        data = json.loads(report.model_dump_json())
        assert data["form"] == "literal-exponent"
        assert data["family"] == "paper-display"


class TestIdentityAliases:
    """Test short identity names"""

    @pytest.mark.parametrize("alias, identity", [
        ("eq5", IdentityName.ABSTRACT_COMMUTATOR),
        ("mainlem1", IdentityName.SHIFT_BINOMIAL),
        ("prop21-oracle", IdentityName.TOUCHARD_ORACLE),
        ("recst-oracle", IdentityName.GENERAL_ORACLE),
        ("corollary-h", IdentityName.H_HOMOGENEITY),
        ("spivey-m1", IdentityName.SPIVEY_PQ),
        ("mainthm-audit", IdentityName.SPIVEY_AUDIT),
    ])
    def test_alias_resolves(self, alias, identity):
        """Test each alias maps to its canonical identity"""
        assert IdentityName.resolve(alias) is identity
        assert VerifyRequest(identity=alias).identity is identity

    def test_canonical_names_unchanged(self):
        """Test canonical values resolve to themselves"""
        assert IdentityName.resolve("spivey") is IdentityName.SPIVEY
        with pytest.raises(ValueError):
            IdentityName.resolve("eq6")
