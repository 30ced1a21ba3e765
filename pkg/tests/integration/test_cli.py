"""Integration tests for the command-line entry point"""

import json
import random

import pytest

import main
from src.models.operators import OperatorExpr
from src.models.schema import OperatorExprDocument
from src.services.normal_ordering import generator, op_mul
from src.services.numeric_series import ConvergenceError
from src.services.stirling_service import StirlingService


def run(capsys, *argv):
    code = main.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    """Test each subcommand end to end"""

    def test_normal_order(self, capsys):
        """Test D X normal-orders to q X D + N"""
        code, out, _ = run(capsys, "normal-order", "D X")
        assert code == 0
        data = json.loads(out)
        assert data["word"] == "D X"
        assert {(t["x"], t["N"], t["D"]) for t in data["terms"]} == {(1, 0, 1), (0, 1, 0)}

    def test_stirling_latex(self, capsys):
        """Test a LaTeX triangle"""
        code, out, _ = run(capsys, "--format", "latex", "stirling", "--variant", "general", "--s", "1",
                           "--max-n", "3")
        assert code == 0
        assert r"\begin{tabular}{r|cccc}" in out

    def test_stirling_csv(self, capsys):
        """Test classical Stirling numbers as CSV"""
        code, out, _ = run(capsys, "--format", "csv", "stirling", "--variant", "classical", "--max-n", "4")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,k,exact,value"
        assert [line.split(",")[2] for line in lines[-5:]] == ["0", "1", "7", "6", "1"]

    def test_bell_at_point(self, capsys):
        """Test the classical Bell number B_5 = 52"""
        code, out, _ = run(capsys, "bell", "--variant", "classical", "--n", "5", "--x", "1")
        assert code == 0
        record = json.loads(out)["value"][0]
        assert (record["num"], record["den"]) == ("52", "1")

    def test_touchard_symbolic(self, capsys):
        """Test T_2 = x + pq x^2 as records"""
        code, out, _ = run(capsys, "touchard", "--n", "2", "--m", "1")
        assert code == 0
        terms = {(r["p"], r["q"], r["x"]) for r in json.loads(out)["value"]}
        assert terms == {(0, 0, 1), (1, 1, 2)}

    def test_touchard_numeric(self, capsys):
        """Test the numeric kernel at p = 2, q = 1, x = 1/4"""
        code, out, _ = run(capsys, "touchard", "--n", "2", "--m", "1", "--p", "2", "--q", "1", "--x", "1/4")
        assert code == 0
        assert float(json.loads(out)["value"]) == pytest.approx(0.375, rel=1e-12)

    def test_verify_pass(self, capsys):
        """Test a passing identity exits 0"""
        code, out, _ = run(capsys, "verify", "exp-id", "--order", "6")
        assert code == 0
        assert json.loads(out)["verdict"] == "pass"

    def test_cache_written(self, capsys, tmp_path):
        """Test --cache stores the computed tables"""
        path = tmp_path / "tables.json"
        code, _, _ = run(capsys, "--cache", str(path), "stirling", "--max-n", "3")
        assert code == 0
        assert json.loads(path.read_text(encoding="utf-8"))["tables"]


class TestExitCodes:
    """Test the exit-code contract"""

    def test_help(self, capsys):
        """Test --help exits 0"""
        code, out, _ = run(capsys, "--help")
        assert code == 0
        assert "normal-order" in out

    def test_unknown_command(self, capsys):
        """Test argparse errors are usage errors"""
        assert run(capsys, "frobnicate")[0] == 2

    def test_syntax_error(self, capsys):
        """Test a malformed word"""
        code, _, err = run(capsys, "normal-order", "D Y")
        assert code == 2
        assert "offset 2" in err

    def test_partial_point(self, capsys):
        """Test numeric Touchard without x"""
        assert run(capsys, "touchard", "--n", "2", "--m", "1", "--p", "2", "--q", "1")[0] == 2

    def test_bad_param(self, capsys):
        """Test a malformed verify parameter"""
        assert run(capsys, "verify", "touchard-oracle", "--param", "m=one")[0] == 2

    def test_nonconvergence(self, capsys):
        """Test q/p >= 1 exits 3"""
        code, _, err = run(capsys, "dobinski", "--n", "2", "--m", "1", "--p", "1", "--q", "2", "--x", "1/4")
        assert code == 3
        assert "Nonconvergence" in err

    def test_discrepancy_exits_one(self, capsys):
        """Test documented discrepancies exit 1 unless --lenient"""
        assert run(capsys, "verify", "touchard-recurrence", "--max-n", "1", "--order", "6")[0] == 1
        assert run(capsys, "--lenient", "verify", "touchard-recurrence", "--max-n", "1", "--order", "6")[0] == 0

    def test_nonconvergence_from_service(self, capsys, mocker):
        """Test a ConvergenceError raised inside the service maps to exit 3"""
        mocker.patch("main.TouchardService.dobinski", side_effect=ConvergenceError("no tail"))
        code, _, err = run(capsys, "dobinski", "--n", "2", "--m", "1", "--p", "1", "--q", "0.5", "--x", "1")
        assert code == 3
        assert "no tail" in err


class TestNumericFlags:
    """Test --p and --q are not taken for prefixes of global options"""

    def test_touchard_point(self, capsys):
        """Test numeric Touchard T_2 = x + pq x^2 at p = 1, q = 1/2, x = 1"""
        code, out, err = run(capsys, "touchard", "--n", "2", "--m", "1", "--p", "1", "--q", "0.5", "--x", "1")
        assert code == 0, err
        assert float(json.loads(out)["value"]) == pytest.approx(1.5, rel=1e-12)

    def test_dobinski_point(self, capsys):
        """Test the Dobinski quotient for n = 1 is x"""
        code, out, err = run(capsys, "dobinski", "--n", "1", "--m", "1", "--p", "1", "--q", "0.5", "--x", "0.5")
        assert code == 0, err
        assert float(json.loads(out)["value"]) == pytest.approx(0.5, rel=1e-12)

    def test_abbreviation_rejected(self, capsys):
        """Test a prefix of a global option is not expanded"""
        assert run(capsys, "--form", "csv", "stirling", "--max-n", "2")[0] == 2


class TestIdentityAliases:
    """Test short identity names"""

    @pytest.mark.parametrize(
        "alias,identity,expected",
        [
            ("eq5", "abstract-commutator", 0),
            ("mainlem1", "shift-binomial", 0),
            ("prop21-oracle", "touchard-oracle", 0),
            ("recst-oracle", "general-oracle", 0),
            ("corollary-h", "h-homogeneity", 0),
            ("spivey-m1", "spivey-pq", 0),
            ("mainthm-audit", "spivey-audit", 1),
        ],
    )
    def test_alias_runs(self, capsys, alias, identity, expected):
        """Test each alias resolves to its identity"""
        code, out, err = run(capsys, "verify", alias, "--max-n", "1")
        assert code == expected, err
        assert json.loads(out)["identity"] == identity


class TestServicePatching:
    """Test the CLI drives the shared Stirling service"""

    def test_cache_uses_service(self, capsys, tmp_path, mocker):
        """Test --cache loads into and saves from the shared service"""
        service = StirlingService()
        mocker.patch("main.get_stirling_service", return_value=service)
        load = mocker.spy(service, "load_cache")
        save = mocker.spy(service, "save_cache")
        path = str(tmp_path / "tables.json")

        code, _, _ = run(capsys, "--cache", path, "stirling", "--max-n", "2")
        assert code == 0
        load.assert_called_once_with(path)
        save.assert_called_once_with(path)


class TestNormalOrderProperty:
    """Test normal-order against the engine on random words"""

    @staticmethod
    def random_word(rng):
        factors = []
        for _ in range(rng.randint(1, 5)):
            letter = rng.choice("XDN")
            exponent = rng.randint(-2, 2) if letter == "X" else rng.randint(0, 2)
            factors.append((letter, exponent))
        return factors

    def test_matches_engine_product(self, capsys):
        """Test 100 seeded words of length at most 5"""
        rng = random.Random(2024)
        for _ in range(100):
            factors = self.random_word(rng)
            text = " ".join(f"{letter}^{exponent}" for letter, exponent in factors)
            code, out, err = run(capsys, "normal-order", text)
            assert code == 0, err

            expected = OperatorExpr.identity()
            for letter, exponent in factors:
                expected = op_mul(expected, generator(letter, exponent))
            assert OperatorExprDocument.model_validate_json(out).to_expr() == expected, text
