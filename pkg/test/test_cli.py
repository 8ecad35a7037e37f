'''
Validation tests for the opminimal command-line front end
'''
from fractions import Fraction
import json
import pytest

from opminimal.cli import (EXIT_HYPOTHESIS, EXIT_INCONSISTENT, EXIT_INPUT,
                           EXIT_OK, EXIT_USAGE, RunConfig, main)
from opminimal.dgoperad import dump_operad, make_builtin
from .__utils import acyclic_operad


@pytest.fixture(scope="class")
def load_model_file(request, tmp_path_factory):
    path = tmp_path_factory.mktemp("models") / "ass.json"
    assert main(["model", "--operad", "ass", "--max-arity", "4",
                 "--out", str(path), "--format", "json"]) == EXIT_OK
    request.cls.path = path
    request.cls.data = json.loads(path.read_text())
    yield


class TestUsage:
    def test_unknown_flag(self, capsys):
        assert main(["model", "--bogus"]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_missing_command(self):
        assert main([]) == EXIT_USAGE

    def test_unknown_builtin(self):
        assert main(["model", "--operad", "lie"]) == EXIT_USAGE

    def test_source_required(self, capsys):
        assert main(["model"]) == EXIT_USAGE
        assert "--operad" in capsys.readouterr().err
        assert main(["model", "--operad", "ass", "--file", "x.json"]) == \
            EXIT_USAGE

    def test_arity_too_small(self):
        assert main(["model", "--operad", "ass", "--max-arity", "1"]) == \
            EXIT_USAGE

    def test_config_validation(self):
        with pytest.raises(ValueError):
            RunConfig(command="verify")
        with pytest.raises(ValueError):
            RunConfig(command="builtins", format="yaml")
        assert RunConfig(command="builtins").mode == "auto"

    def test_version(self, capsys):
        assert main(["--version"]) == EXIT_OK
        assert "opminimal" in capsys.readouterr().out


class TestModelCommand:
    def test_text_summary(self, capsys):
        assert main(["model", "--operad", "ass", "--max-arity", "2"]) == \
            EXIT_OK
        out = capsys.readouterr().out
        assert "Generators:" in out
        assert "arity 2, degree 0: 2" in out
        assert "quasi_iso" in out

    def test_unitary_summary(self, capsys):
        assert main(["model", "--operad", "ass_plus", "--max-arity", "3",
                     "--mode", "unitary"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "delta_2(e2_1) = 1" in out
        assert "arity 3, degree -1: 6" in out

    def test_hypothesis_violated(self, capsys):
        assert main(["model", "--operad", "com", "--max-arity", "3",
                     "--mode", "unitary"]) == EXIT_HYPOTHESIS
        assert "Hypothesis" in capsys.readouterr().err

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "com.json"
        text = dump_operad(make_builtin("com", 3))
        path.write_text(text[:len(text) // 2])
        assert main(["model", "--file", str(path)]) == EXIT_INPUT

    def test_missing_file(self, tmp_path):
        assert main(["cohomology", "--file",
                     str(tmp_path / "nothing.json")]) == EXIT_INPUT


@pytest.mark.usefixtures("load_model_file")
class TestVerifyCommand:
    def test_fresh_model(self, capsys):
        assert self.data["provenance"]["generator_dims"]["4"] == {"-2": 24}
        assert main(["verify", "--file", str(self.path)]) == EXIT_OK
        assert "d_squared" in capsys.readouterr().out

    def test_json_report(self, capsys):
        assert main(["verify", "--file", str(self.path), "--format",
                     "json"]) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)
        assert {row["check"] for row in rows} >= {"d_squared", "quasi_iso"}
        assert all(row["passed"] for row in rows)

    def test_corrupted_coefficient(self, tmp_path, capsys):
        data = json.loads(json.dumps(self.data))
        label = data["generators"]["4"]["-2"][0]
        term = data["differential"][label][0]
        term["coef"] = str(2 * Fraction(term["coef"]))
        path = tmp_path / "corrupted.json"
        path.write_text(json.dumps(data))
        assert main(["verify", "--file", str(path)]) == EXIT_INCONSISTENT
        assert "d_squared" in capsys.readouterr().err

    def test_malformed_model(self, tmp_path):
        data = json.loads(json.dumps(self.data))
        del data["operad"]
        path = tmp_path / "malformed.json"
        path.write_text(json.dumps(data))
        assert main(["verify", "--file", str(path)]) == EXIT_INPUT


class TestCohomologyCommand:
    def test_com_plus(self, capsys):
        assert main(["cohomology", "--operad", "com_plus", "--max-arity",
                     "3", "--format", "json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert [row["dimension"] for row in data["cohomology"]] == \
            [1, 1, 1, 1]
        assert all(row["holds"] for row in data["hypotheses"])

    def test_non_unitary_mode_ignores_unit_point(self):
        assert main(["cohomology", "--operad", "com"]) == EXIT_OK
        assert main(["cohomology", "--operad", "com", "--mode",
                     "unitary"]) == EXIT_HYPOTHESIS

    def test_acyclic_file(self, tmp_path, capsys):
        path = tmp_path / "acyclic.json"
        dump_operad(acyclic_operad(3), path)
        assert main(["cohomology", "--file", str(path)]) == EXIT_HYPOTHESIS
        assert "Cohomology of acyclic" in capsys.readouterr().out


class TestBuiltinsCommand:
    def test_json(self, capsys):
        assert main(["builtins", "--format", "json"]) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)
        assert [row["name"] for row in rows] == ["ass", "ass_plus", "com",
                                                 "com_plus"]

    def test_text(self, capsys):
        assert main(["builtins"]) == EXIT_OK
        assert "com_plus" in capsys.readouterr().out
