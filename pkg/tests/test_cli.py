import copy
import json
from importlib import resources

import jsonschema
import pytest

from apcorona.cli import (
    EXIT_ERROR,
    EXIT_NEGATIVE,
    EXIT_OK,
    main,
    parse_basis_value,
    run_command,
)
from apcorona.errors import ConfigError


@pytest.fixture(scope="session")
def schema():
    text = resources.files("apcorona").joinpath(
        "schemas/report.schema.json").read_text()
    return json.loads(text)


def run_checked(argv, schema):
    code, report, fmt = run_command(argv)
    jsonschema.validate(report, schema)
    json.dumps(report)  # must be serializable
    return code, report


class TestBasisValues:
    def test_exact_rational(self):
        assert parse_basis_value("3/2") == 1.5

    def test_sqrt_thunk(self):
        thunk = parse_basis_value("sqrt(2)")
        enc = thunk()
        assert enc.a <= 1.4142135623730951 <= enc.b

    def test_unknown_name_rejected(self):
        with pytest.raises(ConfigError):
            parse_basis_value("__import__('os')")

    def test_root(self):
        enc = parse_basis_value("root(2, 3)")()
        assert enc.a <= 2 ** (1 / 3) <= enc.b


class TestCommands:
    def test_saturate_witness(self, schema):
        code, rep = run_checked(["saturate", "--gens", "2,3"], schema)
        assert code == EXIT_NEGATIVE
        assert rep["result"]["witness"] == "1"

    def test_saturate_saturated(self, schema):
        code, rep = run_checked(["saturate", "--gens", "1"], schema)
        assert code == EXIT_OK
        assert rep["result"]["status"] == "saturated"

    def test_saturate_pell(self, schema):
        code, rep = run_checked(
            ["saturate", "--gens", "1,s", "--basis", "one=1,s=sqrt(2)"],
            schema)
        assert code == EXIT_NEGATIVE
        assert rep["result"]["witness"] in ("-1 + s", "s - 1")

    def test_corona_certify(self, schema):
        code, rep = run_checked(
            ["corona-certify", "--gens", "1", "--f", "e(1)-2*e(0)"], schema)
        assert code == EXIT_OK
        assert rep["result"]["certificate"]["lower_bound"] >= 0.9

    def test_corona_certify_zero(self, schema):
        code, rep = run_checked(
            ["corona-certify", "--gens", "1", "--f", "e(1)"], schema)
        assert code == EXIT_NEGATIVE
        assert rep["result"]["certificate"]["infimum_zero"]

    def test_member_and_refusal(self, schema):
        code, rep = run_checked(["member", "--gens", "2,3", "--freq", "7"],
                                schema)
        assert code == EXIT_OK and rep["result"]["combo"] == {"2": 2, "3": 1}
        code, rep = run_checked(["member", "--gens", "2,3", "--freq", "1"],
                                schema)
        assert code == EXIT_NEGATIVE

    def test_spectrum(self, schema):
        code, rep = run_checked(
            ["spectrum", "--f", "(e(1)+e(s))*(e(1)-e(s))",
             "--basis", "one=1,s=sqrt(2)"], schema)
        assert code == EXIT_OK
        assert rep["result"]["spectrum"] == ["2", "2*s"]

    def test_complete_matrix_file(self, schema, tmp_path):
        path = tmp_path / "A.json"
        path.write_text(json.dumps([["e(1)-2*e(0)"], ["e(1)"]]))
        code, rep = run_checked(
            ["complete", "--gens", "1", "--matrix", f"@{path}",
             "--tol", "1e-12"], schema)
        assert code == EXIT_OK
        assert rep["result"]["det_residual"] <= 1e-12

    def test_verify_roundtrip(self, schema, tmp_path):
        a = tmp_path / "A.json"
        a.write_text(json.dumps([["e(1)-2*e(0)"], ["e(1)"]]))
        code, rep = run_checked(
            ["complete", "--gens", "1", "--matrix", f"@{a}"], schema)
        completed = tmp_path / "B.json"
        completed.write_text(json.dumps(rep["result"]["completed"]))
        code, rep = run_checked(
            ["verify", "--gens", "1", "--matrix", f"@{a}",
             "--completed", f"@{completed}"], schema)
        assert code == EXIT_OK and rep["result"]["passed"]

    def test_verify_detects_bad(self, schema, tmp_path):
        a = tmp_path / "A.json"
        a.write_text(json.dumps([["e(1)-2*e(0)"], ["e(1)"]]))
        bad = tmp_path / "B.json"
        bad.write_text(json.dumps(
            [["e(1)-2*e(0)", "1"], ["e(1)", "1"]]))
        code, rep = run_checked(
            ["verify", "--gens", "1", "--matrix", f"@{a}",
             "--completed", f"@{bad}"], schema)
        assert code == EXIT_NEGATIVE
        assert not rep["result"]["passed"]

    def test_invert(self, schema):
        code, rep = run_checked(
            ["invert", "--gens", "1", "--f", "e(0)-e(1)/2",
             "--tol", "1e-9"], schema)
        assert code == EXIT_OK
        assert rep["result"]["residual_upper"] <= 1e-9

    def test_invert_negative(self, schema):
        code, rep = run_checked(["invert", "--gens", "1", "--f", "e(1)"],
                                schema)
        assert code == EXIT_NEGATIVE
        assert rep["error"]["code"] == "not-invertible"

    def test_log_and_exp(self, schema):
        code, rep = run_checked(
            ["log", "--gens", "1", "--f", "e(1)-2*e(0)", "--tol", "1e-8"],
            schema)
        assert code == EXIT_OK
        assert rep["result"]["verified_residual"] <= 1e-8
        code, rep = run_checked(
            ["exp", "--gens", "1", "--g", "e(1)/4", "--order", "15"], schema)
        assert code == EXIT_OK
        assert rep["result"]["tail_bound"] < 1e-12

    def test_hull_embed_and_reject(self, schema):
        code, rep = run_checked(["hull-test", "--gens", "1", "--z", "0,1"],
                                schema)
        assert code == EXIT_OK
        code, rep = run_checked(
            ["hull-test", "--gens", "1", "--tracked", "2",
             "--assign", "1:0.5;2:0.3"], schema)
        assert code == EXIT_NEGATIVE
        assert rep["result"]["witness"] is not None

    def test_corona_solve(self, schema):
        code, rep = run_checked(
            ["corona-solve", "--gens", "1", "--f", "e(1)-2*e(0)",
             "--f", "e(1)", "--degree-bound", "1"], schema)
        assert code == EXIT_OK
        assert rep["result"]["residual_upper"] <= 1e-9


class TestErrors:
    def test_parse_error_report(self, schema):
        code, rep = run_checked(["spectrum", "--f", "e(1"], schema)
        assert code == EXIT_ERROR
        assert rep["status"] == "error"
        assert rep["error"]["code"] == "parse-error"

    def test_missing_generators(self, schema):
        code, rep = run_checked(["member", "--freq", "3"], schema)
        assert code == EXIT_ERROR
        assert rep["error"]["code"] == "bad-config"

    def test_spectrum_violation_error(self, schema):
        code, rep = run_checked(
            ["corona-certify", "--gens", "2,3", "--f", "e(1)"], schema)
        assert code == EXIT_ERROR
        assert rep["error"]["code"] == "spectrum-violation"


class TestSessionConfig:
    def test_config_file(self, schema, tmp_path):
        cfg = tmp_path / "session.cfg"
        cfg.write_text(
            "# demo config\n"
            "basis = one=1, s=sqrt(2)\n"
            "generators = 1, s\n"
            "tolerance = 1e-8\n"
            "format = json\n"
            "seed = 7\n")
        code, rep = run_checked(["saturate", "--config", str(cfg)], schema)
        assert code == EXIT_NEGATIVE
        assert rep["inputs"]["seed"] == 7

    def test_flags_override_config(self, schema, tmp_path):
        cfg = tmp_path / "session.cfg"
        cfg.write_text("generators = 2,3\n")
        code, rep = run_checked(
            ["saturate", "--config", str(cfg), "--gens", "1"], schema)
        assert code == EXIT_OK

    def test_determinism(self, schema):
        argv = ["corona-certify", "--gens", "1", "--f", "e(1)-2*e(0)",
                "--seed", "3"]
        _, rep1 = run_checked(argv, schema)
        _, rep2 = run_checked(argv, schema)
        for rep in (rep1, rep2):
            rep.pop("wall_time_ms")
        assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)


class TestMain:
    def test_main_prints_json(self, capsys):
        code = main(["saturate", "--gens", "2,3"])
        assert code == EXIT_NEGATIVE
        payload = json.loads(capsys.readouterr().out)
        assert payload["schema"] == "ap-corona/v1"

    def test_main_text_format(self, capsys):
        code = main(["saturate", "--gens", "2,3", "--format", "text"])
        assert code == EXIT_NEGATIVE
        out = capsys.readouterr().out
        assert "status: negative" in out
        assert "witness" in out
