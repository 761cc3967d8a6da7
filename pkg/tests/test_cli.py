import json
from importlib import resources

import jsonschema
import pytest

from classfield import cli


@pytest.fixture(scope="module")
def schema():
    with resources.files("classfield").joinpath("schema.json").open() as fh:
        return json.load(fh)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


def test_classgroup_reference_instance(capsys, schema):
    code, payload = run_json(
        capsys, "classgroup", "--disc", "-200", "--level", "3", "--format", "json"
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert len(payload["reps"]) == 12
    assert payload["invariant_factors"] == ["2", "6"]


def test_classgroup_oracle_audit(capsys, schema):
    code, payload = run_json(
        capsys, "classgroup", "--disc", "-24", "--level", "2",
        "--check-oracle", "--format", "json",
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert payload["oracle_isomorphic"] is True
    assert sorted(payload["oracle_dictionary"]) == list(range(len(payload["reps"])))


def test_classgroup_level_one(capsys, schema):
    code, payload = run_json(
        capsys, "classgroup", "--disc", "-200", "--level", "1", "--format", "json"
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert len(payload["reps"]) == 6


def test_classgroup_small_disc_edge(capsys, schema):
    code, payload = run_json(
        capsys, "classgroup", "--disc", "-3", "--level", "2", "--format", "json"
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert len(payload["reps"]) == 1


def test_classgroup_invalid_disc_exit_2(capsys):
    code, _ = run_cli(capsys, "classgroup", "--disc", "-21", "--level", "3")
    assert code == cli.EXIT_USAGE


def test_classgroup_text_table(capsys):
    code, out = run_cli(capsys, "classgroup", "--disc", "-200", "--level", "3")
    assert code == 0
    assert "g12" in out and "invariant factors: Z2 x Z6" in out


def test_minpoly_low_digits_still_recognizes(capsys, schema):
    # 100 digits leaves ~60 guard digits over the 70-digit coefficients
    code, payload = run_json(
        capsys, "minpoly", "--disc", "-200", "--level", "3",
        "--digits", "100", "--format", "json",
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert payload["ok"] is True
    assert payload["coefficients"][1] == "-19732842623587344380"
    assert payload["coefficients"][-1] == "1"
    assert payload["degree"] == "12"


def test_minpoly_honest_failure_exit_3(capsys, schema):
    code, payload = run_json(
        capsys, "minpoly", "--disc", "-200", "--level", "3",
        "--digits", "30", "--max-escalations", "0", "--format", "json",
    )
    assert code == cli.EXIT_UNRECOGNIZED
    jsonschema.validate(payload, schema)
    assert payload["ok"] is False and payload["coefficients"] is None
    assert len(payload["unrecognized"]) == 13


def test_minpoly_rejects_level_one(capsys):
    code, _ = run_cli(capsys, "minpoly", "--disc", "-200", "--level", "1")
    assert code == cli.EXIT_USAGE


def test_lderiv_json(capsys, schema):
    code, payload = run_json(
        capsys, "lderiv", "--disc", "-200", "--level", "3",
        "--digits", "50", "--format", "json",
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert len(payload["characters"]) == 12
    assert float(payload["inversion_residual"]) < 1e-40


def test_cartan_json(capsys, schema):
    code, payload = run_json(
        capsys, "cartan", "--disc", "-200", "--level", "3", "--format", "json"
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert payload["orders"] == {"W": "4", "U": "2", "What": "8", "units": "4"}
    assert payload["check_WUOG"] is True


def test_invariants_json(capsys, schema):
    code, payload = run_json(
        capsys, "invariants", "--disc", "-200", "--level", "3",
        "--digits", "40", "--format", "json",
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert len(payload["values"]) == 12


def test_verify_unknown_battery_exit_2(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify", "bogus"])


def test_verify_paper_battery_json(capsys, schema):
    code, payload = run_json(
        capsys, "verify", "paper", "--digits", "160", "--format", "json"
    )
    assert code == 0
    jsonschema.validate(payload, schema)
    assert payload["passed"] == payload["total"] == 5


def test_deterministic_output(capsys):
    _, out1 = run_cli(capsys, "classgroup", "--disc", "-56", "--level", "4", "--format", "json")
    _, out2 = run_cli(capsys, "classgroup", "--disc", "-56", "--level", "4", "--format", "json")
    assert out1 == out2
