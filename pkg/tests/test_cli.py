import json
from pathlib import Path

import pytest

from src.cli import EXIT_INCONSISTENT, EXIT_INVALID, EXIT_OK, run
from src.datum_catalog import save_datum
from src.errors import ConsistencyError
from src.types import CartanDatum

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def _shipped(name):
    return str(DATA_DIR / f"{name}.json")


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("BBQ_ROOT_MULT_CACHE", str(tmp_path / "root_multiplicities.json"))
    monkeypatch.delenv("BBQ_CUTOFF_LIMIT", raising=False)
    monkeypatch.delenv("BBQ_DEFAULT_CUTOFF", raising=False)


def test_validate_accepts_shipped_datum(capsys):
    assert run(["validate", "--datum", _shipped("sl2")]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "valid"


def test_validate_reports_violated_condition(tmp_path, capsys):
    path = save_datum(CartanDatum(nodes=["1"], a=[[3]], s=[1], name="bad"), tmp_path / "bad.json")
    assert run(["validate", "--datum", str(path)]) == EXIT_INVALID
    assert "condition (i)" in capsys.readouterr().out

    path = save_datum(CartanDatum(nodes=["1", "2"], a=[[2, -1], [-2, 2]], s=[1, 1]), tmp_path / "asym.json")
    assert run(["validate", "--datum", str(path)]) == EXIT_INVALID
    assert "symmetrizer" in capsys.readouterr().out


def test_other_commands_refuse_invalid_datum(tmp_path, capsys):
    path = save_datum(CartanDatum(nodes=["1"], a=[[3]], s=[1]), tmp_path / "bad.json")
    assert run(["basis", "--datum", str(path), "--cutoff", "2"]) == EXIT_INVALID
    assert "invalid input" in capsys.readouterr().err


def test_missing_datum_file_is_invalid_input(tmp_path, capsys):
    assert run(["validate", "--datum", str(tmp_path / "absent.json")]) == EXIT_INVALID
    assert "invalid input" in capsys.readouterr().err


def test_root_mult_machine_output(capsys):
    code = run(["root-mult", "--datum", _shipped("noniso1"), "--cutoff", "5", "--format", "machine"])
    assert code == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["command"] == "root-mult"
    assert document["cutoff"] == 5
    assert [document["result"]["mult"][str(level)] for level in range(1, 6)] == [1, 1, 2, 3, 6]


def test_weight_multiplicity_matches_partitions(capsys):
    code = run(["weight-mult", "--datum", _shipped("iso1"), "--lambda", "1", "--beta", "2", "--format", "machine"])
    assert code == EXIT_OK
    result = json.loads(capsys.readouterr().out)["result"]
    assert result == {"beta": [2], "verma_dim": 2, "multiplicity": 2}


def test_weight_multiplicity_needs_full_beta(capsys):
    assert run(["weight-mult", "--datum", _shipped("mixed2"), "--beta", "1"]) == EXIT_INVALID
    assert "--beta" in capsys.readouterr().err


def test_check_relations_passes(capsys):
    assert run(["check-relations", "--datum", _shipped("mixed2"), "--cutoff", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "serre" in out
    assert "NONZERO" not in out


def test_normal_form_prints_reordered_terms(capsys):
    assert run(["normal-form", "e[1,1] f[1,1]", "--datum", _shipped("iso1"), "--cutoff", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "f[1,1] e[1,1]" in out
    assert "K[1]^-1" in out


def test_normal_form_rejects_bad_expression(capsys):
    assert run(["normal-form", "e[1,", "--datum", _shipped("sl2")]) == EXIT_INVALID
    assert "invalid input" in capsys.readouterr().err


def test_cutoff_above_limit_is_rejected(capsys, monkeypatch):
    monkeypatch.setenv("BBQ_CUTOFF_LIMIT", "3")
    assert run(["basis", "--datum", _shipped("sl2"), "--cutoff", "4"]) == EXIT_INVALID
    assert "safety limit" in capsys.readouterr().err


def test_default_cutoff_comes_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("BBQ_DEFAULT_CUTOFF", "2")
    assert run(["root-mult", "--datum", _shipped("iso1"), "--format", "machine"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["cutoff"] == 2


def test_machine_output_is_deterministic(tmp_path, capsys):
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    args = ["decompose", "--datum", _shipped("sl2"), "--lambda", "1", "--mu", "1", "--cutoff", "3"]
    assert run(args + ["--output", str(first)]) == EXIT_OK
    assert run(args + ["--output", str(second)]) == EXIT_OK
    capsys.readouterr()
    assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")
    result = json.loads(first.read_text(encoding="utf-8"))["result"]
    assert result["character_matches"] is True


def test_consistency_failure_exit_code(monkeypatch, capsys):
    def _broken(*args, **kwargs):
        raise ConsistencyError("negative multiplicity")

    monkeypatch.setattr("src.cli.load_or_build_root_multiplicities", _broken)
    assert run(["root-mult", "--datum", _shipped("iso1"), "--cutoff", "2"]) == EXIT_INCONSISTENT
    assert "consistency failure" in capsys.readouterr().err


def test_gram_reports_rank(capsys):
    code = run(["gram", "--datum", _shipped("sl2"), "--lambda", "1", "--beta", "2", "--format", "machine"])
    assert code == EXIT_OK
    result = json.loads(capsys.readouterr().out)["result"]
    assert (result["size"], result["rank"]) == (1, 0)


def test_bad_arguments_are_invalid_input(capsys):
    assert run(["basis", "--datum", _shipped("sl2"), "--cutoff", "abc"]) == EXIT_INVALID
    assert "invalid int value" in capsys.readouterr().err
    assert run(["basis", "--cutoff", "2"]) == EXIT_INVALID
    assert run(["braid", "--datum", _shipped("sl2")]) == EXIT_INVALID


def test_tau_outside_positive_series_is_rejected(tmp_path, capsys):
    datum_file = tmp_path / "iso.json"
    datum_file.write_text(json.dumps({"a": [[0]]}), encoding="utf-8")
    tau_file = tmp_path / "tau.json"
    tau_file.write_text(json.dumps({"1,*": "1-q^l"}), encoding="utf-8")
    code = run(["check-relations", "--datum", str(datum_file), "--tau", str(tau_file), "--cutoff", "2"])
    assert code == EXIT_INVALID
    assert "tau is not in 1 + q Z>=0[[q]]" in capsys.readouterr().err

    tau_file.write_text(json.dumps({"1,*": "1/(1-q^(2*l))"}), encoding="utf-8")
    assert run(["check-relations", "--datum", str(datum_file), "--tau", str(tau_file), "--cutoff", "2"]) == EXIT_OK


def test_datum_can_be_named_from_the_catalog(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("BBQ_DATA_DIR", str(tmp_path))
    assert run(["root-mult", "--datum", "noniso1", "--cutoff", "3", "--format", "machine"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["result"]["mult"] == {"1": 1, "2": 1, "3": 2}
    assert run(["root-mult", "--datum", "nosuch", "--cutoff", "3"]) == EXIT_INVALID
    assert "shipped datum" in capsys.readouterr().err


def test_shift_applies_to_both_highest_weights(capsys):
    args = ["decompose", "--datum", _shipped("iso1"), "--lambda", "1", "--mu", "1", "--shift", "1", "--cutoff", "2"]
    assert run(args + ["--format", "machine"]) == EXIT_OK
    components = json.loads(capsys.readouterr().out)["result"]["components"]
    assert components[0]["weight"] == {"h": [2], "d": [-2]}
