import json

import pytest

from src import config
from src.datum_catalog import RAW_DATA, datum_by_name, load_catalog, load_datum, load_tau_overrides, save_datum
from src.errors import DatumError
from src.types import CartanDatum


def test_catalog_writes_missing_files(tmp_path, monkeypatch):
    monkeypatch.setenv("BBQ_DATA_DIR", str(tmp_path))
    catalog = load_catalog()
    assert [datum.name for datum in catalog] == [item["name"] for item in RAW_DATA]
    assert (tmp_path / "mixed2.json").exists()
    assert datum_by_name("iso1").a == [[0]]
    assert datum_by_name("missing") is None


def test_catalog_prefers_edited_files(tmp_path, monkeypatch):
    monkeypatch.setenv("BBQ_DATA_DIR", str(tmp_path))
    (tmp_path / "noniso1.json").write_text(json.dumps({"a": [[-4]], "s": [2]}), encoding="utf-8")
    (tmp_path / "sl2.json").write_text("{not json", encoding="utf-8")
    by_name = {datum.name: datum for datum in load_catalog()}
    assert by_name["noniso1"].a == [[-4]]
    assert by_name["noniso1"].s == [2]
    assert by_name["sl2"].a == [[2]]


def test_load_datum_defaults(tmp_path):
    path = tmp_path / "rank1.json"
    path.write_text(json.dumps({"a": [[0]]}), encoding="utf-8")
    datum = load_datum(path)
    assert datum.name == "rank1"
    assert datum.nodes == ["1"]
    assert datum.s == [1]


@pytest.mark.parametrize("text", ["{", "[]", '{"nodes": ["1"]}', '{"a": [["x"]]}'])
def test_malformed_datum_files(tmp_path, text):
    path = tmp_path / "broken.json"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(DatumError):
        load_datum(path)


def test_save_and_load_keep_tau(tmp_path):
    datum = CartanDatum(nodes=["a", "b"], a=[[2, -1], [-1, -2]], s=[1, 1], tau={"b,*": "1/(1-q^(2*l))"})
    path = save_datum(datum, tmp_path / "custom.json")
    loaded = load_datum(path)
    assert loaded.nodes == ["a", "b"]
    assert loaded.tau == {"b,*": "1/(1-q^(2*l))"}


def test_tau_override_files(tmp_path):
    path = tmp_path / "tau.json"
    path.write_text(json.dumps({"1,2": "q/(1-q^4)", "1,*": "1"}), encoding="utf-8")
    assert load_tau_overrides(path) == {"1,2": "q/(1-q^4)", "1,*": "1"}
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(DatumError):
        load_tau_overrides(path)


def test_config_defaults(monkeypatch):
    names = ("BBQ_CUTOFF_LIMIT", "BBQ_DEFAULT_CUTOFF", "BBQ_TAU_SERIES_ORDER", "BBQ_LOG_LEVEL", "BBQ_ROOT_MULT_CACHE")
    for name in names:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("BBQ_DATA_DIR", "/tmp/bbq-data")
    assert config.cutoff_limit() == 8
    assert config.default_cutoff() == 4
    assert config.tau_series_order() == 12
    assert config.log_level() == "WARNING"
    assert str(config.root_multiplicities_path()) == "/tmp/bbq-data/root_multiplicities.json"


def test_config_falls_back_on_bad_values(monkeypatch):
    monkeypatch.setenv("BBQ_CUTOFF_LIMIT", "many")
    monkeypatch.setenv("BBQ_DEFAULT_CUTOFF", "")
    monkeypatch.setenv("BBQ_LOG_LEVEL", "chatty")
    assert config.cutoff_limit() == 8
    assert config.default_cutoff() == 4
    assert config.log_level() == "WARNING"
    monkeypatch.setenv("BBQ_LOG_LEVEL", "debug")
    assert config.log_level() == "DEBUG"
