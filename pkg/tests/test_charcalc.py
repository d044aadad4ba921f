import json

import pytest

from src import charcalc
from src.cartan import weight_from_coefficients, zero_weight
from src.datum_catalog import RAW_DATA
from src.errors import ConsistencyError
from src.freealg import FreeAlgebra, TauTable
from src.types import CartanDatum, RootMultiplicityTable, Weight
from src.ubase import GradedBasis, degrees_up_to


def _datum(name):
    return next(CartanDatum.from_dict(item) for item in RAW_DATA if item["name"] == name)


def _by_height(table, cutoff):
    return [table.get((level,), 0) for level in range(cutoff + 1)]


def test_pentagonal_phi_values():
    assert [charcalc.pentagonal_phi(n) for n in range(8)] == [1, -1, -1, 0, 0, 1, 0, 1]
    assert all(charcalc.pentagonal_phi(n) in (-1, 0, 1) for n in range(21))


def test_corrections_for_rank_one_data():
    sl2 = _datum("sl2")
    found = charcalc.enumerate_F(sl2, zero_weight(sl2), 4)
    assert [(c.s.coefficients, c.sign) for c in found] == [((0,), 1)]
    iso = _datum("iso1")
    found = charcalc.enumerate_F(iso, zero_weight(iso), 6)
    assert [c.s.coefficients for c in found] == [(level,) for level in range(7)]
    assert [c.sign for c in found] == [charcalc.pentagonal_phi(level) for level in range(7)]
    noniso = _datum("noniso1")
    signs = [c.sign for c in charcalc.enumerate_F(noniso, zero_weight(noniso), 4)]
    assert signs == [1, -1, -1, -1, -1]


def test_corrections_skip_nodes_paired_with_weight():
    iso = _datum("iso1")
    assert len(charcalc.enumerate_F(iso, weight_from_coefficients(iso, [1]), 5)) == 1


def test_corrections_in_rank_two_need_orthogonal_support():
    datum = CartanDatum(nodes=["1", "2"], a=[[0, -1], [-1, 0]], s=[1, 1])
    supports = {c.s.coefficients for c in charcalc.enumerate_F(datum, zero_weight(datum), 3)}
    assert (1, 1) not in supports
    assert (2, 0) in supports and (0, 3) in supports
    orthogonal = CartanDatum(nodes=["1", "2"], a=[[0, 0], [0, -2]], s=[1, 1])
    found = {c.s.coefficients: c.sign for c in charcalc.enumerate_F(orthogonal, zero_weight(orthogonal), 3)}
    assert found[(1, 1)] == 1
    assert found[(2, 1)] == 1


def test_s_lambda_closed_forms_through_height_eight():
    iso = _datum("iso1")
    assert _by_height(charcalc.s_lambda(iso, zero_weight(iso), 8), 8) == [1, -1, -1, 0, 0, 1, 0, 1, 0]
    noniso = _datum("noniso1")
    assert _by_height(charcalc.s_lambda(noniso, zero_weight(noniso), 8), 8) == [1] + [-1] * 8


def test_root_multiplicities_rank_one():
    iso = charcalc.root_multiplicities(_datum("iso1"), 8)
    assert _by_height(iso.mult, 8)[1:] == [1] * 8
    noniso = charcalc.root_multiplicities(_datum("noniso1"), 5)
    assert _by_height(noniso.mult, 5)[1:] == [1, 1, 2, 3, 6]
    real = charcalc.root_multiplicities(_datum("sl2"), 4)
    assert _by_height(real.mult, 4)[1:] == [1, 0, 0, 0]


def test_root_multiplicities_sl3():
    table = charcalc.root_multiplicities(_datum("sl3"), 6)
    assert table.positive_roots() == [(0, 1), (1, 0), (1, 1)]
    assert all(table.mult[beta] == 1 for beta in table.positive_roots())


def test_negative_multiplicity_is_a_hard_failure(monkeypatch):
    datum = _datum("sl2")
    monkeypatch.setattr(charcalc, "_numerator", lambda *args: charcalc._series_ring(1).from_dict({(0,): 1, (1,): 2}))
    with pytest.raises(ConsistencyError):
        charcalc.root_multiplicities(datum, 2)


@pytest.mark.parametrize("name", ["sl2", "sl3", "iso1", "noniso1", "mixed2"])
def test_denominator_identity_closes(name):
    datum = _datum(name)
    assert charcalc.character(datum, zero_weight(datum), 6).multiplicities == {(0,) * datum.rank: 1}


@pytest.mark.parametrize("name", ["sl2", "sl3", "iso1", "noniso1", "mixed2"])
def test_verma_character_counts_lowering_basis(name):
    datum = _datum(name)
    basis = GradedBasis(FreeAlgebra(datum, TauTable(datum)), 4)
    series = charcalc.verma_character(datum, zero_weight(datum), 4)
    for beta in degrees_up_to(datum.rank, 4):
        assert series.coefficient(beta) == basis.dimension(beta), beta


def test_character_examples():
    sl2 = _datum("sl2")
    ch = charcalc.character(sl2, weight_from_coefficients(sl2, [2]), 3)
    assert [ch.coefficient((level,)) for level in range(4)] == [1, 1, 1, 0]
    noniso = _datum("noniso1")
    ch = charcalc.character(noniso, weight_from_coefficients(noniso, [1]), 5)
    assert [ch.coefficient((level,)) for level in range(6)] == [1, 1, 2, 4, 8, 16]
    iso = _datum("iso1")
    ch = charcalc.character(iso, weight_from_coefficients(iso, [0]), 5)
    assert ch.multiplicities == {(0,): 1}


def test_character_depends_only_on_pairings():
    datum = _datum("mixed2")
    first = charcalc.character(datum, Weight((1, 0), (0, 0)), 4)
    second = charcalc.character(datum, Weight((1, 0), (3, -2)), 4)
    assert first.multiplicities == second.multiplicities


def test_character_rejects_non_dominant_weight():
    datum = _datum("sl2")
    with pytest.raises(ValueError):
        charcalc.character(datum, weight_from_coefficients(datum, [-1]), 3)


def test_product_character():
    datum = _datum("sl2")
    ch = charcalc.character(datum, weight_from_coefficients(datum, [1]), 3)
    assert charcalc.product_character(ch, ch, 3) == {(0,): 1, (1,): 2, (2,): 1}


def test_root_multiplicity_cache_round_trip(tmp_path, monkeypatch):
    cache_path = tmp_path / "root_multiplicities.json"
    monkeypatch.setattr("src.charcalc.root_multiplicities_path", lambda: cache_path)
    datum = _datum("noniso1")

    built = charcalc.load_or_build_root_multiplicities(datum, 5)
    payload = json.loads(cache_path.read_text(encoding="utf-8"))
    assert len(payload) == 1
    assert next(iter(payload.values()))["datum"] == "noniso1"

    def _fail(*args, **kwargs):
        raise AssertionError("cache should have been used")

    monkeypatch.setattr("src.charcalc.root_multiplicities", _fail)
    smaller = charcalc.load_or_build_root_multiplicities(datum, 3)
    assert smaller.cutoff == 3
    assert smaller.mult == {beta: m for beta, m in built.mult.items() if sum(beta) <= 3}


def test_root_multiplicity_cache_rebuilds_for_higher_cutoff(tmp_path, monkeypatch):
    cache_path = tmp_path / "root_multiplicities.json"
    monkeypatch.setattr("src.charcalc.root_multiplicities_path", lambda: cache_path)
    datum = _datum("iso1")
    key = charcalc._fingerprint(datum)
    cache_path.write_text(json.dumps({key: RootMultiplicityTable(cutoff=2, mult={(1,): 1, (2,): 1}).to_dict()}))

    table = charcalc.load_or_build_root_multiplicities(datum, 4)
    assert table.cutoff == 4
    assert json.loads(cache_path.read_text(encoding="utf-8"))[key]["cutoff"] == 4


def test_cache_entry_compatibility():
    assert charcalc._cache_compatible({"cutoff": 5, "mult": {}}, 4)
    assert not charcalc._cache_compatible({"cutoff": 3, "mult": {}}, 4)
    assert not charcalc._cache_compatible({"cutoff": "x", "mult": {}}, 4)
    assert not charcalc._cache_compatible([], 4)
