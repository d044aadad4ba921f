import pytest

from src import stringalg
from src.cartan import fundamental_weight
from src.datum_catalog import RAW_DATA
from src.types import CartanDatum
from src.ubase import QuantumAlgebra
from src.verma import build_verma, irreducible_quotient


def _datum(name):
    return next(CartanDatum.from_dict(item) for item in RAW_DATA if item["name"] == name)


def test_enumerate_basis_examples():
    assert stringalg.enumerate_basis(_datum("sl2"), 0, 3) == [((0, 1), (0, 1), (0, 1))]
    assert stringalg.enumerate_basis(_datum("iso1"), 0, 3) == [
        ((0, 3),),
        ((0, 2), (0, 1)),
        ((0, 1), (0, 1), (0, 1)),
    ]
    compositions = stringalg.enumerate_basis(_datum("noniso1"), 0, 3)
    assert len(compositions) == 4
    assert ((0, 1), (0, 2)) in compositions and ((0, 2), (0, 1)) in compositions
    assert stringalg.enumerate_basis(_datum("iso1"), 0, 0) == [()]


def test_enumerate_basis_counts():
    for level, expected in [(1, 1), (2, 2), (4, 5), (6, 11)]:
        assert len(stringalg.enumerate_basis(_datum("iso1"), 0, level)) == expected
    assert len(stringalg.enumerate_basis(_datum("noniso1"), 0, 6)) == 32


def test_enumerate_basis_rejects_negative_level():
    with pytest.raises(ValueError):
        stringalg.enumerate_basis(_datum("sl2"), 0, -1)


@pytest.mark.parametrize(
    "name, node, tag",
    [
        ("sl2", 0, stringalg.SL2),
        ("iso1", 0, stringalg.TWISTED_HEISENBERG),
        ("noniso1", 0, stringalg.FREE),
        ("mixed2", 1, stringalg.TWISTED_HEISENBERG),
    ],
)
def test_classify_tags_and_witnesses(name, node, tag):
    result = stringalg.classify(QuantumAlgebra(_datum(name), cutoff=3), node)
    assert result.tag == tag
    assert result.witnesses
    assert result.confirmed
    assert result.to_dict()["confirmed"] is True


def test_string_components_of_sl2_module():
    datum = _datum("sl2")
    algebra = QuantumAlgebra(datum, cutoff=3)
    module = irreducible_quotient(build_verma(algebra, fundamental_weight(datum, 0).scaled(2)))
    components = stringalg.string_components(module, 0)
    assert len(components) == 1
    top = components[0]
    assert (top.beta, top.pairing, top.multiplicity, top.shape, top.length) == ((0,), 2, 1, "string", 3)


def test_string_components_at_imaginary_node():
    datum = _datum("iso1")
    algebra = QuantumAlgebra(datum, cutoff=2)
    trivial = irreducible_quotient(build_verma(algebra, fundamental_weight(datum, 0).scaled(0)))
    assert [(c.shape, c.length) for c in stringalg.string_components(trivial, 0)] == [("trivial", 1)]
    free = irreducible_quotient(build_verma(algebra, fundamental_weight(datum, 0)))
    components = stringalg.string_components(free, 0)
    assert components[0].shape == "free"
    assert components[0].length is None
