import pytest

from src import cartan
from src.errors import DatumError
from src.types import CartanDatum, Weight


def _datum(a, s=None):
    return CartanDatum(nodes=[str(k + 1) for k in range(len(a))], a=a, s=s or [1] * len(a))


SL3 = _datum([[2, -1], [-1, 2]])
MIXED = _datum([[2, -1], [-1, 0]])


def test_validate_examples():
    assert cartan.validate(_datum([[2]]))
    assert cartan.validate(MIXED)
    assert not cartan.validate(_datum([[3]]))


def test_diagnostic_names_violated_condition():
    assert "condition (i)" in cartan.validation_diagnostic(_datum([[-1]]))
    assert "condition (ii)" in cartan.validation_diagnostic(_datum([[2, 1], [1, 2]]))
    message = cartan.validation_diagnostic(_datum([[2, -1], [-2, 2]]))
    assert "condition (iii)" in message and "symmetrizer" in message
    assert cartan.validation_diagnostic(_datum([[2, -1], [-2, 2]], s=[2, 1])) is None


def test_malformed_datum_raises():
    with pytest.raises(DatumError):
        cartan.validation_diagnostic(CartanDatum(nodes=["1", "2"], a=[[2, -1]], s=[1, 1]))
    with pytest.raises(DatumError):
        cartan.require_valid(_datum([[3]]))


def test_node_kinds():
    datum = _datum([[2, 0, 0], [0, 0, 0], [0, 0, -2]])
    assert [datum.kind(i) for i in range(3)] == ["real", "isotropic", "imaginary"]
    assert datum.real_nodes() == [0]
    assert datum.imaginary_nodes() == [1, 2]


def test_bilinear_examples():
    assert cartan.bilinear(SL3, (1, 0), (1, 0)) == 2
    assert cartan.bilinear(SL3, (1, 0), (0, 1)) == -1
    assert cartan.bilinear(SL3, (1, 0), cartan.fundamental_weight(SL3, 0)) == 1
    assert cartan.bilinear(SL3, cartan.fundamental_weight(SL3, 1), (1, 0)) == 0
    with pytest.raises(ValueError):
        cartan.bilinear(SL3, cartan.rho(SL3), cartan.rho(SL3))


def test_bilinear_uses_symmetrizer():
    datum = _datum([[2, -1], [-2, 2]], s=[2, 1])
    assert cartan.bilinear(datum, (1, 0), (0, 1)) == -2
    assert cartan.bilinear(datum, (0, 1), (1, 0)) == -2
    assert cartan.bilinear(datum, (1, 0), (1, 0)) == 4


def test_reflect_simple_root_and_involution():
    alpha = cartan.simple_root(SL3, 0)
    assert cartan.reflect(SL3, 0, alpha) == alpha.scaled(-1)
    weight = Weight((2, 1), (0, 0))
    assert cartan.reflect(SL3, 0, cartan.reflect(SL3, 0, weight)) == weight
    assert cartan.reflect(SL3, 0, weight).h_values == (-2, 3)


def test_reflect_rejects_imaginary_node():
    with pytest.raises(ValueError):
        cartan.reflect(MIXED, 1, cartan.rho(MIXED))


def test_weight_from_coefficients_and_root_lattice():
    weight = cartan.weight_from_coefficients(SL3, [1, 0], shift=[1, 1])
    assert weight.h_values == (0, -1)
    assert cartan.beta_of(SL3, Weight((1, 0), (0, 0)) - weight) == (1, 1)
    with pytest.raises(ValueError):
        cartan.weight_from_coefficients(SL3, [1])


def test_torus_pairings():
    torus = (1, 0, 0, 0)
    assert cartan.torus_root_pairing(MIXED, torus, (0, 1)) == -1
    assert cartan.pair_torus(torus, Weight((3, 5), (0, 0))) == 3
    assert cartan.pair_torus((0, 0, 1, 0), Weight((3, 5), (7, 0))) == 7


def test_enumerate_weyl_rank_one():
    real = _datum([[2]])
    found = cartan.enumerate_weyl(real, cartan.zero_weight(real), 2)
    assert [element.sign for element, _ in found] == [1, -1]
    imaginary = _datum([[0]])
    assert len(cartan.enumerate_weyl(imaginary, cartan.zero_weight(imaginary), 5)) == 1


def test_enumerate_weyl_sl3_gives_symmetric_group():
    found = cartan.enumerate_weyl(SL3, cartan.zero_weight(SL3), 10)
    assert len(found) == 6
    assert sorted(element.sign for element, _ in found) == [-1, -1, -1, 1, 1, 1]
    assert sorted(element.length for element, _ in found) == [0, 1, 1, 2, 2, 3]
    assert len({image for _, image in found}) == 6


def test_enumerate_weyl_prunes_by_height():
    found = cartan.enumerate_weyl(SL3, cartan.zero_weight(SL3), 1)
    assert len(found) == 3
