"""Rank-1 string algebras: closed-form bases, structure tags and string decompositions of modules."""

from __future__ import annotations

from typing import TYPE_CHECKING, List

from sympy.utilities.iterables import multiset_permutations, partitions

from .freealg import FreeMonomial
from .log import get_logger
from .types import ISOTROPIC, REAL, CartanDatum, ConditionCheck, StringClassification, StringComponent

if TYPE_CHECKING:
    from .ubase import QuantumAlgebra
    from .verma import TruncatedModule

logger = get_logger(__name__)

SL2 = "sl2"
TWISTED_HEISENBERG = "twisted-heisenberg"
FREE = "free"


def _partitions(level: int) -> List[List[int]]:
    """Partitions of level as weakly decreasing part lists."""

    found = []
    for counts in partitions(level):
        parts: List[int] = []
        for part in sorted(counts, reverse=True):
            parts.extend([part] * counts[part])
        found.append(parts)
    return found


def enumerate_basis(datum: CartanDatum, i: int, level: int) -> List[FreeMonomial]:
    """Closed-form monomial basis of the degree -level*alpha_i piece of U-."""

    if level < 0:
        raise ValueError("level must be nonnegative")
    if level == 0:
        return [()]
    kind = datum.kind(i)
    if kind == REAL:
        return [((i, 1),) * level]
    shapes = _partitions(level)
    if kind == ISOTROPIC:
        words = [tuple((i, part) for part in parts) for parts in shapes]
    else:
        words = [tuple((i, part) for part in order) for parts in shapes for order in multiset_permutations(parts)]
    return sorted(words, key=lambda word: (len(word), word))


def _check(name: str, passed: bool, detail: str = "") -> ConditionCheck:
    return ConditionCheck(name=name, passed=passed, detail=detail)


def classify(algebra: "QuantumAlgebra", i: int) -> StringClassification:
    """Tag U_(i) as sl2, twisted Heisenberg or free, checking the relations that justify the tag."""

    datum = algebra.datum
    node = datum.nodes[i]
    top = algebra.cutoff
    witnesses: List[ConditionCheck] = []
    kind = datum.kind(i)

    if kind == REAL:
        residual = algebra.relation_residual("string", (i, 1, 1))
        witnesses.append(_check("string relation e f at level 1", residual.is_zero()))
        if top >= 2:
            dims = [algebra.basis.dimension(_scaled(datum.rank, i, level)) for level in range(1, top + 1)]
            witnesses.append(_check("one monomial per degree", all(d == 1 for d in dims), f"dims {dims}"))
        bracket = algebra.reorder_ef(i, 1, 1) - algebra.multiply(algebra.generator("f", i), algebra.generator("e", i))
        witnesses.append(_check("e f - f e lies in the torus", _is_toral(bracket)))
        tag = SL2
    elif kind == ISOTROPIC:
        for k in range(1, top + 1):
            for level in range(k + 1, top + 1 - k):
                for side in ("f", "e"):
                    residual = algebra.relation_residual("commuting", (i, k, i, level), side)
                    label = f"{side}[{node},{k}] commutes with {side}[{node},{level}]"
                    witnesses.append(_check(label, residual.is_zero()))
        k_element = algebra.k_element(i)
        for level in range(1, top + 1):
            for side in ("f", "e"):
                x = algebra.generator(side, i, level)
                commutator = algebra.multiply(k_element, x) - algebra.multiply(x, k_element)
                witnesses.append(_check(f"K[{node}] central against {side}[{node},{level}]", commutator.is_zero()))
        bracket = algebra.reorder_ef(i, 1, 1) - algebra.multiply(algebra.generator("f", i), algebra.generator("e", i))
        witnesses.append(_check("e f - f e lies in the torus", _is_toral(bracket) and not bracket.is_zero()))
        tag = TWISTED_HEISENBERG
    else:
        for level in range(1, top + 1):
            expected = 2 ** (level - 1)
            found = algebra.basis.dimension(_scaled(datum.rank, i, level))
            witnesses.append(_check(f"no relations among f[{node},*] at level {level}", found == expected, f"{found}"))
        tag = FREE

    result = StringClassification(node=node, tag=tag, witnesses=witnesses)
    if not result.confirmed:
        logger.warning("node %s classified as %s but a witness failed", node, tag)
    return result


def _scaled(rank: int, i: int, level: int):
    return tuple(level if k == i else 0 for k in range(rank))


def _is_toral(x) -> bool:
    return all(not fword and not eword for fword, _, eword in x)


def string_components(module: "TruncatedModule", i: int) -> List[StringComponent]:
    """U_(i)-highest-weight vectors of a module, weight by weight.

    Real nodes give finite strings of length <h_i, mu> + 1; at imaginary nodes a
    vector with <h_i, mu> = 0 spans a trivial module and any other one a free string.
    """

    from .verma import maximal_vectors

    datum = module.datum
    components: List[StringComponent] = []
    for beta in module.weights():
        if not module.dimension(beta):
            continue
        letters = [(i, level) for level in module.levels(i)]
        count = len(maximal_vectors(module, beta, letters))
        if not count:
            continue
        pairing = module.weight(beta).h_values[i]
        if datum.is_real(i):
            shape, length = "string", pairing + 1
        elif pairing == 0:
            shape, length = "trivial", 1
        else:
            shape, length = "free", None
        components.append(StringComponent(beta=beta, pairing=pairing, multiplicity=count, shape=shape, length=length))
    return components
