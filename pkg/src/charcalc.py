"""Character formula side: imaginary corrections, root multiplicities from the denominator identity, characters."""

from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from itertools import product
from typing import Dict, List, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyElement, ring

from .cartan import apply_weyl, beta_of, enumerate_weyl, is_dominant, rho, root_weight
from .config import root_multiplicities_path
from .errors import ConsistencyError
from .log import get_logger
from .types import (
    ISOTROPIC,
    Beta,
    CartanDatum,
    Character,
    ImaginaryCorrection,
    RootLatticeVector,
    RootMultiplicityTable,
    Weight,
)

logger = get_logger(__name__)


@lru_cache(maxsize=None)
def _series_ring(rank: int):
    """Integer polynomial ring in x_j = e^{-alpha_j}."""

    names = ",".join(f"x{j + 1}" for j in range(rank))
    return ring(names, ZZ)[0]


def _truncate(series: PolyElement, cutoff: int) -> PolyElement:
    return series.ring.from_dict({monom: c for monom, c in series.items() if sum(monom) <= cutoff})


def _monomial(rank: int, beta: Sequence[int]) -> PolyElement:
    return _series_ring(rank).from_dict({tuple(beta): 1})


def _as_table(series: PolyElement) -> Dict[Beta, int]:
    return {tuple(monom): int(c) for monom, c in series.items() if c}


@lru_cache(maxsize=None)
def pentagonal_phi(n: int) -> int:
    """Coefficient of q^n in prod_{k>=1} (1 - q^k)."""

    if n < 0:
        raise ValueError("n must be nonnegative")
    coefficients = [1] + [0] * n
    for k in range(1, n + 1):
        for power in range(n, k - 1, -1):
            coefficients[power] -= coefficients[power - k]
    return coefficients[n]


def _orthogonal(datum: CartanDatum, i: int, j: int) -> bool:
    return datum.a[i][j] == 0


def enumerate_F(datum: CartanDatum, weight: Weight, cutoff: int) -> List[ImaginaryCorrection]:
    """Imaginary corrections s with |s| <= cutoff and their signs, s = 0 first.

    The support is a set of imaginary nodes orthogonal to the weight and pairwise
    orthogonal for distinct nodes. A non-isotropic node may appear once at any level
    and contributes -1; an isotropic node with total coefficient c contributes phi(c).
    """

    candidates = [i for i in datum.imaginary_nodes() if weight.h_values[i] == 0]
    found: List[ImaginaryCorrection] = []
    ranges = [range(cutoff + 1) if i in candidates else range(1) for i in range(datum.rank)]
    for coefficients in product(*ranges):
        if sum(coefficients) > cutoff:
            continue
        support = [i for i, k in enumerate(coefficients) if k]
        if any(not _orthogonal(datum, i, j) for i in support for j in support if i < j):
            continue
        sign = 1
        for i in support:
            sign *= pentagonal_phi(coefficients[i]) if datum.kind(i) == ISOTROPIC else -1
        found.append(ImaginaryCorrection(s=RootLatticeVector(tuple(coefficients)), sign=sign))
    found.sort(key=lambda item: (item.s.height, item.s.coefficients))
    return found


def s_lambda(datum: CartanDatum, weight: Weight, cutoff: int) -> Dict[Beta, int]:
    """Sum of sign(s) e^{-s} over the corrections, as beta -> coefficient."""

    return {item.s.coefficients: item.sign for item in enumerate_F(datum, weight, cutoff)}


def _numerator(datum: CartanDatum, weight: Weight, cutoff: int) -> PolyElement:
    """Sum over w and s of sign(w) sign(s) e^{w(lambda + rho - s) - (lambda + rho)}, truncated."""

    series_ring = _series_ring(datum.rank)
    shifted = weight + rho(datum)
    corrections = enumerate_F(datum, weight, cutoff)
    terms: Dict[Beta, int] = {}
    # w(s) - s only adds real roots with nonnegative coefficients, so the slack is generous.
    for element, _ in enumerate_weyl(datum, weight, cutoff, slack=cutoff):
        for correction in corrections:
            image = apply_weyl(datum, element, shifted - root_weight(datum, correction.s.coefficients))
            beta = beta_of(datum, shifted - image)
            if sum(beta) > cutoff:
                continue
            if min(beta) < 0:
                raise ConsistencyError(f"numerator term {beta} leaves the negative cone")
            terms[beta] = terms.get(beta, 0) + element.sign * correction.sign
    return series_ring.from_dict({beta: value for beta, value in terms.items() if value})


def _geometric_power(rank: int, beta: Beta, exponent: int, cutoff: int) -> PolyElement:
    """(1 - e^{-beta})^{-exponent} truncated at height cutoff."""

    series_ring = _series_ring(rank)
    step = sum(beta)
    one = series_ring.one
    geometric = one
    term = one
    monomial = _monomial(rank, beta)
    for _ in range(cutoff // step):
        term = term * monomial
        geometric = geometric + term
    result = one
    for _ in range(exponent):
        result = _truncate(result * geometric, cutoff)
    return result


def inverse_denominator(datum: CartanDatum, table: RootMultiplicityTable, cutoff: int) -> PolyElement:
    """prod over positive roots of (1 - e^{-beta})^{-mult beta}, truncated."""

    result = _series_ring(datum.rank).one
    for beta in table.positive_roots():
        if sum(beta) > cutoff:
            continue
        result = _truncate(result * _geometric_power(datum.rank, beta, table.mult[beta], cutoff), cutoff)
    return result


def root_multiplicities(datum: CartanDatum, cutoff: int) -> RootMultiplicityTable:
    """Solve the denominator identity for dim g_beta, height by height."""

    series_ring = _series_ring(datum.rank)
    target = _as_table(_numerator(datum, Weight((0,) * datum.rank, (0,) * datum.rank), cutoff))
    running = series_ring.one
    table = RootMultiplicityTable(cutoff=cutoff)
    for height in range(1, cutoff + 1):
        level = [
            beta for beta in product(range(height + 1), repeat=datum.rank) if sum(beta) == height
        ]
        current = _as_table(running)
        solved = {}
        for beta in sorted(level):
            mult = current.get(beta, 0) - target.get(beta, 0)
            if mult < 0:
                raise ConsistencyError(f"negative root multiplicity {mult} at {beta}")
            solved[beta] = mult
        for beta, mult in solved.items():
            table.mult[beta] = mult
            factor = series_ring.one - _monomial(datum.rank, beta)
            for _ in range(mult):
                running = _truncate(running * factor, cutoff)
    for i in datum.real_nodes():
        simple = tuple(1 if k == i else 0 for k in range(datum.rank))
        if cutoff >= 1 and table.mult.get(simple) != 1:
            raise ConsistencyError(f"simple real root {simple} has multiplicity {table.mult.get(simple)}")
    logger.debug("solved %d root multiplicities up to height %d", len(table.mult), cutoff)
    return table


def _fingerprint(datum: CartanDatum) -> str:
    payload = json.dumps({"a": datum.a, "s": datum.s}, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _cache_compatible(entry: object, cutoff: int) -> bool:
    if not isinstance(entry, dict):
        return False
    try:
        return int(entry.get("cutoff", -1)) >= cutoff and isinstance(entry.get("mult"), dict)
    except (TypeError, ValueError):
        return False


def _read_cache() -> Dict[str, object]:
    path = root_multiplicities_path()
    if not path.exists():
        return {}
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return {}
    return payload if isinstance(payload, dict) else {}


def load_or_build_root_multiplicities(datum: CartanDatum, cutoff: int) -> RootMultiplicityTable:
    """Return the table from the flat cache when it reaches the cutoff, otherwise solve and store it."""

    key = _fingerprint(datum)
    cache = _read_cache()
    entry = cache.get(key)
    if _cache_compatible(entry, cutoff):
        table = RootMultiplicityTable.from_dict(entry)
        return RootMultiplicityTable(
            cutoff=cutoff, mult={beta: m for beta, m in table.mult.items() if sum(beta) <= cutoff}
        )

    table = root_multiplicities(datum, cutoff)
    path = root_multiplicities_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    cache[key] = {"datum": datum.name, **table.to_dict()}
    path.write_text(json.dumps(cache, indent=2, sort_keys=True), encoding="utf-8")
    return table


def character(
    datum: CartanDatum, weight: Weight, cutoff: int, table: RootMultiplicityTable | None = None
) -> Character:
    """Truncated character of V(lambda) from the numerator divided by the denominator."""

    if not is_dominant(datum, weight):
        raise ValueError(f"highest weight {weight.h_values} is not dominant")
    if table is None or table.cutoff < cutoff:
        table = root_multiplicities(datum, cutoff)
    series = _truncate(_numerator(datum, weight, cutoff) * inverse_denominator(datum, table, cutoff), cutoff)
    multiplicities = _as_table(series)
    negative = {beta: m for beta, m in multiplicities.items() if m < 0}
    if negative:
        raise ConsistencyError(f"negative character coefficients {negative}")
    return Character(highest=weight, cutoff=cutoff, multiplicities=multiplicities)


def verma_character(
    datum: CartanDatum, weight: Weight, cutoff: int, table: RootMultiplicityTable | None = None
) -> Character:
    """e^lambda times the inverse denominator: graded dimensions of U-."""

    if table is None or table.cutoff < cutoff:
        table = root_multiplicities(datum, cutoff)
    return Character(
        highest=weight, cutoff=cutoff, multiplicities=_as_table(inverse_denominator(datum, table, cutoff))
    )


def product_character(first: Character, second: Character, cutoff: int) -> Dict[Beta, int]:
    """Coefficient-wise product of two truncated characters."""

    result: Dict[Beta, int] = {}
    for b1, m1 in first.multiplicities.items():
        for b2, m2 in second.multiplicities.items():
            beta = tuple(x + y for x, y in zip(b1, b2))
            if sum(beta) <= cutoff:
                result[beta] = result.get(beta, 0) + m1 * m2
    return result
