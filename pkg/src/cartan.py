"""Borcherds-Cartan data: validation, weights, the bilinear form and Weyl enumeration."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .errors import DatumError
from .log import get_logger
from .types import Beta, CartanDatum, RootLatticeVector, Weight, WeylElement

logger = get_logger(__name__)


def validation_diagnostic(datum: CartanDatum) -> Optional[str]:
    """Return None for a valid datum, otherwise a message naming the first violated condition.

    Raises DatumError when the input is malformed (non-square matrix, bad symmetrizer).
    """

    n = len(datum.a)
    if n == 0:
        raise DatumError("malformed datum: empty matrix")
    if any(len(row) != n for row in datum.a):
        raise DatumError("malformed datum: matrix is not square")
    if len(datum.nodes) != n:
        raise DatumError(f"malformed datum: {len(datum.nodes)} node names for a {n}x{n} matrix")
    if len(set(datum.nodes)) != n:
        raise DatumError("malformed datum: node names must be distinct")
    if len(datum.s) != n or any(value <= 0 for value in datum.s):
        raise DatumError("malformed datum: symmetrizer must hold one positive integer per node")

    for i in range(n):
        diagonal = datum.a[i][i]
        if diagonal != 2 and (diagonal > 0 or diagonal % 2 != 0):
            return f"condition (i) violated: a[{i}][{i}] = {diagonal} must be 2 or an even integer <= 0"
    for i in range(n):
        for j in range(n):
            if i != j and datum.a[i][j] > 0:
                return f"condition (ii) violated: off-diagonal a[{i}][{j}] = {datum.a[i][j]} is positive"
    for i in range(n):
        for j in range(i + 1, n):
            if datum.s[i] * datum.a[i][j] != datum.s[j] * datum.a[j][i]:
                return (
                    f"condition (iii) violated: symmetrizer s = {datum.s} does not symmetrize "
                    f"a[{i}][{j}] = {datum.a[i][j]}, a[{j}][{i}] = {datum.a[j][i]}"
                )
    return None


def validate(datum: CartanDatum) -> bool:
    return validation_diagnostic(datum) is None


def require_valid(datum: CartanDatum) -> CartanDatum:
    diagnostic = validation_diagnostic(datum)
    if diagnostic is not None:
        raise DatumError(diagnostic)
    return datum


def node_q_exponent(datum: CartanDatum, i: int) -> int:
    """Exponent e with q_(i) = q^e, i.e. (alpha_i, alpha_i) / 2."""

    return datum.s[i] * datum.a[i][i] // 2


def simple_root(datum: CartanDatum, j: int) -> Weight:
    return Weight(
        tuple(datum.a[i][j] for i in range(datum.rank)),
        tuple(1 if i == j else 0 for i in range(datum.rank)),
    )


def fundamental_weight(datum: CartanDatum, i: int) -> Weight:
    return Weight(tuple(1 if k == i else 0 for k in range(datum.rank)), (0,) * datum.rank)


def zero_weight(datum: CartanDatum) -> Weight:
    return Weight((0,) * datum.rank, (0,) * datum.rank)


def rho(datum: CartanDatum) -> Weight:
    return Weight((1,) * datum.rank, (0,) * datum.rank)


def root_weight(datum: CartanDatum, beta: Sequence[int]) -> Weight:
    total = zero_weight(datum)
    for j, k in enumerate(beta):
        if k:
            total = total + simple_root(datum, j).scaled(k)
    return total


def weight_from_coefficients(
    datum: CartanDatum, coefficients: Sequence[int], shift: Sequence[int] | None = None
) -> Weight:
    """Build sum c_i Lambda_i - sum k_j alpha_j."""

    if len(coefficients) != datum.rank:
        raise ValueError(f"expected {datum.rank} fundamental-weight coefficients, got {len(coefficients)}")
    weight = Weight(tuple(int(c) for c in coefficients), (0,) * datum.rank)
    if shift:
        if len(shift) != datum.rank:
            raise ValueError(f"expected {datum.rank} root-lattice coefficients, got {len(shift)}")
        weight = weight - root_weight(datum, shift)
    return weight


def beta_of(datum: CartanDatum, difference: Weight) -> Beta:
    """Coefficients of a weight that lies in the root lattice."""

    beta = tuple(difference.d_values)
    if root_weight(datum, beta) != difference:
        raise ValueError(f"{difference} is not in the root lattice")
    return beta


def lower(datum: CartanDatum, weight: Weight, beta: Sequence[int]) -> Weight:
    return weight - root_weight(datum, beta)


def height(beta: Sequence[int]) -> int:
    return sum(beta)


def is_dominant(datum: CartanDatum, weight: Weight) -> bool:
    return all(value >= 0 for value in weight.h_values)


def _as_root(value) -> Optional[Tuple[int, ...]]:
    if isinstance(value, RootLatticeVector):
        return value.coefficients
    if isinstance(value, (tuple, list)):
        return tuple(int(k) for k in value)
    return None


def bilinear(datum: CartanDatum, x, y) -> int:
    """Symmetric form with (alpha_i, alpha_j) = s_i a_ij and (alpha_i, lambda) = s_i <h_i, lambda>.

    Arguments are root-lattice vectors (tuples or RootLatticeVector) or Weights; at least one must be a root.
    """

    root_x, root_y = _as_root(x), _as_root(y)
    if root_x is not None and root_y is not None:
        return sum(
            root_x[i] * root_y[j] * datum.s[i] * datum.a[i][j]
            for i in range(datum.rank)
            for j in range(datum.rank)
            if root_x[i] and root_y[j]
        )
    if root_x is not None and isinstance(y, Weight):
        return sum(root_x[i] * datum.s[i] * y.h_values[i] for i in range(datum.rank))
    if root_y is not None and isinstance(x, Weight):
        return bilinear(datum, y, x)
    raise ValueError("the form is only available when one argument lies in the root lattice")


def pair_torus(torus: Sequence[int], weight: Weight) -> int:
    """<h, weight> for h given by its coordinates over the coroot basis {h_i} then {d_i}."""

    n = len(weight.h_values)
    return sum(torus[i] * weight.h_values[i] for i in range(n)) + sum(
        torus[n + i] * weight.d_values[i] for i in range(n)
    )


def torus_root_pairing(datum: CartanDatum, torus: Sequence[int], beta: Sequence[int]) -> int:
    """<h, beta> for beta in the root lattice."""

    n = datum.rank
    total = 0
    for j, k in enumerate(beta):
        if k:
            total += k * (sum(torus[i] * datum.a[i][j] for i in range(n)) + torus[n + j])
    return total


def reflect(datum: CartanDatum, i: int, weight: Weight) -> Weight:
    if not datum.is_real(i):
        raise ValueError(f"node {datum.nodes[i]} is imaginary; only real nodes define reflections")
    return weight - simple_root(datum, i).scaled(weight.h_values[i])


def apply_weyl(datum: CartanDatum, element: WeylElement, weight: Weight) -> Weight:
    for i in reversed(element.word):
        weight = reflect(datum, i, weight)
    return weight


def enumerate_weyl(
    datum: CartanDatum, weight: Weight, cutoff: int, slack: int = 0
) -> List[Tuple[WeylElement, Weight]]:
    """Weyl elements w with ht(lambda + rho - w(lambda + rho)) <= cutoff + slack.

    Breadth-first over left multiplication by real reflections. Steps are taken only
    when they lengthen w, which from a dominant start strictly raises the height defect,
    so a branch is cut as soon as the defect passes the bound.
    """

    start = weight + rho(datum)
    probe = rho(datum)
    bound = cutoff + slack
    identity = WeylElement(())
    results: List[Tuple[WeylElement, Weight]] = [(identity, start)]
    seen = {probe}
    frontier = [(identity, start, probe, 0)]
    while frontier:
        next_frontier = []
        for element, image, probe_image, defect in frontier:
            for i in datum.real_nodes():
                step = image.h_values[i]
                if step <= 0:
                    continue
                new_defect = defect + step
                if new_defect > bound:
                    continue
                new_probe = reflect(datum, i, probe_image)
                if new_probe in seen:
                    continue
                seen.add(new_probe)
                new_element = WeylElement((i,) + element.word)
                next_frontier.append((new_element, reflect(datum, i, image), new_probe, new_defect))
        next_frontier.sort(key=lambda item: item[0].word)
        results.extend((element, image) for element, image, _, _ in next_frontier)
        frontier = next_frontier
    logger.debug("enumerated %d Weyl elements within height bound %d", len(results), bound)
    return results
