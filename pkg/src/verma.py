"""Truncated highest-weight modules: Verma modules, contravariant forms, irreducible quotients and tensor products."""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .cartan import is_dominant, lower, node_q_exponent, pair_torus
from .charcalc import character, root_multiplicities
from .errors import CutoffExceeded
from .freealg import FreeMonomial, Letter
from .log import get_logger
from .qfield import QF, QF_DOMAIN, RationalFunction, q_power
from .types import (
    Beta,
    CartanDatum,
    Character,
    Component,
    ConditionCheck,
    DecompositionReport,
    ModuleReport,
    RootMultiplicityTable,
    Weight,
)
from .ubase import QuantumAlgebra, degrees_up_to

logger = get_logger(__name__)

ActionKey = Tuple[str, Letter, Beta]


def _zeros(rows: int, cols: int) -> List[List[RationalFunction]]:
    return [[QF.zero] * cols for _ in range(rows)]


def _matrix(rows: List[List[RationalFunction]], cols: int) -> DomainMatrix:
    return DomainMatrix(rows, (len(rows), cols), QF_DOMAIN)


def _is_zero_matrix(matrix: DomainMatrix) -> bool:
    return all(not entry for row in matrix.to_list() for entry in row)


def _shift(beta: Beta, i: int, amount: int) -> Beta:
    return tuple(k + amount if index == i else k for index, k in enumerate(beta))


class TruncatedModule:
    """Weight spaces lambda - beta for |beta| <= cutoff with exact generator actions.

    Action matrices act on column vectors and are keyed by ("e" | "f", (i, l), source beta).
    A missing entry whose target lies in the truncation is the zero map.
    """

    def __init__(self, datum: CartanDatum, highest: Weight, cutoff: int, title: str) -> None:
        self.datum = datum
        self.highest = highest
        self.cutoff = cutoff
        self.title = title
        self.dims: Dict[Beta, int] = {}
        self.actions: Dict[ActionKey, DomainMatrix] = {}
        self.algebra: Optional[QuantumAlgebra] = None
        self.words: Dict[Beta, List[FreeMonomial]] = {}
        self.parent: Optional["TruncatedModule"] = None
        self.projections: Dict[Beta, DomainMatrix] = {}
        self.blocks: Dict[Beta, List[Tuple[Beta, Beta, int]]] = {}
        self._grams: Dict[Beta, DomainMatrix] = {}

    def weights(self) -> List[Beta]:
        return sorted(self.dims, key=lambda beta: (sum(beta), beta))

    def dimension(self, beta: Sequence[int]) -> int:
        return self.dims.get(tuple(beta), 0)

    def weight(self, beta: Sequence[int]) -> Weight:
        return lower(self.datum, self.highest, beta)

    def levels(self, i: int) -> List[int]:
        return [1] if self.datum.is_real(i) else list(range(1, self.cutoff + 1))

    def letters(self) -> List[Letter]:
        return [(i, level) for i in range(self.datum.rank) for level in self.levels(i)]

    def target(self, kind: str, letter: Letter, beta: Beta) -> Beta:
        i, level = letter
        return _shift(beta, i, level if kind == "f" else -level)

    def known(self, kind: str, letter: Letter, beta: Beta) -> bool:
        """Whether the action lands inside the truncation (or vanishes for weight reasons)."""

        target = self.target(kind, letter, beta)
        return sum(target) <= self.cutoff

    def action(self, kind: str, letter: Letter, beta: Beta) -> Optional[DomainMatrix]:
        return self.actions.get((kind, letter, tuple(beta)))

    def act(self, kind: str, letter: Letter, beta: Beta, vector: DomainMatrix) -> Optional[DomainMatrix]:
        """Apply a generator to a column vector; None means the image is zero."""

        matrix = self.action(kind, letter, beta)
        if matrix is None:
            return None
        return matrix.matmul(vector)

    def torus_scalar(self, torus: Sequence[int], beta: Sequence[int]) -> RationalFunction:
        return q_power(pair_torus(torus, self.weight(beta)))

    def character(self) -> Character:
        return Character(
            highest=self.highest,
            cutoff=self.cutoff,
            multiplicities={beta: dim for beta, dim in self.dims.items() if dim},
        )


def build_verma(algebra: QuantumAlgebra, highest: Weight, cutoff: int | None = None) -> TruncatedModule:
    """M(lambda) truncated at the given height: basis U-_{-beta} v for every beta."""

    cutoff = algebra.cutoff if cutoff is None else cutoff
    if cutoff > algebra.cutoff:
        raise CutoffExceeded(f"module cutoff {cutoff} is above the algebra cutoff {algebra.cutoff}")
    datum = algebra.datum
    module = TruncatedModule(datum, highest, cutoff, title=f"M{highest.h_values}")
    module.algebra = algebra
    for beta in degrees_up_to(datum.rank, cutoff):
        module.words[beta] = algebra.basis.words(beta)
        module.dims[beta] = len(module.words[beta])

    for beta in module.weights():
        source = module.words[beta]
        if not source:
            continue
        for letter in module.letters():
            up = module.target("f", letter, beta)
            if sum(up) <= cutoff and module.dims[up]:
                index = {word: k for k, word in enumerate(module.words[up])}
                rows = _zeros(len(index), len(source))
                for column, word in enumerate(source):
                    for basis_word, value in algebra.basis.reduce((letter,) + word).items():
                        rows[index[basis_word]][column] += value
                module.actions[("f", letter, beta)] = _matrix(rows, len(source))

            down = module.target("e", letter, beta)
            if min(down) >= 0 and module.dims[down]:
                index = {word: k for k, word in enumerate(module.words[down])}
                rows = _zeros(len(index), len(source))
                for column, word in enumerate(source):
                    for (fword, torus, eword), value in algebra.multiply_words((letter,), word).items():
                        if eword:
                            continue
                        rows[index[fword]][column] += value * q_power(pair_torus(torus, highest))
                module.actions[("e", letter, beta)] = _matrix(rows, len(source))
    logger.debug("built %s with %d weight spaces", module.title, len(module.dims))
    return module


def word_vector(module: TruncatedModule, word: FreeMonomial) -> Tuple[Beta, DomainMatrix]:
    """Coordinates of (word) v_lambda in a Verma module."""

    algebra = module.algebra
    if algebra is None:
        raise ValueError(f"{module.title} is not a Verma module")
    beta = algebra.free.degree(tuple(word))
    index = {w: k for k, w in enumerate(module.words[beta])}
    column = _zeros(len(index), 1)
    for basis_word, value in algebra.basis.reduce(tuple(word)).items():
        column[index[basis_word]][0] += value
    return beta, _matrix(column, 1)


def contravariant_gram(module: TruncatedModule, beta: Sequence[int]) -> DomainMatrix:
    """F(x v, y v) over the monomial basis of one weight space of a Verma module.

    Row a is phi(x_a) applied to each basis vector: for x_a = f_{x1} ... f_{xr} the e-letters
    act starting from e_{x1}, and the result is read off at v_lambda.
    """

    beta = tuple(beta)
    cached = module._grams.get(beta)
    if cached is not None:
        return cached
    words = module.words[beta]
    size = len(words)
    rows: List[List[RationalFunction]] = []
    for word in words:
        current = beta
        chain: Optional[DomainMatrix] = DomainMatrix.eye(size, QF_DOMAIN).to_dense()
        for letter in word:
            matrix = module.action("e", letter, current)
            current = module.target("e", letter, current)
            if matrix is None:
                chain = None
                break
            chain = matrix.matmul(chain)
        rows.append(chain.to_list()[0] if chain is not None else [QF.zero] * size)
    gram = _matrix(rows, size)
    module._grams[beta] = gram
    return gram


def irreducible_quotient(module: TruncatedModule) -> TruncatedModule:
    """V(lambda) as M(lambda) modulo the radical of the contravariant form."""

    quotient = TruncatedModule(module.datum, module.highest, module.cutoff, title=f"V{module.highest.h_values}")
    quotient.parent = module
    quotient.algebra = module.algebra
    lifts: Dict[Beta, DomainMatrix] = {}
    for beta in module.weights():
        size = module.dims[beta]
        if not size:
            quotient.dims[beta] = 0
            continue
        gram = contravariant_gram(module, beta)
        _, pivots = gram.rref()
        pivots = list(pivots)
        quotient.dims[beta] = len(pivots)
        if not pivots:
            continue
        block = gram.extract(pivots, pivots)
        quotient.projections[beta] = block.inv().matmul(gram.extract(pivots, list(range(size))))
        lift = _zeros(size, len(pivots))
        for column, pivot in enumerate(pivots):
            lift[pivot][column] = QF.one
        lifts[beta] = _matrix(lift, len(pivots))

    for (kind, letter, beta), matrix in module.actions.items():
        target = module.target(kind, letter, beta)
        if quotient.dims.get(beta) and quotient.dims.get(target):
            projected = quotient.projections[target].matmul(matrix).matmul(lifts[beta])
            if not _is_zero_matrix(projected):
                quotient.actions[(kind, letter, beta)] = projected
    logger.debug("quotient %s has dims %s", quotient.title, quotient.dims)
    return quotient


def vanishes_in_quotient(quotient: TruncatedModule, word: FreeMonomial) -> bool:
    """Whether (word) v_lambda maps to zero in V(lambda)."""

    beta, vector = word_vector(quotient.parent, word)
    if not quotient.dims.get(beta):
        return True
    return _is_zero_matrix(quotient.projections[beta].matmul(vector))


def _check(name: str, failures: List[str], inconclusive: int = 0, note: str = "") -> ConditionCheck:
    detail = "; ".join(failures[:5]) if failures else note
    return ConditionCheck(name=name, passed=not failures, detail=detail, inconclusive=inconclusive)


def check_prop42(quotient: TruncatedModule) -> ModuleReport:
    """Annihilation of the highest-weight vector of V(lambda) by the expected lowering words."""

    datum = quotient.datum
    highest = quotient.highest
    if not is_dominant(datum, highest):
        raise ValueError(f"highest weight {highest.h_values} is not dominant")
    if quotient.parent is None:
        raise ValueError(f"{quotient.title} is not an irreducible quotient")
    report = ModuleReport(title=f"highest-weight annihilation for {quotient.title}", cutoff=quotient.cutoff)
    for i in range(datum.rank):
        node = datum.nodes[i]
        pairing = highest.h_values[i]
        if datum.is_real(i):
            power = pairing + 1
            if power > quotient.cutoff:
                report.checks.append(ConditionCheck(f"f[{node}]^{power} v = 0", True, "beyond cutoff", 1))
                continue
            failures = [] if vanishes_in_quotient(quotient, ((i, 1),) * power) else [f"f[{node}]^{power} v != 0"]
            report.checks.append(_check(f"f[{node}]^{power} v = 0", failures))
        elif pairing == 0:
            failures = [
                f"f[{node},{level}] v != 0"
                for level in range(1, quotient.cutoff + 1)
                if not vanishes_in_quotient(quotient, ((i, level),))
            ]
            report.checks.append(_check(f"f[{node},l] v = 0", failures))
        else:
            failures = [] if not vanishes_in_quotient(quotient, ((i, 1),)) else [f"f[{node},1] v = 0"]
            report.checks.append(_check(f"f[{node},1] v != 0", failures))
    return report


def _imaginary_checks(module: TruncatedModule) -> Tuple[List[str], List[str], List[str], List[str]]:
    datum = module.datum
    negative, nonempty, f_alive, e_alive = [], [], [], []
    for beta in module.weights():
        if not module.dimension(beta):
            continue
        mu = module.weight(beta)
        for i in datum.imaginary_nodes():
            node = datum.nodes[i]
            pairing = mu.h_values[i]
            if pairing < 0:
                negative.append(f"<h_{node}, mu> = {pairing} at beta {beta}")
            for level in module.levels(i):
                if pairing == 0:
                    below = module.target("f", (i, level), beta)
                    if sum(below) <= module.cutoff and module.dimension(below):
                        nonempty.append(f"weight space at beta {below} is nonzero")
                    if module.known("f", (i, level), beta) and module.action("f", (i, level), beta) is not None:
                        matrix = module.action("f", (i, level), beta)
                        if not _is_zero_matrix(matrix):
                            f_alive.append(f"f[{node},{level}] acts at beta {beta}")
                if pairing <= -level * datum.a[i][i]:
                    matrix = module.action("e", (i, level), beta)
                    if matrix is not None and not _is_zero_matrix(matrix):
                        e_alive.append(f"e[{node},{level}] acts at beta {beta}")
    return negative, nonempty, f_alive, e_alive


def check_imaginary_weights(module: TruncatedModule) -> ModuleReport:
    """Constraints on imaginary pairings of the weights of V(lambda)."""

    negative, nonempty, f_alive, e_alive = _imaginary_checks(module)
    report = ModuleReport(title=f"imaginary weight constraints for {module.title}", cutoff=module.cutoff)
    report.checks.append(_check("imaginary pairings nonnegative", negative))
    report.checks.append(_check("zero pairing leaves nothing below", nonempty))
    report.checks.append(_check("zero pairing kills f[i,l]", f_alive))
    report.checks.append(_check("small pairing kills e[i,l]", e_alive))
    return report


def maximal_vectors(
    module: TruncatedModule, beta: Sequence[int], letters: Iterable[Letter] | None = None
) -> List[List[RationalFunction]]:
    """Basis of the joint kernel of the e-actions at one weight space (rows are coordinate vectors)."""

    beta = tuple(beta)
    size = module.dimension(beta)
    if not size:
        return []
    letters = module.letters() if letters is None else list(letters)
    blocks = [module.action("e", letter, beta) for letter in letters]
    blocks = [block for block in blocks if block is not None]
    if not blocks:
        return DomainMatrix.eye(size, QF_DOMAIN).to_dense().to_list()
    stacked = blocks[0].vstack(*blocks[1:]) if len(blocks) > 1 else blocks[0]
    kernel = stacked.to_dense().nullspace()
    return kernel.to_list() if kernel.shape[0] else []


def check_oint(module: TruncatedModule) -> ModuleReport:
    """Conditions of the integrable category, each checked inside the truncation."""

    datum = module.datum
    report = ModuleReport(title=f"integrability checks for {module.title}", cutoff=module.cutoff)
    report.checks.append(
        ConditionCheck("finite weight spaces", True, f"{sum(1 for d in module.dims.values() if d)} nonzero spaces")
    )
    below = [f"beta {beta}" for beta in module.weights() if module.dimension(beta) and min(beta) < 0]
    report.checks.append(_check("weights below the highest weight", below))

    failures: List[str] = []
    inconclusive = 0
    for i in datum.real_nodes():
        node = datum.nodes[i]
        for beta in module.weights():
            if not module.dimension(beta):
                continue
            pairing = module.weight(beta).h_values[i]
            for row in maximal_vectors(module, beta, [(i, 1)]):
                if pairing < 0:
                    failures.append(f"e[{node}]-kernel vector at beta {beta} has pairing {pairing}")
                    continue
                if sum(beta) + pairing + 1 > module.cutoff:
                    inconclusive += 1
                    continue
                vector: Optional[DomainMatrix] = _matrix([[value] for value in row], 1)
                current = beta
                for _ in range(pairing + 1):
                    vector = module.act("f", (i, 1), current, vector)
                    current = module.target("f", (i, 1), current)
                    if vector is None:
                        break
                if vector is not None and not _is_zero_matrix(vector):
                    failures.append(f"f[{node}]^{pairing + 1} does not kill a string top at beta {beta}")
    report.checks.append(_check("real f locally nilpotent", failures, inconclusive))

    negative, _, f_alive, e_alive = _imaginary_checks(module)
    report.checks.append(_check("imaginary pairings nonnegative", negative))
    report.checks.append(_check("zero pairing kills f[i,l]", f_alive))
    report.checks.append(_check("small pairing kills e[i,l]", e_alive))
    return report


def _kron_into(
    rows: List[List[RationalFunction]],
    left: List[List[RationalFunction]],
    right: List[List[RationalFunction]],
    scalar: RationalFunction,
    row_offset: int,
    column_offset: int,
    right_rows: int,
    right_columns: int,
) -> None:
    for r1, left_row in enumerate(left):
        for c1, a in enumerate(left_row):
            if not a:
                continue
            for r2, right_row in enumerate(right):
                for c2, b in enumerate(right_row):
                    if b:
                        row, column = row_offset + r1 * right_rows + r2, column_offset + c1 * right_columns + c2
                        rows[row][column] += scalar * a * b


def _factor_action(module: TruncatedModule, kind: str, i: int, level: int, beta: Beta):
    """Action as a nested list, the identity for level 0 and None for the zero map."""

    size = module.dimension(beta)
    if level == 0:
        return DomainMatrix.eye(size, QF_DOMAIN).to_dense().to_list()
    matrix = module.action(kind, (i, level), beta)
    return None if matrix is None else matrix.to_list()


def tensor(first: TruncatedModule, second: TruncatedModule, cutoff: int | None = None) -> TruncatedModule:
    """Tensor product with generators acting through the co-multiplication."""

    cutoff = min(first.cutoff, second.cutoff) if cutoff is None else cutoff
    if cutoff > min(first.cutoff, second.cutoff):
        raise CutoffExceeded("tensor cutoff exceeds a factor's cutoff")
    datum = first.datum
    module = TruncatedModule(
        datum, first.highest + second.highest, cutoff, title=f"({first.title} (x) {second.title})"
    )
    blocks: Dict[Beta, List[Tuple[Beta, Beta, int]]] = {}
    for beta in degrees_up_to(datum.rank, cutoff):
        offset = 0
        entries = []
        for b1 in degrees_up_to(datum.rank, sum(beta)):
            b2 = tuple(x - y for x, y in zip(beta, b1))
            if min(b2) < 0:
                continue
            entries.append((b1, b2, offset))
            offset += first.dimension(b1) * second.dimension(b2)
        blocks[beta] = entries
        module.dims[beta] = offset
    module.blocks = blocks

    for beta in module.weights():
        if not module.dims[beta]:
            continue
        for letter in module.letters():
            i, level = letter
            exponent = node_q_exponent(datum, i)
            for kind in ("f", "e"):
                target = module.target(kind, letter, beta)
                if sum(target) > cutoff or min(target) < 0 or not module.dims[target]:
                    continue
                offsets = {(b1, b2): offset for b1, b2, offset in blocks[target]}
                rows = _zeros(module.dims[target], module.dims[beta])
                for b1, b2, offset in blocks[beta]:
                    d1, d2 = first.dimension(b1), second.dimension(b2)
                    if not d1 or not d2:
                        continue
                    for m in range(level + 1):
                        n = level - m
                        sign = 1 if kind == "f" else -1
                        t1, t2 = _shift(b1, i, sign * m), _shift(b2, i, sign * n)
                        if min(t1) < 0 or min(t2) < 0:
                            continue
                        e1, e2 = first.dimension(t1), second.dimension(t2)
                        if not e1 or not e2:
                            continue
                        left = _factor_action(first, kind, i, m, b1)
                        right = _factor_action(second, kind, i, n, b2)
                        if left is None or right is None:
                            continue
                        s_i = datum.s[i]
                        if kind == "f":
                            scalar = q_power(-exponent * m * n + n * s_i * first.weight(b1).h_values[i])
                        else:
                            scalar = q_power(exponent * m * n - m * s_i * second.weight(t2).h_values[i])
                        _kron_into(rows, left, right, scalar, offsets[(t1, t2)], offset, e2, d2)
                matrix = _matrix(rows, module.dims[beta])
                if not _is_zero_matrix(matrix):
                    module.actions[(kind, letter, beta)] = matrix
    logger.debug("tensor %s has dims %s", module.title, module.dims)
    return module


def decompose(
    module: TruncatedModule,
    table: RootMultiplicityTable | None = None,
    rebuild: Callable[[int], TruncatedModule] | None = None,
) -> DecompositionReport:
    """Split a module of the integrable category into irreducibles by scanning maximal vectors from the top.

    ``rebuild(n)`` returns the same module truncated at height n. When given, weights whose multiplicities
    disagree are checked again at cutoff + 1 and only mismatches that persist are reported.
    """

    integrability = check_oint(module)
    if not integrability.passed:
        failed = ", ".join(check.name for check in integrability.checks if not check.passed)
        raise ValueError(f"{module.title} is not in the integrable category: {failed}")
    report, missing = _scan_components(module, table)
    if report.mismatches and rebuild is not None and not missing:
        _recheck_mismatches(report, module, rebuild)
    if report.mismatches:
        logger.warning("decomposition of %s leaves character mismatches at %s", module.title, report.mismatches)
    return report


def _recheck_mismatches(
    report: DecompositionReport, module: TruncatedModule, rebuild: Callable[[int], TruncatedModule]
) -> None:
    try:
        larger = rebuild(module.cutoff + 1)
    except CutoffExceeded as exc:
        report.note = f"{report.note}; mismatches not re-checked: {exc}"
        return
    rerun, _ = _scan_components(larger, None)
    persistent = [beta for beta in report.mismatches if beta in rerun.mismatches]
    cleared = [beta for beta in report.mismatches if beta not in persistent]
    if cleared:
        report.note = f"{report.note}; truncation artifacts cleared at cutoff {larger.cutoff}: {cleared}"
    report.mismatches = persistent
    report.character_matches = not persistent


def _scan_components(
    module: TruncatedModule, table: RootMultiplicityTable | None
) -> Tuple[DecompositionReport, List[Beta]]:
    datum = module.datum
    cutoff = module.cutoff
    if table is None or table.cutoff < cutoff:
        table = root_multiplicities(datum, cutoff)
    report = DecompositionReport(
        cutoff=cutoff, note="maximal vectors tested against every e[i,l] whose target lies in the truncation"
    )
    expected: Dict[Beta, int] = {}
    missing: List[Beta] = []
    for beta in module.weights():
        if not module.dimension(beta):
            continue
        count = len(maximal_vectors(module, beta))
        if not count:
            continue
        weight = module.weight(beta)
        report.components.append(Component(beta=beta, weight=weight, multiplicity=count))
        try:
            piece = character(datum, weight, cutoff - sum(beta), table=table)
        except ValueError as exc:
            missing.append(beta)
            report.character_matches = False
            report.note = f"{report.note}; no character for component at beta {beta}: {exc}"
            continue
        for gamma, mult in piece.multiplicities.items():
            key = tuple(x + y for x, y in zip(beta, gamma))
            expected[key] = expected.get(key, 0) + count * mult

    report.mismatches = [beta for beta in module.weights() if module.dimension(beta) != expected.get(beta, 0)]
    if report.mismatches:
        report.character_matches = False
    return report, missing
