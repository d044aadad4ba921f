"""The algebra U: graded bases of U-/U+, triangular normal form, co-multiplication and involutions."""

from __future__ import annotations

from itertools import product
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .cartan import node_q_exponent, require_valid, torus_root_pairing
from .config import cutoff_limit
from .errors import CutoffExceeded
from .freealg import FreeAlgebra, FreeElement, FreeMonomial, Letter, TauTable
from .log import get_logger
from .qfield import QF, QF_DOMAIN, RationalFunction, q_binomial, q_power, rf, to_text
from .types import Beta, CartanDatum

logger = get_logger(__name__)

Torus = Tuple[int, ...]
Term = Tuple[FreeMonomial, Torus, FreeMonomial]
WordLetter = Tuple  # ("e", i, l), ("f", i, l) or ("t", torus)

SCHEDULES = ("left", "right")


def _accumulate(target: Dict, key, value) -> None:
    total = target.get(key, QF.zero) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


class AlgebraElement(dict):
    """Normal form: (f-basis word, torus exponents, e-basis word) -> coefficient."""

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        result = dict(self)
        for key, value in other.items():
            _accumulate(result, key, value)
        return AlgebraElement(result)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def scale(self, factor) -> "AlgebraElement":
        factor = rf(factor)
        if not factor:
            return AlgebraElement()
        return AlgebraElement({key: factor * value for key, value in self.items()})

    def is_zero(self) -> bool:
        return not self

    def torus_part(self) -> Dict[Torus, RationalFunction]:
        """Projection onto pure torus terms."""

        return {torus: value for (fword, torus, eword), value in self.items() if not fword and not eword}


class TensorElement(dict):
    """Element of U (x) U: (Term, Term) -> coefficient."""

    def __add__(self, other: "TensorElement") -> "TensorElement":
        result = dict(self)
        for key, value in other.items():
            _accumulate(result, key, value)
        return TensorElement(result)

    def scale(self, factor) -> "TensorElement":
        factor = rf(factor)
        if not factor:
            return TensorElement()
        return TensorElement({key: factor * value for key, value in self.items()})

    def is_zero(self) -> bool:
        return not self


def degrees_up_to(rank: int, cutoff: int) -> List[Beta]:
    """All beta in Q+ with height <= cutoff, ordered by height then lexicographically."""

    found = [beta for beta in product(range(cutoff + 1), repeat=rank) if sum(beta) <= cutoff]
    return sorted(found, key=lambda beta: (sum(beta), beta))


class GradedBasis:
    """Monomial bases of U-_{-beta} for |beta| <= cutoff, by elimination modulo the Serre ideal."""

    def __init__(self, free: FreeAlgebra, cutoff: int) -> None:
        self.free = free
        self.datum = free.datum
        self.cutoff = cutoff
        self.degrees = degrees_up_to(self.datum.rank, cutoff)
        self._words: Dict[Beta, List[FreeMonomial]] = {}
        self._reduction: Dict[FreeMonomial, Dict[FreeMonomial, RationalFunction]] = {}
        self._ideal_rows: Dict[Beta, List[Dict[FreeMonomial, RationalFunction]]] = {}
        self.relations = self._relations()
        self._build()

    def _relations(self) -> List[FreeElement]:
        datum = self.datum
        relations: List[FreeElement] = []
        for i in datum.real_nodes():
            f_i = ((i, 1),)
            for j in range(datum.rank):
                if j == i:
                    continue
                levels = [1] if datum.is_real(j) else range(1, self.cutoff + 1)
                for level in levels:
                    power = 1 - level * datum.a[i][j]
                    if power + level > self.cutoff:
                        continue
                    relation = FreeElement()
                    for k in range(power + 1):
                        word = f_i * (power - k) + ((j, level),) + f_i * k
                        relation = relation + FreeElement.monomial(word, (-1) ** k * q_binomial(power, k, datum.s[i]))
                    relations.append(relation)
        letters = self.free.letters(self.cutoff)
        for x in letters:
            for y in letters:
                if x >= y or datum.a[x[0]][y[0]] != 0 or x[1] + y[1] > self.cutoff:
                    continue
                relations.append(FreeElement.monomial((x, y)) - FreeElement.monomial((y, x)))
        return relations

    def _build(self) -> None:
        by_degree: Dict[Beta, List[FreeElement]] = {}
        for relation in self.relations:
            word = next(iter(relation))
            by_degree.setdefault(self.free.degree(word), []).append(relation)
        letters = self.free.letters(self.cutoff)

        for beta in self.degrees:
            monomials = self.free.monomials(beta)
            column = {word: index for index, word in enumerate(monomials)}
            rows: List[Dict[FreeMonomial, RationalFunction]] = []
            for gamma, relations in by_degree.items():
                rest = tuple(b - g for b, g in zip(beta, gamma))
                if any(k < 0 for k in rest):
                    continue
                for tail in self.free.monomials(rest):
                    for relation in relations:
                        rows.append({word + tail: value for word, value in relation.items()})
            for letter in letters:
                rest = list(beta)
                rest[letter[0]] -= letter[1]
                if rest[letter[0]] < 0:
                    continue
                for row in self._ideal_rows.get(tuple(rest), []):
                    rows.append({(letter,) + word: value for word, value in row.items()})

            pivots: Tuple[int, ...] = ()
            reduced_rows: List[Dict[int, RationalFunction]] = []
            if rows:
                matrix = DomainMatrix(
                    {r: {column[word]: value for word, value in row.items()} for r, row in enumerate(rows)},
                    (len(rows), len(monomials)),
                    QF_DOMAIN,
                )
                echelon, pivots = matrix.rref()
                sdm = echelon.to_sdm()
                reduced_rows = [dict(sdm.get(r, {})) for r in range(len(pivots))]

            pivot_set = set(pivots)
            self._words[beta] = [word for index, word in enumerate(monomials) if index not in pivot_set]
            self._ideal_rows[beta] = [
                {monomials[index]: value for index, value in row.items()} for row in reduced_rows
            ]
            for word in self._words[beta]:
                self._reduction[word] = {word: QF.one}
            for pivot, row in zip(pivots, reduced_rows):
                self._reduction[monomials[pivot]] = {
                    monomials[index]: -value for index, value in row.items() if index != pivot
                }
            logger.debug("degree %s: %d monomials, basis of size %d", beta, len(monomials), len(self._words[beta]))

    def words(self, beta: Sequence[int]) -> List[FreeMonomial]:
        beta = tuple(beta)
        if sum(beta) > self.cutoff:
            raise CutoffExceeded(f"degree {beta} exceeds the height cutoff {self.cutoff}")
        if any(k < 0 for k in beta):
            return []
        return self._words[beta]

    def dimension(self, beta: Sequence[int]) -> int:
        return len(self.words(beta))

    def reduce(self, word: FreeMonomial) -> Dict[FreeMonomial, RationalFunction]:
        """Coordinates of a raw monomial over the basis words of its degree."""

        cached = self._reduction.get(word)
        if cached is not None:
            return cached
        beta = self.free.degree(word)
        if sum(beta) > self.cutoff:
            raise CutoffExceeded(f"degree {beta} exceeds the height cutoff {self.cutoff}")
        raise KeyError(f"word {word} has no reduction")

    def reduce_element(self, x: FreeElement) -> FreeElement:
        result: Dict[FreeMonomial, RationalFunction] = {}
        for word, coefficient in x.items():
            for basis_word, value in self.reduce(word).items():
                _accumulate(result, basis_word, coefficient * value)
        return FreeElement(result)


def build_graded_basis(datum: CartanDatum, tau: TauTable | None = None, cutoff: int = 4) -> GradedBasis:
    require_valid(datum)
    if cutoff > cutoff_limit():
        raise CutoffExceeded(f"cutoff {cutoff} is above the configured limit {cutoff_limit()}")
    return GradedBasis(FreeAlgebra(datum, tau or TauTable(datum)), cutoff)


class QuantumAlgebra:
    """U for one datum, tau table and height cutoff; bases and memo tables are filled on construction."""

    def __init__(self, datum: CartanDatum, tau: TauTable | None = None, cutoff: int = 4) -> None:
        require_valid(datum)
        if cutoff > cutoff_limit():
            raise CutoffExceeded(f"cutoff {cutoff} is above the configured limit {cutoff_limit()}")
        self.datum = datum
        self.tau = tau or TauTable(datum)
        self.cutoff = cutoff
        self.free = FreeAlgebra(datum, self.tau)
        self.basis = GradedBasis(self.free, cutoff)
        self.zero_torus: Torus = (0,) * (2 * datum.rank)
        self._order_memo: Dict[str, Dict[Tuple[FreeMonomial, FreeMonomial], Dict[Term, RationalFunction]]] = {
            schedule: {} for schedule in SCHEDULES
        }
        self._term_products: Dict[Tuple[Term, Term], Dict[Term, RationalFunction]] = {}

    # torus helpers

    def k_torus(self, i: int, power: int = 1) -> Torus:
        exponents = [0] * (2 * self.datum.rank)
        exponents[i] = power * self.datum.s[i]
        return tuple(exponents)

    @staticmethod
    def add_torus(*tori: Torus) -> Torus:
        return tuple(sum(values) for values in zip(*tori))

    def _pair(self, torus: Torus, word: FreeMonomial) -> int:
        return torus_root_pairing(self.datum, torus, self.free.degree(word))

    # constructors

    def one(self) -> AlgebraElement:
        return self.scalar(1)

    def scalar(self, value) -> AlgebraElement:
        value = rf(value)
        return AlgebraElement({((), self.zero_torus, ()): value}) if value else AlgebraElement()

    def torus(self, exponents: Sequence[int]) -> AlgebraElement:
        exponents = tuple(int(x) for x in exponents)
        if len(exponents) != 2 * self.datum.rank:
            raise ValueError(f"torus exponents need {2 * self.datum.rank} entries, got {len(exponents)}")
        return AlgebraElement({((), exponents, ()): QF.one})

    def k_element(self, i: int, power: int = 1) -> AlgebraElement:
        return self.torus(self.k_torus(i, power))

    def _check_letter(self, i: int, level: int) -> Letter:
        if not 0 <= i < self.datum.rank:
            raise ValueError(f"node index {i} out of range")
        if level < 1 or (self.datum.is_real(i) and level != 1):
            raise ValueError(f"level {level} is not available at node {self.datum.nodes[i]}")
        return (i, level)

    def generator(self, kind: str, i: int, level: int = 1) -> AlgebraElement:
        letter = self._check_letter(i, level)
        if kind == "f":
            return self.f_word((letter,))
        if kind == "e":
            return self.e_word((letter,))
        raise ValueError(f"unknown generator kind {kind!r}")

    def f_word(self, word: FreeMonomial) -> AlgebraElement:
        return AlgebraElement(self._reduce_terms({(tuple(word), self.zero_torus, ()): QF.one}))

    def e_word(self, word: FreeMonomial) -> AlgebraElement:
        return AlgebraElement(self._reduce_terms({((), self.zero_torus, tuple(word)): QF.one}))

    def _letter_element(self, letter: WordLetter) -> AlgebraElement:
        if letter[0] == "t":
            return self.torus(letter[1])
        return self.generator(letter[0], letter[1], letter[2])

    def from_word(self, letters: Iterable[WordLetter], schedule: str = "left") -> AlgebraElement:
        """Normal form of a product of generators given as ("e", i, l), ("f", i, l) or ("t", torus)."""

        result = self.one()
        for letter in letters:
            result = self.multiply(result, self._letter_element(letter), schedule=schedule)
        return result

    # reduction

    def _reduce_terms(self, raw: Dict[Term, RationalFunction]) -> Dict[Term, RationalFunction]:
        result: Dict[Term, RationalFunction] = {}
        for (fword, torus, eword), coefficient in raw.items():
            if not coefficient:
                continue
            f_coords = self.basis.reduce(fword)
            e_coords = self.basis.reduce(eword)
            for f_basis, f_value in f_coords.items():
                for e_basis, e_value in e_coords.items():
                    _accumulate(result, (f_basis, torus, e_basis), coefficient * f_value * e_value)
        return result

    def _reorder_letters(self, e_letter: Letter, f_letter: Letter, schedule: str) -> Dict[Term, RationalFunction]:
        """e_{jl} f_{ik} in raw normal order."""

        j, l = e_letter
        i, k = f_letter
        if i != j:
            return {((f_letter,), self.zero_torus, (e_letter,)): QF.one}
        exponent = node_q_exponent(self.datum, i)
        raw: Dict[Term, RationalFunction] = {}
        for n in range(min(k, l) + 1):
            m, s = k - n, l - n
            fword = ((i, m),) if m else ()
            eword = ((i, s),) if s else ()
            value = q_power(-exponent * n * (m + s)) * self.tau(i, n)
            _accumulate(raw, (fword, self.k_torus(i, n), eword), value)
        for n in range(1, min(k, l) + 1):
            m, s = k - n, l - n
            fword = ((i, m),) if m else ()
            eword = ((i, s),) if s else ()
            value = q_power(-exponent * n * (m - s)) * self.tau(i, n)
            shift = self.k_torus(i, -n)
            for (f_inner, torus, e_inner), inner in self._order(eword, fword, schedule).items():
                factor = q_power(-self._pair(shift, f_inner))
                _accumulate(raw, (f_inner, self.add_torus(shift, torus), e_inner), -value * inner * factor)
        tau_zero = self.tau(i, 0)
        return {key: value / tau_zero for key, value in raw.items()}

    def _order(self, eword: FreeMonomial, fword: FreeMonomial, schedule: str = "left") -> Dict[Term, RationalFunction]:
        """Normal form of (e-word)(f-word); the schedule picks which end is split first."""

        if not eword or not fword:
            return self._reduce_terms({(fword, self.zero_torus, eword): QF.one})
        memo = self._order_memo[schedule]
        key = (eword, fword)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if len(eword) == 1 and len(fword) == 1:
            result = self._reduce_terms(self._reorder_letters(eword[0], fword[0], schedule))
        elif len(eword) > 1:
            split = 1 if schedule == "left" else len(eword) - 1
            result = self._split_e(eword[:split], eword[split:], fword, schedule)
        else:
            split = 1 if schedule == "left" else len(fword) - 1
            result = self._split_f(eword, fword[:split], fword[split:], schedule)
        memo[key] = result
        return result

    def _split_e(self, outer: FreeMonomial, inner: FreeMonomial, fword: FreeMonomial, schedule: str):
        raw: Dict[Term, RationalFunction] = {}
        for (f1, h1, e1), c1 in self._order(inner, fword, schedule).items():
            for (f2, h2, e2), c2 in self._order(outer, f1, schedule).items():
                factor = q_power(-self._pair(h1, e2))
                _accumulate(raw, (f2, self.add_torus(h2, h1), e2 + e1), c1 * c2 * factor)
        return self._reduce_terms(raw)

    def _split_f(self, eword: FreeMonomial, left: FreeMonomial, right: FreeMonomial, schedule: str):
        raw: Dict[Term, RationalFunction] = {}
        for (f1, h1, e1), c1 in self._order(eword, left, schedule).items():
            for (f2, h2, e2), c2 in self._order(e1, right, schedule).items():
                factor = q_power(-self._pair(h1, f2))
                _accumulate(raw, (f1 + f2, self.add_torus(h1, h2), e2), c1 * c2 * factor)
        return self._reduce_terms(raw)

    def reorder_ef(self, i: int, level: int, k: int) -> AlgebraElement:
        """Normal form of e_{i,level} f_{i,k}."""

        e_letter = self._check_letter(i, level)
        f_letter = self._check_letter(i, k)
        return AlgebraElement(self._order((e_letter,), (f_letter,)))

    def _multiply_terms(self, t1: Term, t2: Term, schedule: str) -> Dict[Term, RationalFunction]:
        key = (t1, t2)
        if schedule == "left" and key in self._term_products:
            return self._term_products[key]
        f1, h1, e1 = t1
        f2, h2, e2 = t2
        raw: Dict[Term, RationalFunction] = {}
        for (fword, torus, eword), value in self._order(e1, f2, schedule).items():
            factor = q_power(-self._pair(h1, fword) - self._pair(h2, eword))
            _accumulate(raw, (f1 + fword, self.add_torus(h1, torus, h2), eword + e2), value * factor)
        result = self._reduce_terms(raw)
        if schedule == "left":
            self._term_products[key] = result
        return result

    def multiply(self, x: AlgebraElement, y: AlgebraElement, schedule: str = "left") -> AlgebraElement:
        result: Dict[Term, RationalFunction] = {}
        for t1, c1 in x.items():
            for t2, c2 in y.items():
                for key, value in self._multiply_terms(t1, t2, schedule).items():
                    _accumulate(result, key, c1 * c2 * value)
        return AlgebraElement(result)

    def multiply_words(self, eword: FreeMonomial, fword: FreeMonomial) -> AlgebraElement:
        return AlgebraElement(self._order(tuple(eword), tuple(fword)))

    # co-multiplication

    def _delta_letter(self, letter: WordLetter) -> TensorElement:
        zero = self.zero_torus
        if letter[0] == "t":
            torus = tuple(letter[1])
            return TensorElement({(((), torus, ()), ((), torus, ())): QF.one})
        kind, i, level = letter
        self._check_letter(i, level)
        exponent = node_q_exponent(self.datum, i)
        terms: Dict[Tuple[Term, Term], RationalFunction] = {}
        for m in range(level + 1):
            n = level - m
            word_m = ((i, m),) if m else ()
            word_n = ((i, n),) if n else ()
            if kind == "f":
                key = ((word_m, self.k_torus(i, n), ()), (word_n, zero, ()))
                _accumulate(terms, key, q_power(-exponent * m * n))
            else:
                key = (((), zero, word_m), ((), self.k_torus(i, -m), word_n))
                _accumulate(terms, key, q_power(exponent * m * n))
        return TensorElement(terms)

    def tensor_multiply(self, x: TensorElement, y: TensorElement) -> TensorElement:
        result: Dict[Tuple[Term, Term], RationalFunction] = {}
        for (a, b), c1 in x.items():
            for (c, d), c2 in y.items():
                left = self._multiply_terms(a, c, "left")
                right = self._multiply_terms(b, d, "left")
                for t1, v1 in left.items():
                    for t2, v2 in right.items():
                        _accumulate(result, (t1, t2), c1 * c2 * v1 * v2)
        return TensorElement(result)

    def comultiply_word(self, letters: Iterable[WordLetter]) -> TensorElement:
        """Delta of a product of generators, taken letter by letter."""

        zero = self.zero_torus
        result = TensorElement({(((), zero, ()), ((), zero, ())): QF.one})
        for letter in letters:
            result = self.tensor_multiply(result, self._delta_letter(letter))
        return result

    def comultiply(self, x: AlgebraElement) -> TensorElement:
        result = TensorElement()
        for (fword, torus, eword), coefficient in x.items():
            letters = [("f",) + letter for letter in fword] + [("t", torus)] + [("e",) + letter for letter in eword]
            result = result + self.comultiply_word(letters).scale(coefficient)
        return result

    def tensor_of(self, x: AlgebraElement, y: AlgebraElement) -> TensorElement:
        result: Dict[Tuple[Term, Term], RationalFunction] = {}
        for t1, c1 in x.items():
            for t2, c2 in y.items():
                _accumulate(result, (t1, t2), c1 * c2)
        return TensorElement(result)

    # involutions

    def omega(self, x: AlgebraElement) -> AlgebraElement:
        """Algebra involution e <-> f, q^h -> q^{-h}."""

        result = AlgebraElement()
        for (fword, torus, eword), coefficient in x.items():
            negated = tuple(-value for value in torus)
            image = self.multiply(self.multiply(self.e_word(fword), self.torus(negated)), self.f_word(eword))
            result = result + image.scale(coefficient)
        return result

    def phi(self, x: AlgebraElement) -> AlgebraElement:
        """Anti-involution e <-> f fixing q^h; reverses words and keeps normal order."""

        raw: Dict[Term, RationalFunction] = {}
        for (fword, torus, eword), coefficient in x.items():
            _accumulate(raw, (tuple(reversed(eword)), torus, tuple(reversed(fword))), coefficient)
        return AlgebraElement(self._reduce_terms(raw))

    # relations

    def relation_words(self, kind: str, params: Sequence[int], side: str = "f") -> List[Tuple[RationalFunction, List]]:
        """Defining relation as (coefficient, generator word) pairs whose sum is zero in U.

        kind "serre": params (i, j, l); "commuting": (i, k, j, l); "string": (i, k, l).
        """

        datum = self.datum
        if kind == "serre":
            i, j, level = params
            if not datum.is_real(i) or i == j:
                raise ValueError("serre relations need a real node i and a different node j")
            self._check_letter(j, level)
            power = 1 - level * datum.a[i][j]
            letter_i = (side, i, 1)
            return [
                (
                    rf((-1) ** k) * q_binomial(power, k, datum.s[i]),
                    [letter_i] * (power - k) + [(side, j, level)] + [letter_i] * k,
                )
                for k in range(power + 1)
            ]
        if kind == "commuting":
            i, k, j, level = params
            if datum.a[i][j] != 0:
                raise ValueError(f"commuting relation needs a_ij = 0, got {datum.a[i][j]}")
            x, y = (side, i, k), (side, j, level)
            return [(QF.one, [x, y]), (-QF.one, [y, x])]
        if kind == "string":
            i, k, level = params
            exponent = node_q_exponent(datum, i)
            words: List[Tuple[RationalFunction, List]] = []
            for n in range(min(k, level) + 1):
                m, s = k - n, level - n
                e_part = [("e", i, s)] if s else []
                f_part = [("f", i, m)] if m else []
                value = self.tau(i, n)
                words.append((q_power(exponent * n * (m - s)) * value, e_part + f_part + [("t", self.k_torus(i, -n))]))
                words.append((-q_power(-exponent * n * (m - s)) * value, f_part + e_part + [("t", self.k_torus(i, n))]))
            return words
        raise ValueError(f"unknown relation kind {kind!r}")

    def relation_residual(self, kind: str, params: Sequence[int], side: str = "f", schedule: str = "left"):
        """Normal form of the relation's left-minus-right side."""

        residual = AlgebraElement()
        for coefficient, word in self.relation_words(kind, params, side):
            residual = residual + self.from_word(word, schedule=schedule).scale(coefficient)
        return residual

    def delta_relation_residual(self, kind: str, params: Sequence[int], side: str = "f") -> TensorElement:
        """Delta applied word by word to the relation; zero when Delta respects it."""

        residual = TensorElement()
        for coefficient, word in self.relation_words(kind, params, side):
            residual = residual + self.comultiply_word(word).scale(coefficient)
        return residual

    def all_relation_checks(self) -> List[Tuple[str, Tuple[int, ...], bool]]:
        """Every relation that fits under the cutoff, with whether its residual vanishes."""

        datum = self.datum
        checks: List[Tuple[str, Tuple[int, ...], bool]] = []
        for i in datum.real_nodes():
            for j in range(datum.rank):
                if j == i:
                    continue
                for level in [1] if datum.is_real(j) else range(1, self.cutoff + 1):
                    if 1 - level * datum.a[i][j] + level > self.cutoff:
                        continue
                    for side in ("f", "e"):
                        params = (i, j, level)
                        residual = self.relation_residual("serre", params, side)
                        checks.append((f"serre-{side}", params, residual.is_zero()))
        for i in range(datum.rank):
            levels = [1] if datum.is_real(i) else range(1, self.cutoff + 1)
            for k in levels:
                for level in levels:
                    if k + level > self.cutoff:
                        continue
                    params = (i, k, level)
                    checks.append(("string", params, self.relation_residual("string", params).is_zero()))
        return checks

    def form_radical_report(self) -> List[Dict[str, object]]:
        """Per degree: rank of the Lusztig Gram matrix on raw monomials against dim U-."""

        report = []
        for beta in self.basis.degrees:
            rank = self.free.gram_matrix(beta).rank()
            dimension = self.basis.dimension(beta)
            report.append({"beta": list(beta), "dim": dimension, "gram_rank": rank, "matches": rank == dimension})
        return report

    # printing

    def format_torus(self, torus: Torus) -> str:
        n = self.datum.rank
        h_part, d_part = torus[:n], torus[n:]
        if not any(d_part) and all(h_part[i] % self.datum.s[i] == 0 for i in range(n)):
            factors = []
            for i in range(n):
                power = h_part[i] // self.datum.s[i]
                if power:
                    factors.append(f"K[{self.datum.nodes[i]}]" + ("" if power == 1 else f"^{power}"))
            return " ".join(factors)
        return "q[" + ",".join(str(x) for x in torus) + "]"

    def format_term(self, term: Term) -> str:
        fword, torus, eword = term
        nodes = self.datum.nodes
        parts = [f"f[{nodes[i]},{level}]" for i, level in fword]
        torus_text = self.format_torus(torus)
        if torus_text:
            parts.append(torus_text)
        parts.extend(f"e[{nodes[i]},{level}]" for i, level in eword)
        return " ".join(parts) or "1"

    def format_element(self, x: AlgebraElement) -> str:
        if not x:
            return "0"
        lines = []
        for term in sorted(x, key=lambda t: (len(t[0]), t[0], len(t[2]), t[2], t[1])):
            lines.append(f"({to_text(x[term])}) * {self.format_term(term)}")
        return "\n+ ".join(lines)
