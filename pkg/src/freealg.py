"""The free algebra on f_il: grading, twisted co-multiplication and the Lusztig form."""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .cartan import bilinear, node_q_exponent
from .config import tau_series_order
from .errors import MissingTauError
from .log import get_logger
from .qfield import QF, QF_DOMAIN, RationalFunction, check_tau_assumption, parse_rational_function, q_power, rf
from .types import Beta, CartanDatum

logger = get_logger(__name__)

Letter = Tuple[int, int]
FreeMonomial = Tuple[Letter, ...]


class TauTable:
    """tau_il values read from a datum (``"node,l"`` keys or ``"node,*"`` templates in q and l).

    Real nodes default to tau_i1 = 1/(1 - q_i^2); imaginary nodes must be configured.
    """

    def __init__(self, datum: CartanDatum, overrides: Dict[str, str] | None = None) -> None:
        self.datum = datum
        self._explicit: Dict[Letter, RationalFunction] = {}
        self._templates: Dict[int, str] = {}
        entries = dict(datum.tau)
        entries.update(overrides or {})
        for key, text in entries.items():
            node_label, _, level_text = str(key).partition(",")
            i = datum.node_index(node_label)
            if level_text.strip() == "*":
                self._templates[i] = text
                continue
            level = int(level_text)
            if level < 1:
                raise ValueError(f"tau key {key!r}: levels start at 1")
            self._explicit[(i, level)] = parse_rational_function(text)
        self._cache: Dict[Letter, RationalFunction] = {}

    def __call__(self, i: int, level: int) -> RationalFunction:
        if level == 0:
            return QF.one
        key = (i, level)
        if key in self._cache:
            return self._cache[key]
        if key in self._explicit:
            value = self._explicit[key]
        elif i in self._templates:
            value = parse_rational_function(self._templates[i], level=level)
        elif self.datum.is_real(i) and level == 1:
            value = QF.one / (QF.one - q_power(2 * self.datum.s[i]))
        else:
            raise MissingTauError(f"no tau configured for node {self.datum.nodes[i]} at level {level}")
        self._cache[key] = value
        return value

    def violations(self, max_level: int, order: int | None = None) -> List[Letter]:
        """Levels whose tau fails the 1 + q Z>=0[[q]] expansion test."""

        order = tau_series_order() if order is None else order
        failed = []
        for i in range(self.datum.rank):
            levels = [1] if self.datum.is_real(i) else range(1, max_level + 1)
            for level in levels:
                if not check_tau_assumption(self(i, level), order):
                    failed.append((i, level))
        return failed


def _clean(terms: Dict) -> Dict:
    return {key: value for key, value in terms.items() if value != 0}


class FreeElement(dict):
    """Finite sum of free monomials with coefficients in Q(q)."""

    @classmethod
    def monomial(cls, word: Sequence[Letter], coefficient=1) -> "FreeElement":
        return cls({tuple(word): rf(coefficient)})

    @classmethod
    def one(cls) -> "FreeElement":
        return cls.monomial(())

    def __add__(self, other: "FreeElement") -> "FreeElement":
        result = dict(self)
        for word, coefficient in other.items():
            result[word] = result.get(word, QF.zero) + coefficient
        return FreeElement(_clean(result))

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + other.scale(-1)

    def scale(self, factor) -> "FreeElement":
        factor = rf(factor)
        return FreeElement(_clean({word: factor * coefficient for word, coefficient in self.items()}))

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        result: Dict[FreeMonomial, RationalFunction] = {}
        for left, c1 in self.items():
            for right, c2 in other.items():
                word = left + right
                result[word] = result.get(word, QF.zero) + c1 * c2
        return FreeElement(_clean(result))


class TwistedTensor(dict):
    """Finite sum of pairs (a, b) standing for a (x) b."""


class FreeAlgebra:
    """Free algebra of a datum together with its co-multiplication and Lusztig form."""

    def __init__(self, datum: CartanDatum, tau: TauTable) -> None:
        self.datum = datum
        self.tau = tau
        self._degrees: Dict[FreeMonomial, Beta] = {}
        self._monomials: Dict[Beta, List[FreeMonomial]] = {}
        self._delta: Dict[FreeMonomial, TwistedTensor] = {(): TwistedTensor({((), ()): QF.one})}
        self._form: Dict[Tuple[FreeMonomial, FreeMonomial], RationalFunction] = {}

    def letters(self, max_level: int) -> List[Letter]:
        result = []
        for i in range(self.datum.rank):
            top = 1 if self.datum.is_real(i) else max_level
            result.extend((i, level) for level in range(1, top + 1))
        return result

    def degree(self, word: FreeMonomial) -> Beta:
        """Coefficients k_i with deg(word) = -sum k_i alpha_i."""

        cached = self._degrees.get(word)
        if cached is None:
            counts = [0] * self.datum.rank
            for i, level in word:
                counts[i] += level
            cached = tuple(counts)
            self._degrees[word] = cached
        return cached

    def monomials(self, beta: Sequence[int]) -> List[FreeMonomial]:
        """All words of degree -beta, graded by length then lexicographic on (node, level)."""

        beta = tuple(beta)
        if beta in self._monomials:
            return self._monomials[beta]
        if any(k < 0 for k in beta):
            return []
        if not any(beta):
            return [()]
        words: List[FreeMonomial] = []
        for i, k in enumerate(beta):
            if k == 0:
                continue
            top = 1 if self.datum.is_real(i) else k
            for level in range(1, top + 1):
                rest = list(beta)
                rest[i] -= level
                words.extend(((i, level),) + tail for tail in self.monomials(tuple(rest)))
        words.sort(key=lambda word: (len(word), word))
        self._monomials[beta] = words
        return words

    def _twist(self, left: FreeMonomial, right: FreeMonomial) -> RationalFunction:
        return q_power(-bilinear(self.datum, self.degree(left), self.degree(right)))

    def twisted_product(self, x: TwistedTensor, y: TwistedTensor) -> TwistedTensor:
        """(a1 (x) a2)(b1 (x) b2) = q^{-(deg a2, deg b1)} a1 b1 (x) a2 b2."""

        result: Dict[Tuple[FreeMonomial, FreeMonomial], RationalFunction] = {}
        for (a1, a2), c1 in x.items():
            for (b1, b2), c2 in y.items():
                key = (a1 + b1, a2 + b2)
                result[key] = result.get(key, QF.zero) + c1 * c2 * self._twist(a2, b1)
        return TwistedTensor(_clean(result))

    def letter_delta(self, letter: Letter) -> TwistedTensor:
        i, level = letter
        exponent = node_q_exponent(self.datum, i)
        terms = {}
        for m in range(level + 1):
            n = level - m
            left = ((i, m),) if m else ()
            right = ((i, n),) if n else ()
            terms[(left, right)] = q_power(-exponent * m * n)
        return TwistedTensor(terms)

    def delta_word(self, word: FreeMonomial) -> TwistedTensor:
        cached = self._delta.get(word)
        if cached is None:
            cached = self.twisted_product(self.letter_delta(word[0]), self.delta_word(word[1:]))
            self._delta[word] = cached
        return cached

    def delta(self, x: FreeElement) -> TwistedTensor:
        result: Dict[Tuple[FreeMonomial, FreeMonomial], RationalFunction] = {}
        for word, coefficient in x.items():
            for key, value in self.delta_word(word).items():
                result[key] = result.get(key, QF.zero) + coefficient * value
        return TwistedTensor(_clean(result))

    def iterated_delta(self, x: FreeElement, side: str = "left") -> Dict[Tuple[FreeMonomial, ...], RationalFunction]:
        """(delta (x) id) delta(x) for side="left", (id (x) delta) delta(x) for side="right"."""

        result: Dict[Tuple[FreeMonomial, ...], RationalFunction] = {}
        for (a, b), coefficient in self.delta(x).items():
            split = a if side == "left" else b
            for (u, v), value in self.delta_word(split).items():
                key = (u, v, b) if side == "left" else (a, u, v)
                result[key] = result.get(key, QF.zero) + coefficient * value
        return _clean(result)

    def _pair_with_letter(self, word: FreeMonomial, letter: Letter) -> RationalFunction:
        if len(word) == 1:
            return self.tau(*letter) if word[0] == letter else QF.zero
        return self._form_words((letter,), word)

    def _form_words(self, a: FreeMonomial, b: FreeMonomial) -> RationalFunction:
        """(a, b)_L by peeling the first letter of b: (a, y z) = (delta(a), y (x) z)."""

        if self.degree(a) != self.degree(b):
            return QF.zero
        if not b:
            return QF.one
        key = (a, b)
        cached = self._form.get(key)
        if cached is not None:
            return cached
        letter, rest = b[0], b[1:]
        target = self.degree((letter,))
        total = QF.zero
        for (left, right), coefficient in self.delta_word(a).items():
            if self.degree(left) != target:
                continue
            pairing = self._pair_with_letter(left, letter)
            if pairing:
                total += coefficient * pairing * self._form_words(right, rest)
        self._form[key] = total
        return total

    def lusztig_form(self, x: FreeElement, y: FreeElement) -> RationalFunction:
        total = QF.zero
        for a, c1 in x.items():
            for b, c2 in y.items():
                total += c1 * c2 * self._form_words(a, b)
        return total

    def tensor_form(self, t: TwistedTensor, y: FreeElement, z: FreeElement) -> RationalFunction:
        """(t, y (x) z)_L as the sum of products of component forms over the full expansion of t."""

        total = QF.zero
        for (a, b), coefficient in t.items():
            total += (
                coefficient
                * self.lusztig_form(FreeElement.monomial(a), y)
                * self.lusztig_form(FreeElement.monomial(b), z)
            )
        return total

    def hopf_sides(self, x: FreeElement, y: FreeElement, z: FreeElement) -> Tuple[RationalFunction, RationalFunction]:
        """Both sides of (x, yz)_L = (delta(x), y (x) z)_L."""

        return self.lusztig_form(x, y * z), self.tensor_form(self.delta(x), y, z)

    def gram_matrix(self, beta: Sequence[int]) -> DomainMatrix:
        words = self.monomials(beta)
        rows = [[self._form_words(a, b) for b in words] for a in words]
        logger.debug("Lusztig Gram matrix at degree %s has size %d", tuple(beta), len(words))
        return DomainMatrix(rows, (len(words), len(words)), QF_DOMAIN)
