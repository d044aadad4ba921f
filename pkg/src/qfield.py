"""Exact arithmetic in the rational-function field Q(q) plus q-combinatorics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List

from sympy import Symbol, sstr
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ, ZZ
from sympy.polys.fields import FracElement, field
from sympy.polys.ring_series import rs_mul, rs_series_inversion
from sympy.polys.rings import ring

RationalFunction = FracElement

QF, q = field("q", ZZ)
QF_DOMAIN = QF.to_domain()
Q_SYMBOL = Symbol("q")
LEVEL_SYMBOL = Symbol("l")

_SERIES_RING, _series_q = ring("q", QQ)
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


@dataclass
class TruncatedSeries:
    coefficients: List  # QQ elements for q^0 .. q^order
    order: int

    def is_integral(self) -> bool:
        return all(coefficient.denominator == 1 for coefficient in self.coefficients)


def rf(value: int | RationalFunction) -> RationalFunction:
    """Coerce an integer or field element into Q(q)."""

    if isinstance(value, FracElement):
        return value
    return QF(int(value))


def q_power(n: int) -> RationalFunction:
    if n >= 0:
        return q**n
    return QF.one / q ** (-n)


@lru_cache(maxsize=None)
def q_integer(n: int, s: int = 1) -> RationalFunction:
    """Balanced q-integer [n]_i with q_i = q^s.

    Args:
        n: positive integer.
        s: symmetrizer entry of the node.
    """

    if n < 1:
        raise ValueError(f"q-integers are defined for n >= 1, got {n}")
    return (q_power(s * n) - q_power(-s * n)) / (q_power(s) - q_power(-s))


@lru_cache(maxsize=None)
def q_factorial(n: int, s: int = 1) -> RationalFunction:
    result = QF.one
    for k in range(1, n + 1):
        result *= q_integer(k, s)
    return result


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int, s: int = 1) -> RationalFunction:
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"q-binomial needs 0 <= k <= n, got n={n}, k={k}")
    return q_factorial(n, s) / (q_factorial(k, s) * q_factorial(n - k, s))


def series_coefficients(value: RationalFunction, order: int) -> TruncatedSeries:
    """Expand a rational function around q = 0 up to q^order."""

    if value.denom.coeff(1) == 0:
        raise ValueError(f"{to_text(value)} has no expansion in q: denominator vanishes at q = 0")
    numer = _SERIES_RING.from_dict(dict(value.numer), ZZ)
    denom = _SERIES_RING.from_dict(dict(value.denom), ZZ)
    product = rs_mul(numer, rs_series_inversion(denom, _series_q, order + 1), _series_q, order + 1)
    coefficients = [product.get((k,), QQ.zero) for k in range(order + 1)]
    return TruncatedSeries(coefficients=coefficients, order=order)


def check_tau_assumption(tau: RationalFunction, order: int) -> bool:
    """True iff tau expands as 1 + (nonnegative integer coefficients) q + ... to the given order."""

    series = series_coefficients(tau, order)
    if series.coefficients[0] != 1 or not series.is_integral():
        return False
    return all(coefficient >= 0 for coefficient in series.coefficients[1:])


def parse_rational_function(text: str, level: int | None = None) -> RationalFunction:
    """Parse text such as ``1/(1-q^2)``; ``l`` is replaced by ``level`` when given."""

    local_dict: Dict[str, Symbol] = {"q": Q_SYMBOL, "l": LEVEL_SYMBOL}
    try:
        expr = parse_expr(str(text), local_dict=local_dict, transformations=_TRANSFORMATIONS)
    except Exception as exc:
        raise ValueError(f"Could not parse rational function {text!r}") from exc
    if level is not None:
        expr = expr.subs(LEVEL_SYMBOL, level)
    if LEVEL_SYMBOL in expr.free_symbols:
        raise ValueError(f"{text!r} depends on the level symbol l but no level was given")
    try:
        return QF.from_expr(expr)
    except Exception as exc:
        raise ValueError(f"{text!r} is not a rational function in q") from exc


def to_text(value: RationalFunction) -> str:
    return sstr(value.as_expr())
