import pytest

from src.qfield import (
    QF,
    check_tau_assumption,
    parse_rational_function,
    q,
    q_binomial,
    q_integer,
    q_power,
    series_coefficients,
    to_text,
)


def _bar(value):
    """Substitute q -> 1/q."""

    numer = value.numer.as_expr().subs("q", 1 / q.as_expr())
    denom = value.denom.as_expr().subs("q", 1 / q.as_expr())
    return QF.from_expr(numer / denom)


def test_q_integer_examples():
    assert q_integer(1) == QF.one
    assert q_integer(2) == q + 1 / q
    assert q_integer(3, s=2) == q**4 + 1 + q_power(-4)


def test_q_integer_rejects_zero():
    with pytest.raises(ValueError):
        q_integer(0)


def test_q_binomial_examples():
    assert q_binomial(5, 0) == QF.one
    assert q_binomial(2, 1) == q + q_power(-1)
    assert q_binomial(4, 2) == q**4 + q**2 + 2 + q_power(-2) + q_power(-4)


def test_q_binomial_symmetry_and_pascal_rule():
    for n in range(1, 7):
        for k in range(n + 1):
            value = q_binomial(n, k)
            assert value == q_binomial(n, n - k)
            assert value == _bar(value)
            if 0 < k < n:
                assert value == q_power(k) * q_binomial(n - 1, k) + q_power(k - n) * q_binomial(n - 1, k - 1)


def test_q_binomial_rejects_out_of_range():
    with pytest.raises(ValueError):
        q_binomial(2, 3)


def test_tau_assumption_examples():
    assert check_tau_assumption(QF.one / (1 - q**2), 6)
    assert check_tau_assumption(QF.one, 6)
    assert not check_tau_assumption(1 - q, 3)
    assert not check_tau_assumption(QF.one / (1 + q**2), 6)


def test_series_coefficients_geometric():
    series = series_coefficients(QF.one / (1 - q**2), 6)
    assert [int(c) for c in series.coefficients] == [1, 0, 1, 0, 1, 0, 1]


def test_series_requires_nonzero_constant_term():
    with pytest.raises(ValueError):
        series_coefficients(QF.one / q, 3)


def test_parse_rational_function_with_level_template():
    assert parse_rational_function("1/(1-q^2)") == QF.one / (1 - q**2)
    assert parse_rational_function("1/(1-q^(2*l))", level=3) == QF.one / (1 - q**6)


def test_parse_rational_function_rejects_unbound_level():
    with pytest.raises(ValueError):
        parse_rational_function("1/(1-q^l)")
    with pytest.raises(ValueError):
        parse_rational_function("1/(1-")


def test_canonical_form_after_cancellation():
    value = (q - 1) / (1 - q**2)
    assert value == -QF.one / (1 + q)
    assert value.denom.LC > 0
    assert to_text(q + 1 / q) == to_text((q**2 + 1) / q)
