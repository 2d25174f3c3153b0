from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from simact.rationals import exact_decimal, format_rational, parse_rational


@given(st.integers(-10**9, 10**9), st.integers(1, 10**6))
def test_parse_format_roundtrip(num, den):
    f = Fraction(num, den)
    assert parse_rational(format_rational(f)) == f


def test_parse_plain_integers():
    assert parse_rational("7") == 7
    assert parse_rational("-3") == -3
    assert parse_rational("0") == 0


@pytest.mark.parametrize("bad", ["", "1.5", "1/0", "a/b", "1/2/3", "1e3", "--2", "+"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_is_canonical():
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(Fraction(-6, 3)) == "-2"
    assert format_rational(Fraction(0)) == "0"


def test_exact_decimal_truncates_toward_zero():
    assert exact_decimal(Fraction(1, 3), 4) == "0.3333"
    assert exact_decimal(Fraction(-1, 3), 4) == "-0.3333"
    assert exact_decimal(Fraction(1, 2)) == "0.5"
    assert exact_decimal(Fraction(3)) == "3.0"
    assert exact_decimal(Fraction(0)) == "0.0"


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4))
def test_exact_decimal_is_close(num, den):
    f = Fraction(num, den)
    text = exact_decimal(f, 12)
    sign = -1 if text.startswith("-") else 1
    whole, frac = text.lstrip("-").split(".")
    value = sign * (Fraction(int(whole)) + Fraction(int(frac), 10 ** len(frac)))
    assert abs(value - f) < Fraction(1, 10**11)
    assert abs(value) <= abs(f)
