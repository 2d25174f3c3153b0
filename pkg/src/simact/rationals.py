"""Helpers for exact rationals at the package boundary.

All arithmetic inside the package uses fractions.Fraction.  These helpers
only cover the wire format ("p/q" strings) and a deterministic decimal
rendering for human-facing columns.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["parse_rational", "format_rational", "exact_decimal"]


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction.

    Raises ValueError on anything else (floats included: the wire format is
    exact by design).
    """
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string, got {type(text).__name__}")
    s = text.strip()
    if "." in s or "e" in s or "E" in s:
        raise ValueError(f"rational {text!r} must be integer or p/q, not a float")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Canonical string form: "p" for integers, otherwise "p/q" in lowest terms."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def exact_decimal(value: Fraction, places: int = 12) -> str:
    """Deterministic decimal rendering, display only.

    Truncates toward zero at `places` fractional digits, then strips
    trailing zeros (keeping at least one digit after the point).  Never
    touches floating point, so identical inputs give identical bytes.
    """
    f = Fraction(value)
    sign = "-" if f < 0 else ""
    f = abs(f)
    scaled = f.numerator * 10**places // f.denominator
    whole, frac = divmod(scaled, 10**places)
    digits = str(frac).rjust(places, "0").rstrip("0") or "0"
    return f"{sign}{whole}.{digits}"
