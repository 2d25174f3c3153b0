"""Finite unions of half-open rational intervals on the circle [0, 1).

The canonical form is a tuple of (lo, hi) Fraction pairs with
0 <= lo < hi <= 1, pairwise disjoint, sorted, and with touching pairs
merged.  A piece crossing 1 is stored as two pieces.  All set operations
are exact.
"""

from __future__ import annotations

from fractions import Fraction

Pairs = tuple[tuple[Fraction, Fraction], ...]

FULL: Pairs = ((Fraction(0), Fraction(1)),)
EMPTY: Pairs = ()


def normalize(raw) -> Pairs:
    """Sort, drop empty pieces, merge overlapping or touching ones."""
    pieces = sorted((Fraction(a), Fraction(b)) for a, b in raw if Fraction(a) < Fraction(b))
    for a, b in pieces:
        if a < 0 or b > 1:
            raise ValueError(f"interval [{a}, {b}) outside [0, 1)")
    merged: list[list[Fraction]] = []
    for a, b in pieces:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return tuple((a, b) for a, b in merged)


def interval(lo, hi) -> Pairs:
    """The set [lo, hi) inside [0, 1); lo == hi gives the empty set."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not (0 <= lo <= hi <= 1):
        raise ValueError(f"interval endpoints ({lo}, {hi}) outside [0, 1)")
    if lo == hi:
        return EMPTY
    return ((lo, hi),)


def wrapped_interval(lo, length) -> Pairs:
    """The arc of given length starting at lo, wrapping past 1 if needed."""
    lo, length = Fraction(lo) % 1, Fraction(length)
    if not 0 <= length <= 1:
        raise ValueError("arc length must lie in [0, 1]")
    if length == 0:
        return EMPTY
    if length == 1:
        return FULL
    hi = lo + length
    if hi <= 1:
        return ((lo, hi),)
    return normalize([(Fraction(0), hi - 1), (lo, Fraction(1))])


def length(s: Pairs) -> Fraction:
    return sum((b - a for a, b in s), Fraction(0))


def contains_point(s: Pairs, x) -> bool:
    x = Fraction(x) % 1
    return any(a <= x < b for a, b in s)


def _cells(*sets: Pairs) -> list[tuple[Fraction, Fraction]]:
    cuts = {Fraction(0), Fraction(1)}
    for s in sets:
        for a, b in s:
            cuts.add(a)
            cuts.add(b)
    xs = sorted(cuts)
    return list(zip(xs, xs[1:]))


def _combine(a: Pairs, b: Pairs, keep) -> Pairs:
    out = []
    for lo, hi in _cells(a, b):
        if keep(contains_point(a, lo), contains_point(b, lo)):
            out.append((lo, hi))
    return normalize(out)


def intersect(a: Pairs, b: Pairs) -> Pairs:
    return _combine(a, b, lambda x, y: x and y)


def union(a: Pairs, b: Pairs) -> Pairs:
    return _combine(a, b, lambda x, y: x or y)


def symdiff(a: Pairs, b: Pairs) -> Pairs:
    return _combine(a, b, lambda x, y: x != y)


def complement(a: Pairs) -> Pairs:
    return _combine(a, EMPTY, lambda x, _y: not x)


def translate(s: Pairs, t) -> Pairs:
    """Rotate the whole set by t (mod 1)."""
    t = Fraction(t) % 1
    out: list[tuple[Fraction, Fraction]] = []
    for a, b in s:
        lo, hi = a + t, b + t
        if hi <= 1:
            out.append((lo, hi))
        elif lo >= 1:
            out.append((lo - 1, hi - 1))
        else:
            out.append((lo, Fraction(1)))
            out.append((Fraction(0), hi - 1))
    return normalize(out)
