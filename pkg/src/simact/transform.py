"""Interval permutations of the circle and dyadic subsets.

An IntervalPermutation cuts [0, 1) into n equal half-open intervals and
moves interval i onto interval perm[i] by translation.  These maps preserve
Lebesgue measure exactly, form a group under composition, and refine
losslessly to any multiple resolution, which makes every distance below an
exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import intervals as iv

__all__ = [
    "IntervalPermutation",
    "DyadicSet",
    "identity",
    "rotation",
    "swap_halves",
    "common_resolution",
    "compose",
    "preimage",
    "coarse_dist",
    "coarse_dist_tail",
    "coarse_term_count",
    "halmos_dist",
    "rohlin_tower",
    "aperiodicity_scale",
]


@dataclass(frozen=True)
class IntervalPermutation:
    """A permutation of the n equal intervals [i/n, (i+1)/n), acting by translation."""

    n: int
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))
        if self.n < 1:
            raise ValueError("resolution must be positive")
        if len(self.perm) != self.n or sorted(self.perm) != list(range(self.n)):
            raise ValueError(f"perm is not a bijection of 0..{self.n - 1}")

    def refine(self, n2: int) -> "IntervalPermutation":
        """Re-express at a finer resolution; n2 must be a multiple of n."""
        if n2 % self.n != 0:
            raise ValueError(f"{n2} is not a multiple of {self.n}")
        f = n2 // self.n
        out = [0] * n2
        for i, pi in enumerate(self.perm):
            for r in range(f):
                out[i * f + r] = pi * f + r
        return IntervalPermutation(n2, tuple(out))

    def inverse(self) -> "IntervalPermutation":
        out = [0] * self.n
        for i, pi in enumerate(self.perm):
            out[pi] = i
        return IntervalPermutation(self.n, tuple(out))

    def compose(self, other: "IntervalPermutation") -> "IntervalPermutation":
        """self after other (apply other first)."""
        a, b = common_resolution(self, other)
        return IntervalPermutation(a.n, tuple(a.perm[j] for j in b.perm))

    def power(self, k: int) -> "IntervalPermutation":
        """k-th iterate for any integer k, via cycle rotation."""
        out = [0] * self.n
        for cycle in self.cycles():
            ln = len(cycle)
            shift = k % ln
            for idx, cell in enumerate(cycle):
                out[cell] = cycle[(idx + shift) % ln]
        return IntervalPermutation(self.n, tuple(out))

    def cycles(self) -> list[list[int]]:
        """Cycles ordered by smallest element, each starting at its smallest."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            nxt = self.perm[start]
            while nxt != start:
                cycle.append(nxt)
                seen[nxt] = True
                nxt = self.perm[nxt]
            out.append(cycle)
        return out

    def cycle_lengths(self) -> list[int]:
        return [len(c) for c in self.cycles()]

    def apply_point(self, x) -> Fraction:
        """Image of a single point of [0, 1)."""
        x = Fraction(x)
        if not 0 <= x < 1:
            raise ValueError(f"point {x} outside [0, 1)")
        i = int(x * self.n)
        return x + Fraction(self.perm[i] - i, self.n)

    def image_set(self, s: iv.Pairs) -> iv.Pairs:
        """Image of a union of intervals aligned with a multiple of the grid."""
        out = []
        for a, b in s:
            den = lcm(a.denominator, b.denominator, self.n)
            t = self.refine(den)
            for cell in range(int(a * den), int(b * den)):
                j = t.perm[cell]
                out.append((Fraction(j, den), Fraction(j + 1, den)))
        return iv.normalize(out)


def identity(n: int) -> IntervalPermutation:
    return IntervalPermutation(n, tuple(range(n)))


def rotation(n: int, k: int) -> IntervalPermutation:
    """Rotation by k/n."""
    return IntervalPermutation(n, tuple((i + k) % n for i in range(n)))


def swap_halves() -> IntervalPermutation:
    return IntervalPermutation(2, (1, 0))


def common_resolution(*ts: IntervalPermutation) -> tuple[IntervalPermutation, ...]:
    n = lcm(*(t.n for t in ts))
    return tuple(t.refine(n) for t in ts)


def compose(t: IntervalPermutation, r: IntervalPermutation) -> IntervalPermutation:
    return t.compose(r)


# -- dyadic sets -------------------------------------------------------------


@dataclass(frozen=True)
class DyadicSet:
    """A union of level-`level` dyadic cells, stored as a bitmask.

    Bit i marks the cell [i/2^level, (i+1)/2^level).
    """

    level: int
    bits: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be >= 0")
        if not 0 <= self.bits < (1 << (1 << self.level)):
            raise ValueError("bitmask out of range for level")

    @property
    def cells(self) -> int:
        return 1 << self.level

    @classmethod
    def from_indices(cls, level: int, indices) -> "DyadicSet":
        bits = 0
        for i in indices:
            bits |= 1 << i
        return cls(level, bits)

    @classmethod
    def full(cls, level: int) -> "DyadicSet":
        return cls(level, (1 << (1 << level)) - 1)

    @classmethod
    def empty(cls, level: int) -> "DyadicSet":
        return cls(level, 0)

    def indices(self) -> list[int]:
        return [i for i in range(self.cells) if self.bits >> i & 1]

    def refine(self, level2: int) -> "DyadicSet":
        if level2 < self.level:
            raise ValueError("cannot coarsen a dyadic set")
        f = 1 << (level2 - self.level)
        block = (1 << f) - 1
        bits = 0
        for i in self.indices():
            bits |= block << (i * f)
        return DyadicSet(level2, bits)

    def mass(self) -> Fraction:
        return Fraction(self.bits.bit_count(), self.cells)

    def to_pairs(self) -> iv.Pairs:
        return iv.normalize(
            [(Fraction(i, self.cells), Fraction(i + 1, self.cells)) for i in self.indices()]
        )

    def _with(self, other: "DyadicSet", op) -> "DyadicSet":
        level = max(self.level, other.level)
        a, b = self.refine(level), other.refine(level)
        return DyadicSet(level, op(a.bits, b.bits) & ((1 << a.cells) - 1))

    def __and__(self, other):
        return self._with(other, lambda x, y: x & y)

    def __or__(self, other):
        return self._with(other, lambda x, y: x | y)

    def __xor__(self, other):
        return self._with(other, lambda x, y: x ^ y)

    def complement(self) -> "DyadicSet":
        return DyadicSet(self.level, ~self.bits & ((1 << self.cells) - 1))


def preimage(t: IntervalPermutation, s: DyadicSet) -> DyadicSet:
    """T^-1(S) as a dyadic set; needs the resolution to be a power of two."""
    n, m = t.n, 0
    while (1 << m) < n:
        m += 1
    if (1 << m) != n:
        raise ValueError(f"resolution {n} is not a power of two; no dyadic refinement")
    level = max(m, s.level)
    tt = t.refine(1 << level)
    ss = s.refine(level)
    bits = 0
    for i in range(tt.n):
        if ss.bits >> tt.perm[i] & 1:
            bits |= 1 << i
    return DyadicSet(level, bits)


# -- distances ---------------------------------------------------------------


def _preimage_mask(t: IntervalPermutation, cell_lo: int, cell_hi: int) -> int:
    """Bits i with perm[i] in [cell_lo, cell_hi), at t's own resolution."""
    bits = 0
    for i, pi in enumerate(t.perm):
        if cell_lo <= pi < cell_hi:
            bits |= 1 << i
    return bits


def coarse_term_count(depth: int) -> int:
    return 2 ** (depth + 1) - 2


def coarse_dist(t: IntervalPermutation, r: IntervalPermutation, depth: int) -> Fraction:
    """Weighted preimage disagreement over dyadic intervals.

    The k-th test set (1-indexed, level 1 first, left to right within a
    level, levels up to `depth`) carries weight 2^-k; the summand is the
    measure of T^-1(E) xor R^-1(E).  The truncation tail is bounded by
    coarse_dist_tail(depth).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n = lcm(t.n, r.n, 2**depth)
    tt, rr = t.refine(n), r.refine(n)
    total = Fraction(0)
    k = 0
    for level in range(1, depth + 1):
        cells = 2**level
        span = n // cells
        for c in range(cells):
            k += 1
            mt = _preimage_mask(tt, c * span, (c + 1) * span)
            mr = _preimage_mask(rr, c * span, (c + 1) * span)
            diff = (mt ^ mr).bit_count()
            if diff:
                total += Fraction(diff, n) / 2**k
    return total


def coarse_dist_tail(depth: int) -> Fraction:
    """Upper bound for the discarded terms: sum of weights past the cutoff."""
    return Fraction(1, 2 ** coarse_term_count(depth))


def halmos_dist(t: IntervalPermutation, r: IntervalPermutation) -> Fraction:
    """Mass of the set where the two maps disagree."""
    tt, rr = common_resolution(t, r)
    diff = sum(1 for a, b in zip(tt.perm, rr.perm) if a != b)
    return Fraction(diff, tt.n)


# -- towers ------------------------------------------------------------------


def _tower_base_indices(t: IntervalPermutation, height: int) -> list[int]:
    """Mark every height-th cell along each cycle, first height*floor(len/height) cells."""
    base = []
    for cycle in t.cycles():
        usable = height * (len(cycle) // height)
        base.extend(cycle[pos] for pos in range(0, usable, height))
    return sorted(base)


def rohlin_tower(t: IntervalPermutation, height: int, epsilon) -> DyadicSet:
    """A base B whose levels B, T(B), ..., T^(height-1)(B) are disjoint
    and cover mass >= 1 - epsilon.

    Feasibility check: with epsilon = 0 every cycle length must be a
    multiple of the height; otherwise every cycle must have length at least
    height / epsilon.  The returned tower is re-verified before returning.
    """
    epsilon = Fraction(epsilon)
    if height < 1:
        raise ValueError("height must be >= 1")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    for ln in t.cycle_lengths():
        if epsilon == 0:
            if ln % height != 0:
                raise ValueError(
                    f"infeasible: cycle of length {ln} is not a multiple of height {height}"
                )
        elif ln * epsilon < height:
            raise ValueError(
                f"infeasible: cycle of length {ln} is shorter than height/epsilon"
            )
    n, m = t.n, 0
    while (1 << m) < n:
        m += 1
    if (1 << m) != n:
        raise ValueError(f"resolution {n} is not a power of two; base cannot be dyadic")
    base = _tower_base_indices(t, height)
    out = DyadicSet.from_indices(m, base)
    # exact post-check: disjoint levels, enough mass
    seen: set[int] = set()
    level = list(base)
    count = 0
    for _ in range(height):
        for c in level:
            if c in seen:
                raise AssertionError("tower levels overlap")
            seen.add(c)
        count += len(level)
        level = [t.perm[c] for c in level]
    assert Fraction(count, n) >= 1 - epsilon
    return out


def aperiodicity_scale(t: IntervalPermutation, k_max: int) -> list[tuple[int, Fraction]]:
    """Mass fixed by each iterate T^k for k = 1..k_max."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    out = []
    cycle_lens = t.cycle_lengths()
    for k in range(1, k_max + 1):
        fixed = sum(ln for ln in cycle_lens if k % ln == 0)
        out.append((k, Fraction(fixed, t.n)))
    return out
