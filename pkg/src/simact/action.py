"""Commuting tuples of interval permutations: measure-preserving lattice actions.

A rank-d action is given by d pairwise-commuting interval permutations at a
shared resolution.  The group element (k_1, ..., k_d) acts as the product
of generator powers; commutativity makes the product order irrelevant and
is checked exactly on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .transform import (
    IntervalPermutation,
    coarse_dist,
    common_resolution,
    identity,
)

__all__ = [
    "GroupElement",
    "LatticeAction",
    "group_enumeration",
    "action_dist",
    "action_dist_tail",
    "conjugate",
    "free_defect",
    "wrp_conjugacy_search",
    "WrpResult",
]

GroupElement = tuple[int, ...]


@dataclass(frozen=True)
class LatticeAction:
    """d commuting interval permutations, one per lattice direction."""

    d: int
    generators: tuple[IntervalPermutation, ...]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("rank must be >= 1")
        if len(self.generators) != self.d:
            raise ValueError("need one generator per direction")
        gens = common_resolution(*self.generators)
        object.__setattr__(self, "generators", gens)
        for i in range(self.d):
            for j in range(i + 1, self.d):
                gi, gj = gens[i], gens[j]
                if gi.compose(gj).perm != gj.compose(gi).perm:
                    raise ValueError(f"generators {i} and {j} do not commute")

    @property
    def n(self) -> int:
        return self.generators[0].n

    def refine(self, n2: int) -> "LatticeAction":
        return LatticeAction(self.d, tuple(g.refine(n2) for g in self.generators))

    def evaluate(self, gamma: GroupElement) -> IntervalPermutation:
        """The permutation for the lattice element gamma."""
        if len(gamma) != self.d:
            raise ValueError(f"group element {gamma} has wrong rank (want {self.d})")
        out = identity(self.n)
        for g, k in zip(self.generators, gamma):
            if k:
                out = out.compose(g.power(k))
        return out


def identity_action(d: int, n: int) -> LatticeAction:
    return LatticeAction(d, tuple(identity(n) for _ in range(d)))


def group_enumeration(d: int, count: int) -> list[GroupElement]:
    """The first `count` lattice elements: by max-norm shell, then descending
    lexicographic order within a shell, so rank 1 runs 0, 1, -1, 2, -2, ...
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    out: list[GroupElement] = []
    shell = 0
    while len(out) < count:
        for gamma in product(*(range(shell, -shell - 1, -1) for _ in range(d))):
            if max((abs(c) for c in gamma), default=0) == shell:
                out.append(gamma)
                if len(out) == count:
                    return out
        shell += 1
    return out


def action_dist(a: LatticeAction, b: LatticeAction, terms: int, depth: int) -> Fraction:
    """Sum over the first `terms` lattice elements of 2^-j times the coarse
    distance of the two time-gamma_j maps.  Tail bound: action_dist_tail(terms)."""
    if a.d != b.d:
        raise ValueError(f"rank mismatch: {a.d} vs {b.d}")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    total = Fraction(0)
    for j, gamma in enumerate(group_enumeration(a.d, terms), start=1):
        ta, tb = a.evaluate(gamma), b.evaluate(gamma)
        c = coarse_dist(ta, tb, depth)
        if c:
            total += c / 2**j
    return total


def action_dist_tail(terms: int) -> Fraction:
    return Fraction(1, 2**terms)


def conjugate(phi: IntervalPermutation, a: LatticeAction) -> LatticeAction:
    """The action with generators phi g phi^-1."""
    n = lcm(phi.n, a.n)
    p = phi.refine(n)
    pinv = p.inverse()
    gens = tuple(p.compose(g.refine(n)).compose(pinv) for g in a.generators)
    return LatticeAction(a.d, gens)


def free_defect(a: LatticeAction, k_max: int) -> list[tuple[GroupElement, Fraction]]:
    """Fixed-point mass of every nonzero element with max-norm <= k_max."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    count = (2 * k_max + 1) ** a.d
    out = []
    for gamma in group_enumeration(a.d, count):
        if all(c == 0 for c in gamma):
            continue
        perm = a.evaluate(gamma).perm
        fixed = sum(1 for i, pi in enumerate(perm) if pi == i)
        out.append((gamma, Fraction(fixed, a.n)))
    return out


# -- conjugacy search --------------------------------------------------------


class InfeasibleError(ValueError):
    """The aperiodicity on offer cannot support the tower heights needed."""


@dataclass(frozen=True)
class WrpResult:
    phi: IntervalPermutation
    achieved: Fraction
    height: int


def _matched_tower_map(
    t: IntervalPermutation, r: IntervalPermutation, height: int
) -> IntervalPermutation:
    """Conjugator built from equal-mass towers of the given height.

    Bases are trimmed to the smaller cell count (dropping the largest
    indices), matched smallest-to-smallest, and each base map is extended
    along columns so that level i of the T-tower lands on level i of the
    R-tower coherently.  The leftover sets have equal mass and are matched
    smallest-to-smallest as well.
    """
    from .transform import _tower_base_indices

    n = t.n
    base_t = _tower_base_indices(t, height)
    base_r = _tower_base_indices(r, height)
    keep = min(len(base_t), len(base_r))
    if keep == 0:
        raise ValueError(f"no full column of height {height} fits either map")
    base_t, base_r = base_t[:keep], base_r[:keep]
    phi = [-1] * n
    used_src, used_dst = set(), set()
    src_level, dst_level = list(base_t), list(base_r)
    for _ in range(height):
        for s, d in zip(src_level, dst_level):
            phi[s] = d
        used_src.update(src_level)
        used_dst.update(dst_level)
        src_level = [t.perm[c] for c in src_level]
        dst_level = [r.perm[c] for c in dst_level]
    rest_src = sorted(set(range(n)) - used_src)
    rest_dst = sorted(set(range(n)) - used_dst)
    for s, d in zip(rest_src, rest_dst):
        phi[s] = d
    return IntervalPermutation(n, tuple(phi))


def wrp_conjugacy_search(
    a: LatticeAction, b: LatticeAction, epsilon, terms: int, depth: int
) -> WrpResult:
    """Search for phi with action_dist(phi a phi^-1, b) < epsilon (rank 1).

    Candidate tower heights start at the smallest h with 2^(2-h) < epsilon/2
    and double up to the shorter minimum cycle length; the whole ladder is
    tried and the best verified distance wins, so exactly conjugate pairs
    come back with distance 0.  The returned distance is recomputed from
    scratch, so the certificate never depends on the construction being
    right.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if a.d != 1 or b.d != 1:
        raise ValueError("conjugacy search is rank-1 only")
    n = lcm(a.n, b.n)
    aa, bb = a.refine(n), b.refine(n)
    t, r = aa.generators[0], bb.generators[0]
    h0 = 1
    while Fraction(4, 2**h0) >= epsilon / 2:
        h0 += 1
    min_cycle = min(min(t.cycle_lengths()), min(r.cycle_lengths()))
    if min_cycle < h0:
        raise InfeasibleError(
            f"aperiodicity precondition fails: cycle of length {min_cycle} < height {h0}"
        )
    heights = []
    h = h0
    while h <= min_cycle:
        heights.append(h)
        h *= 2
    if heights[-1] != min_cycle:
        heights.append(min_cycle)
    best: WrpResult | None = None
    for height in heights:
        phi = _matched_tower_map(t, r, height)
        achieved = action_dist(conjugate(phi, aa), bb, terms, depth)
        if best is None or achieved < best.achieved:
            best = WrpResult(phi, achieved, height)
        if achieved == 0:
            break
    assert best is not None
    if best.achieved < epsilon:
        return best
    raise ValueError(
        f"search failed: best achieved {best.achieved} at height {best.height}, want < {epsilon}"
    )
