"""Bridges between interval-permutation actions and cylinder tables.

Both directions are exact: reading a table off an action only needs grid
interval bookkeeping, and a rank-1 table with matching piece data can be
realized as an action whose table is reproduced entry by entry.  Adapted
embeddings route an action through an increasing piecewise-linear
reparametrization before reading off masses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import intervals as iv
from .action import GroupElement, LatticeAction
from .measure import Adaptation
from .sim import (
    CylinderTable,
    Partition,
    Window,
    cylinder_mass,
    marginal,
    pair_matrix,
)
from .transform import DyadicSet, IntervalPermutation, identity, preimage

__all__ = [
    "action_to_sim",
    "embed_action",
    "adapt_table",
    "continuity_bound_check",
    "GraphWitness",
    "PairWitness",
    "recover_action",
    "realize_sim_as_action",
    "cylinder_atoms",
    "factor_defect",
    "inverse_continuity_check",
    "InverseContinuityReport",
]


def _denominator_lcm(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def _piece_of_cell(partition: Partition, n: int) -> list[int]:
    """Piece index of each grid cell [i/n, (i+1)/n); cuts must sit on the grid."""
    for c in partition.cuts:
        if (c * n).denominator != 1:
            raise ValueError(f"cut {c} not aligned with resolution {n}")
    out = []
    j = 0
    for i in range(n):
        x = Fraction(i, n)
        while j + 1 < partition.p and partition.cuts[j + 1] <= x:
            j += 1
        out.append(j)
    return out


def action_to_sim(a: LatticeAction, window: Window, partition: Partition) -> CylinderTable:
    """Read the window statistics of an action off its grid.

    The mass of an assignment is the measure of the set of points whose
    time-gamma image lies in the assigned piece for every window time.
    """
    if window.d != a.d:
        raise ValueError(f"rank mismatch: window {window.d}, action {a.d}")
    n = lcm(a.n, _denominator_lcm(partition.cuts))
    aa = a.refine(n)
    piece_of = _piece_of_cell(partition, n)
    perms = [aa.evaluate(gamma).perm for gamma in window.elements()]
    masses: dict[tuple[int, ...], Fraction] = {}
    unit = Fraction(1, n)
    for cell in range(n):
        key = tuple(piece_of[perm[cell]] for perm in perms)
        masses[key] = masses.get(key, Fraction(0)) + unit
    return CylinderTable(window, partition, masses)


def embed_action(
    h: Adaptation, a: LatticeAction, window: Window, partition: Partition
) -> CylinderTable:
    """Window statistics of the action read through the adapted pieces
    h^-1(I); the resulting table lives over the target partition."""
    pulled = Partition(tuple(h.inverse_value(c) for c in partition.cuts))
    base = action_to_sim(a, window, pulled)
    return CylinderTable(window, partition, base.masses)


def _box_weights(h: Adaptation, partition_in: Partition, partition_out: Partition):
    """weights[j][c]: fraction of cell c (of partition_in) covered by
    h^-1 of piece j (of partition_out)."""
    out = []
    for j in range(partition_out.p):
        lo, hi = partition_out.piece(j)
        plo, phi = h.inverse_value(lo), h.inverse_value(hi)
        row = []
        for c in range(partition_in.p):
            clo, chi = partition_in.piece(c)
            overlap = min(phi, chi) - max(plo, clo)
            row.append(overlap / (chi - clo) if overlap > 0 else Fraction(0))
        out.append(row)
    return out


def adapt_table(
    h: Adaptation, t: CylinderTable, partition_out: Partition | None = None
) -> CylinderTable:
    """Push the cell-uniform measure of t through the adaptation and read
    masses over partition_out (default: t's own partition).

    Exact for a single application.  Chaining two adaptations at a fixed
    partition projects onto cell-uniform detail in the middle; to match a
    one-shot composed application exactly, give the inner call a
    partition_out refined by the pullback of the outer adaptation's cuts.
    """
    p_out = partition_out if partition_out is not None else t.partition
    weights = _box_weights(h, t.partition, p_out)
    k = t.window.size()
    current = dict(t.masses)
    for pos in range(k):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for key, mass in current.items():
            c = key[pos]
            for j in range(p_out.p):
                wgt = weights[j][c]
                if wgt == 0:
                    continue
                new_key = key[:pos] + (j,) + key[pos + 1 :]
                nxt[new_key] = nxt.get(new_key, Fraction(0)) + mass * wgt
        current = nxt
    return CylinderTable(t.window, p_out, current)


def _eval_boxes(t: CylinderTable, boxes: list) -> Fraction:
    """Mass of a product box (one interval set per window time) under the
    cell-uniform measure of t."""
    factors_by_cell = []
    for c in range(t.partition.p):
        clo, chi = t.partition.piece(c)
        cell = iv.interval(clo, chi)
        factors_by_cell.append(
            [iv.length(iv.intersect(box, cell)) / (chi - clo) for box in boxes]
        )
    total = Fraction(0)
    for key, mass in t.masses.items():
        term = mass
        for pos, c in enumerate(key):
            term *= factors_by_cell[c][pos]
            if term == 0:
                break
        total += term
    return total


def continuity_bound_check(
    h: Adaptation, t: CylinderTable, assignment: tuple[int, ...]
) -> tuple[Fraction, Fraction, Fraction]:
    """Exact three-term chain for a full-window assignment:

        |t(adapted boxes) - t(boxes)|  <=  sum over window times of
        m(h^-1(I) xor I)  <=  2 * |window| * sup|h - id|.

    Requires the table's marginal to match piece lengths, which is what
    makes the middle sum the right budget.  Returns (lhs, mid, rhs) after
    asserting the chain.
    """
    k = t.window.size()
    assignment = tuple(assignment)
    if len(assignment) != k:
        raise ValueError("assignment must cover the whole window")
    marg = marginal(t)
    for j in range(t.partition.p):
        lo, hi = t.partition.piece(j)
        if marg.mass(lo, hi) != hi - lo:
            raise ValueError("marginal must equal piece lengths for the bound")
    boxes = []
    mid = Fraction(0)
    for j in assignment:
        lo, hi = t.partition.piece(j)
        plo, phi = h.inverse_value(lo), h.inverse_value(hi)
        boxes.append(iv.interval(plo, phi))
        mid += iv.length(iv.symdiff(iv.interval(plo, phi), iv.interval(lo, hi)))
    lhs = abs(_eval_boxes(t, boxes) - t.masses.get(assignment, Fraction(0)))
    rhs = 2 * k * h.sup_dist_to_identity()
    assert lhs <= mid <= rhs
    return lhs, mid, rhs


# -- recovery ----------------------------------------------------------------


@dataclass(frozen=True)
class PairWitness:
    """Majority piece map read off one two-time marginal."""

    alpha: GroupElement
    beta: GroupElement
    mapping: tuple[int, ...]
    defect: Fraction


@dataclass(frozen=True)
class GraphWitness:
    pairs: tuple[PairWitness, ...]


def _majority_map(matrix, epsilon: Fraction) -> tuple[int, ...]:
    p = len(matrix)
    mapping = []
    for i in range(p):
        row_total = sum(matrix[i], Fraction(0))
        best_j = max(range(p), key=lambda j: (matrix[i][j], -j))
        if matrix[i][best_j] < (1 - epsilon) * row_total:
            raise ValueError(
                f"piece {i} keeps only {matrix[i][best_j]} of {row_total} in its best "
                f"target; not a graph at tolerance {epsilon}"
            )
        mapping.append(best_j)
    if sorted(mapping) != list(range(p)):
        raise ValueError("majority targets collide; not a graph at this tolerance")
    return tuple(mapping)


def _pair_defect(matrix, mapping) -> Fraction:
    worst = Fraction(0)
    for i, j in enumerate(mapping):
        row_total = sum(matrix[i], Fraction(0))
        worst = max(worst, row_total - matrix[i][j])
    return worst


def _block_permutation(
    block_sizes: list[int], mapping: tuple[int, ...], n: int
) -> IntervalPermutation:
    """Send block j onto block mapping[j], order preserving; when sizes
    disagree the overflow cells are paired with the spare slots, both in
    ascending order."""
    starts = [0]
    for size in block_sizes[:-1]:
        starts.append(starts[-1] + size)
    perm = [-1] * n
    free = [list(range(starts[j], starts[j] + block_sizes[j])) for j in range(len(block_sizes))]
    leftovers: list[int] = []
    for j in range(len(block_sizes)):
        cells = list(range(starts[j], starts[j] + block_sizes[j]))
        slots = free[mapping[j]]
        take = min(len(cells), len(slots))
        for c, s in zip(cells[:take], slots[:take]):
            perm[c] = s
        free[mapping[j]] = slots[take:]
        leftovers.extend(cells[take:])
    spare = sorted(s for slots in free for s in slots)
    for c, s in zip(sorted(leftovers), spare):
        perm[c] = s
    return IntervalPermutation(n, tuple(perm))


def recover_action(t: CylinderTable, epsilon) -> tuple[LatticeAction, GraphWitness]:
    """Rebuild an action from a table that is a graph up to the tolerance.

    Each generator comes from the (0, unit vector) two-time marginal: every
    piece must send at least a (1 - epsilon) share of its mass to a single
    target piece, and the targets must form a permutation of the pieces.
    Piece masses need not be equal; blocks on the line get the marginal
    masses, laid out in piece order.
    """
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("tolerance must be >= 0")
    d, w = t.window.d, t.window.w
    if w < 2:
        raise ValueError("window must contain the unit vectors; need w >= 2")
    zero = (0,) * d
    masses = [cylinder_mass(t, {zero: j}) for j in range(t.partition.p)]
    if any(m == 0 for m in masses):
        raise ValueError("marginal must be positive on every piece")
    levels = [Fraction(0)]
    for m in masses:
        levels.append(levels[-1] + m)
    n = _denominator_lcm(levels)
    block_sizes = [int((levels[j + 1] - levels[j]) * n) for j in range(t.partition.p)]
    generators = []
    witnesses = []
    for axis in range(d):
        unit = tuple(1 if i == axis else 0 for i in range(d))
        matrix = pair_matrix(t, zero, unit)
        mapping = _majority_map(matrix, epsilon)
        generators.append(_block_permutation(block_sizes, mapping, n))
        witnesses.append(PairWitness(zero, unit, mapping, _pair_defect(matrix, mapping)))
    action = LatticeAction(d, tuple(generators))
    return action, GraphWitness(tuple(witnesses))


# -- realization -------------------------------------------------------------


def realize_sim_as_action(t: CylinderTable) -> tuple[LatticeAction, Partition]:
    """Build a rank-1 action whose table reproduces t entry by entry.

    Points are laid out by their leading (w-1)-block of labels; each block
    interval is cut into outgoing slots, one per positive-mass successor,
    holding the exact transition mass, and slots are matched to incoming
    slots in ascending block order.  The returned partition has cuts at the
    marginal's cumulative masses so its piece indices line up with t's.
    """
    if t.window.d != 1:
        raise ValueError("realization covers rank-1 tables only")
    w, p = t.window.w, t.partition.p
    single = [cylinder_mass(t, {(0,): j}) for j in range(p)]
    empty = [j for j in range(p) if single[j] == 0]
    if empty:
        raise ValueError(f"marginal vanishes on pieces {empty}; drop them first")
    levels = [Fraction(0)]
    for m in single:
        levels.append(levels[-1] + m)
    partition_out = Partition(tuple(levels[:-1]))
    if w == 1:
        n = _denominator_lcm(levels)
        return LatticeAction(1, (identity(n),)), partition_out
    block_mass: dict[tuple[int, ...], Fraction] = {}
    trans: dict[tuple[tuple[int, ...], int], Fraction] = {}
    for key, mass in t.masses.items():
        u = key[: w - 1]
        block_mass[u] = block_mass.get(u, Fraction(0)) + mass
        trans[(u, key[-1])] = trans.get((u, key[-1]), Fraction(0)) + mass
    blocks = sorted(block_mass)
    n = _denominator_lcm(list(t.masses.values()) + levels)
    start: dict[tuple[int, ...], int] = {}
    offset = 0
    for u in blocks:
        start[u] = offset
        offset += int(block_mass[u] * n)
    assert offset == n
    # shift consistency makes incoming mass at v equal block_mass[v], so the
    # incoming slots tile v's interval exactly
    in_offset = {u: start[u] for u in blocks}
    perm = [-1] * n
    for u in blocks:
        out = start[u]
        for s in range(p):
            q = trans.get((u, s), Fraction(0))
            if q == 0:
                continue
            v = u[1:] + (s,)
            width = int(q * n)
            dst = in_offset[v]
            for k in range(width):
                perm[out + k] = dst + k
            out += width
            in_offset[v] = dst + width
    gen = IntervalPermutation(n, tuple(perm))
    return LatticeAction(1, (gen,)), partition_out


# -- factor defect -----------------------------------------------------------


def cylinder_atoms(
    a: LatticeAction, piece: DyadicSet, window: Window
) -> tuple[int, list[int]]:
    """Partition the grid by the window itinerary relative to {piece,
    complement}.  Returns (resolution, atom label per cell); equal labels
    mean same atom."""
    if window.d != a.d:
        raise ValueError("rank mismatch")
    n = lcm(a.n, piece.cells)
    aa = a.refine(n)
    span = n // piece.cells
    in_piece = [piece.bits >> (i // span) & 1 for i in range(n)]
    perms = [aa.evaluate(gamma).perm for gamma in window.elements()]
    signatures: dict[tuple[int, ...], int] = {}
    labels = []
    for cell in range(n):
        sig = tuple(in_piece[perm[cell]] for perm in perms)
        if sig not in signatures:
            signatures[sig] = len(signatures)
        labels.append(signatures[sig])
    return n, labels


def factor_defect(
    a: LatticeAction, piece: DyadicSet, target: DyadicSet, window: Window
) -> Fraction:
    """Distance from `target` to the algebra generated by the window
    itineraries of `piece`: the closest union of itinerary atoms misses the
    target by exactly the sum over atoms of min(inside, outside) mass."""
    n, labels = cylinder_atoms(a, piece, window)
    n2 = lcm(n, target.cells)
    f = n2 // n
    span = n2 // target.cells
    inside: dict[int, int] = {}
    outside: dict[int, int] = {}
    for cell in range(n2):
        lab = labels[cell // f]
        if target.bits >> (cell // span) & 1:
            inside[lab] = inside.get(lab, 0) + 1
        else:
            outside[lab] = outside.get(lab, 0) + 1
    total = Fraction(0)
    for lab in set(inside) | set(outside):
        total += Fraction(min(inside.get(lab, 0), outside.get(lab, 0)), n2)
    return total


# -- inverse continuity -------------------------------------------------------


@dataclass(frozen=True)
class InverseContinuityReport:
    mass_a: Fraction
    mass_b: Fraction
    symdiff_mass: Fraction
    gap_below: bool
    conclusion_below: bool


def inverse_continuity_check(
    a: LatticeAction, b: LatticeAction, gamma: GroupElement, s: DyadicSet, epsilon
) -> InverseContinuityReport:
    """Compare the time-gamma preimages of a dyadic set under two actions.

    With J = A^-gamma(S), the identity m(J xor B^-gamma(S)) =
    2 (m(J) - m(J intersect B^-gamma(S))) holds exactly because both
    preimages carry the mass of S.  A joint-mass gap below the tolerance
    therefore forces the preimage symmetric difference below twice it.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("tolerance must be > 0")
    ja = preimage(a.evaluate(gamma), s)
    jb = preimage(b.evaluate(gamma), s)
    mass_a = ja.mass()
    mass_b = (ja & jb).mass()
    sym = (ja ^ jb).mass()
    assert sym == 2 * (mass_a - mass_b)
    report = InverseContinuityReport(
        mass_a=mass_a,
        mass_b=mass_b,
        symdiff_mass=sym,
        gap_below=mass_a - mass_b < epsilon,
        conclusion_below=sym < 2 * epsilon,
    )
    if report.gap_below:
        assert report.conclusion_below
    return report
