"""Finite-window distributions of shift-invariant measures.

A CylinderTable assigns exact rational masses to the joint piece-labels of
a finite window of lattice times, with the axis-consistency a shift
invariant measure forces on opposite faces of the window box.  Between the
recorded cut points nothing is pinned down; whenever a computation needs
within-piece detail (smoothing, adapted evaluation) the convention is that
mass spreads uniformly inside each cell box, coordinate by coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import intervals as iv
from .measure import StepMeasure, from_piece_masses

__all__ = [
    "Partition",
    "Window",
    "CylinderTable",
    "cylinder_mass",
    "marginal",
    "pair_matrix",
    "sim_dist",
    "GraphTest",
    "graph_witness_exact",
    "greedy_graph_witness",
    "is_graph_joining",
    "is_graph_sim",
    "convolve_sim",
    "average_sims",
    "fixed_mass_bound",
    "fixed_mass_report",
    "refine_partition",
    "marginalize_window",
]


@dataclass(frozen=True)
class Partition:
    """Cut points 0 = c_0 < c_1 < ... < c_{p-1} < 1 splitting the circle
    into p half-open pieces; the last piece runs to 1."""

    cuts: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.cuts)
        object.__setattr__(self, "cuts", cs)
        if not cs or cs[0] != 0:
            raise ValueError("first cut must be 0")
        if any(a >= b for a, b in zip(cs, cs[1:])) or cs[-1] >= 1:
            raise ValueError("cuts must be strictly increasing inside [0, 1)")

    @property
    def p(self) -> int:
        return len(self.cuts)

    def piece(self, j: int) -> tuple[Fraction, Fraction]:
        hi = self.cuts[j + 1] if j + 1 < self.p else Fraction(1)
        return self.cuts[j], hi

    def pieces(self) -> list[tuple[Fraction, Fraction]]:
        return [self.piece(j) for j in range(self.p)]

    def piece_length(self, j: int) -> Fraction:
        lo, hi = self.piece(j)
        return hi - lo

    def piece_of_point(self, x) -> int:
        x = Fraction(x)
        if not 0 <= x < 1:
            raise ValueError(f"point {x} outside [0, 1)")
        j = 0
        while j + 1 < self.p and self.cuts[j + 1] <= x:
            j += 1
        return j


@dataclass(frozen=True)
class Window:
    """The box {0, ..., w-1}^d of lattice times, listed in ascending
    lexicographic order."""

    d: int
    w: int

    def __post_init__(self):
        if self.d < 1 or self.w < 1:
            raise ValueError("window needs d >= 1 and w >= 1")

    def elements(self) -> list[tuple[int, ...]]:
        return list(product(range(self.w), repeat=self.d))

    def size(self) -> int:
        return self.w**self.d


class CylinderTable:
    """Joint masses of piece labels over a window, checked on construction.

    masses maps full label tuples (aligned with window.elements()) to
    positive rationals summing to 1; zero entries are dropped.
    """

    def __init__(self, window: Window, partition: Partition, masses):
        self.window = window
        self.partition = partition
        clean: dict[tuple[int, ...], Fraction] = {}
        k = window.size()
        p = partition.p
        for key, value in masses.items():
            key = tuple(key)
            value = Fraction(value)
            if len(key) != k or any(not (0 <= j < p) for j in key):
                raise ValueError(f"bad assignment key {key}")
            if value < 0:
                raise ValueError(f"negative mass at {key}")
            if value > 0:
                clean[key] = clean.get(key, Fraction(0)) + value
        self.masses = clean
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"total mass {total} != 1")
        self._check_shift_consistency()

    def _check_shift_consistency(self):
        elems = self.window.elements()
        pos = {e: i for i, e in enumerate(elems)}
        w = self.window.w
        if w == 1:
            return
        for axis in range(self.window.d):
            low = [e for e in elems if e[axis] < w - 1]
            idx_low = [pos[e] for e in low]
            idx_high = [pos[tuple(c + (1 if i == axis else 0) for i, c in enumerate(e))] for e in low]
            lhs: dict[tuple[int, ...], Fraction] = {}
            rhs: dict[tuple[int, ...], Fraction] = {}
            for key, mass in self.masses.items():
                kl = tuple(key[i] for i in idx_low)
                kh = tuple(key[i] for i in idx_high)
                lhs[kl] = lhs.get(kl, Fraction(0)) + mass
                rhs[kh] = rhs.get(kh, Fraction(0)) + mass
            if lhs != rhs:
                raise ValueError(f"shift consistency fails along axis {axis}")

    def items_sorted(self):
        return sorted(self.masses.items())

    def __eq__(self, other):
        if not isinstance(other, CylinderTable):
            return NotImplemented
        return (
            self.window == other.window
            and self.partition == other.partition
            and self.masses == other.masses
        )


def marginalize_to(t: CylinderTable, subset) -> dict[tuple[int, ...], Fraction]:
    """Joint masses of the labels at the given window times."""
    elems = t.window.elements()
    pos = {e: i for i, e in enumerate(elems)}
    idx = []
    for e in subset:
        if tuple(e) not in pos:
            raise ValueError(f"time {e} outside the window")
        idx.append(pos[tuple(e)])
    out: dict[tuple[int, ...], Fraction] = {}
    for key, mass in t.masses.items():
        sub = tuple(key[i] for i in idx)
        out[sub] = out.get(sub, Fraction(0)) + mass
    return out


def cylinder_mass(t: CylinderTable, assignment: dict) -> Fraction:
    """Mass of the cylinder fixing the given window times to pieces."""
    elems = set(t.window.elements())
    p = t.partition.p
    fixed = {}
    for gamma, piece in assignment.items():
        gamma = tuple(gamma)
        if gamma not in elems:
            raise ValueError(f"time {gamma} outside the window")
        if not 0 <= piece < p:
            raise ValueError(f"piece index {piece} out of range")
        fixed[gamma] = piece
    pos = {e: i for i, e in enumerate(t.window.elements())}
    total = Fraction(0)
    for key, mass in t.masses.items():
        if all(key[pos[g]] == v for g, v in fixed.items()):
            total += mass
    return total


def marginal(t: CylinderTable) -> StepMeasure:
    """Single-time marginal spread uniformly inside each piece."""
    zero = (0,) * t.window.d
    m = marginalize_to(t, [zero])
    masses = [m.get((j,), Fraction(0)) for j in range(t.partition.p)]
    return from_piece_masses(t.partition.cuts, masses)


def pair_matrix(t: CylinderTable, alpha, beta) -> list[list[Fraction]]:
    """The (alpha, beta) two-time marginal as a p x p matrix."""
    m = marginalize_to(t, [tuple(alpha), tuple(beta)])
    p = t.partition.p
    out = [[Fraction(0)] * p for _ in range(p)]
    for (i, j), mass in m.items():
        out[i][j] = mass
    return out


# -- table metric ------------------------------------------------------------


def refine_partition(t: CylinderTable, new_cuts) -> CylinderTable:
    """Re-express over a finer partition, splitting cell masses by length
    (the cell-uniform convention makes this exact)."""
    fine = Partition(tuple(sorted(set(t.partition.cuts) | {Fraction(c) for c in new_cuts})))
    children: list[list[tuple[int, Fraction]]] = []
    for j in range(t.partition.p):
        lo, hi = t.partition.piece(j)
        kids = []
        for jj in range(fine.p):
            flo, fhi = fine.piece(jj)
            if lo <= flo and fhi <= hi:
                kids.append((jj, (fhi - flo) / (hi - lo)))
        children.append(kids)
    out: dict[tuple[int, ...], Fraction] = {}
    for key, mass in t.masses.items():
        expansions = [children[j] for j in key]
        for combo in product(*expansions):
            new_key = tuple(jj for jj, _f in combo)
            factor = mass
            for _jj, f in combo:
                factor *= f
            out[new_key] = out.get(new_key, Fraction(0)) + factor
    return CylinderTable(t.window, fine, out)


def marginalize_window(t: CylinderTable, w2: int) -> CylinderTable:
    """Restrict to the sub-box {0..w2-1}^d."""
    if not 1 <= w2 <= t.window.w:
        raise ValueError("bad sub-window size")
    if w2 == t.window.w:
        return t
    sub = Window(t.window.d, w2)
    m = marginalize_to(t, sub.elements())
    return CylinderTable(sub, t.partition, m)


def sim_dist(t1: CylinderTable, t2: CylinderTable) -> Fraction:
    """Max over all sub-window cylinders of the mass gap |t1(C) - t2(C)|.

    Tables are first brought to a common window (the smaller box) and a
    common partition (the union of cuts).
    """
    if t1.window.d != t2.window.d:
        raise ValueError(f"rank mismatch: {t1.window.d} vs {t2.window.d}")
    w = min(t1.window.w, t2.window.w)
    t1, t2 = marginalize_window(t1, w), marginalize_window(t2, w)
    if t1.partition != t2.partition:
        t1 = refine_partition(t1, t2.partition.cuts)
        t2 = refine_partition(t2, t1.partition.cuts)
    k = t1.window.size()
    diffs: dict[tuple, Fraction] = {}
    for table, sign in ((t1, 1), (t2, -1)):
        for key, mass in table.masses.items():
            for mask in range(1 << k):
                pattern = tuple(key[i] if mask >> i & 1 else None for i in range(k))
                diffs[pattern] = diffs.get(pattern, Fraction(0)) + sign * mass
    return max((abs(v) for v in diffs.values()), default=Fraction(0))


# -- graph tests -------------------------------------------------------------


@dataclass(frozen=True)
class GraphTest:
    ok: bool
    worst_b: int
    best_a: int
    diameter: Fraction


def _check_joining(matrix) -> tuple[int, list[Fraction], list[Fraction]]:
    p = len(matrix)
    rows = [sum(r, Fraction(0)) for r in matrix]
    cols = [sum((matrix[i][j] for i in range(p)), Fraction(0)) for j in range(p)]
    if rows != cols:
        raise ValueError("row and column marginals differ; not a joining")
    return p, rows, cols


def _diameter(a, x, b) -> Fraction:
    return max(a, x, b) - min(a, x, b)


def graph_witness_exact(matrix, b_mask: int) -> tuple[int, Fraction]:
    """Best A for this B by full enumeration over the 2^p unions."""
    p, rows, _cols = _check_joining(matrix)
    b_total = Fraction(0)
    into_b = [Fraction(0)] * p
    for j in range(p):
        if b_mask >> j & 1:
            b_total += rows[j]
            for i in range(p):
                into_b[i] += matrix[i][j]
    best_a, best = 0, None
    size = 1 << p
    a_sum = [Fraction(0)] * size
    x_sum = [Fraction(0)] * size
    for mask in range(1, size):
        low = mask & -mask
        i = low.bit_length() - 1
        a_sum[mask] = a_sum[mask ^ low] + rows[i]
        x_sum[mask] = x_sum[mask ^ low] + into_b[i]
    for mask in range(size):
        d = _diameter(a_sum[mask], x_sum[mask], b_total)
        if best is None or d < best:
            best_a, best = mask, d
    return best_a, best


def greedy_graph_witness(matrix, b_mask: int) -> tuple[int, Fraction]:
    """The documented shortcut: A collects the pieces sending more than half
    of their mass into B."""
    p, rows, _cols = _check_joining(matrix)
    b_total = Fraction(0)
    into_b = [Fraction(0)] * p
    for j in range(p):
        if b_mask >> j & 1:
            b_total += rows[j]
            for i in range(p):
                into_b[i] += matrix[i][j]
    a_mask = 0
    a = x = Fraction(0)
    for i in range(p):
        if rows[i] > 0 and 2 * into_b[i] > rows[i]:
            a_mask |= 1 << i
            a += rows[i]
            x += into_b[i]
    return a_mask, _diameter(a, x, b_total)


def _graph_test_matrix(matrix, epsilon: Fraction) -> GraphTest:
    p, _rows, _cols = _check_joining(matrix)
    worst_b, worst_a, worst = 0, 0, Fraction(0)
    for b_mask in range(1 << p):
        a_mask, d = greedy_graph_witness(matrix, b_mask)
        if d >= epsilon:
            a_mask, d = graph_witness_exact(matrix, b_mask)
        if d > worst:
            worst_b, worst_a, worst = b_mask, a_mask, d
    return GraphTest(worst < epsilon, worst_b, worst_a, worst)


def is_graph_joining(t: CylinderTable, epsilon) -> GraphTest:
    """Exact two-time graph test: for every union B of pieces some union A
    must make {mass(A x Y), mass(A x B), mass(Y x B)} have diameter < epsilon.

    Greedy witnesses are tried first; any miss falls back to exhaustive
    enumeration, so the verdict is exact.  The reported worst B carries its
    exact best diameter whenever the verdict is false.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if t.window.size() != 2:
        raise ValueError("graph joining test needs a two-time window")
    e0, e1 = t.window.elements()
    return _graph_test_matrix(pair_matrix(t, e0, e1), epsilon)


def is_graph_sim(t: CylinderTable, epsilon) -> tuple[bool, list]:
    """Run the graph test on every ordered pair of distinct window times."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if t.partition.p > 16:
        raise ValueError("graph test enumerates 2^p unions; p > 16 refused")
    elems = t.window.elements()
    results = []
    ok = True
    for alpha in elems:
        for beta in elems:
            if alpha == beta:
                continue
            res = _graph_test_matrix(pair_matrix(t, alpha, beta), epsilon)
            results.append((alpha, beta, res))
            ok = ok and res.ok
    return ok, results


# -- smoothing ---------------------------------------------------------------


def _smear_weight(piece, cell, delta: Fraction) -> Fraction:
    """Probability that a uniform point of `cell` plus an independent
    uniform [0, delta) shift lands in `piece` (all mod 1)."""
    plo, phi = piece
    clo, chi = cell
    target = iv.interval(plo, phi)
    phi_at = lambda y: iv.length(iv.intersect(iv.translate(target, -y), iv.interval(clo, chi)))
    knots = {Fraction(0), delta}
    for a in (plo, phi):
        for b in (clo, chi):
            y = (a - b) % 1
            if 0 < y < delta:
                knots.add(y)
    ys = sorted(knots)
    area = Fraction(0)
    vals = [phi_at(y) for y in ys]
    for (y1, v1), (y2, v2) in zip(zip(ys, vals), zip(ys[1:], vals[1:])):
        area += (y2 - y1) * (v1 + v2) / 2  # integrand is piecewise linear
    return area / (delta * (chi - clo))


def convolve_sim(t: CylinderTable, delta) -> CylinderTable:
    """Blur each coordinate with an independent uniform [0, delta) shift.

    Exact under the cell-uniform convention; delta = 0 returns the table
    unchanged.  The single-time marginal of the result agrees piece by
    piece with convolving the table's marginal with the uniform measure on
    [0, delta).
    """
    delta = Fraction(delta)
    if delta == 0:
        return t
    if not 0 < delta < 1:
        raise ValueError("delta must lie in [0, 1)")
    p = t.partition.p
    pieces = t.partition.pieces()
    weight = [[_smear_weight(pieces[i], pieces[c], delta) for c in range(p)] for i in range(p)]
    k = t.window.size()
    current = dict(t.masses)
    for pos in range(k):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for key, mass in current.items():
            c = key[pos]
            for i in range(p):
                wgt = weight[i][c]
                if wgt == 0:
                    continue
                new_key = key[:pos] + (i,) + key[pos + 1 :]
                nxt[new_key] = nxt.get(new_key, Fraction(0)) + mass * wgt
        current = nxt
    return CylinderTable(t.window, t.partition, current)


def average_sims(t1: CylinderTable, t2: CylinderTable, weight) -> CylinderTable:
    """(1 - weight) * t1 + weight * t2 over a shared window and partition."""
    weight = Fraction(weight)
    if not 0 <= weight <= 1:
        raise ValueError("weight must lie in [0, 1]")
    if t1.window != t2.window or t1.partition != t2.partition:
        raise ValueError("tables must share window and partition")
    out: dict[tuple[int, ...], Fraction] = {}
    for key, mass in t1.masses.items():
        out[key] = out.get(key, Fraction(0)) + (1 - weight) * mass
    for key, mass in t2.masses.items():
        out[key] = out.get(key, Fraction(0)) + weight * mass
    return CylinderTable(t1.window, t1.partition, out)


def _applicable_pairs(window: Window, beta) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    beta = tuple(beta)
    if len(beta) != window.d:
        raise ValueError("shift has wrong rank")
    if all(b == 0 for b in beta):
        raise ValueError("shift must be nonzero")
    elems = set(window.elements())
    out = []
    for gamma in sorted(elems):
        target = tuple(g + b for g, b in zip(gamma, beta))
        if target in elems:
            out.append((gamma, target))
    return out


def fixed_mass_bound(t: CylinderTable, beta) -> Fraction:
    """Window upper bound for the mass of points their beta-shift fixes:
    total mass of assignments whose labels match at every time pair
    (gamma, gamma + beta) inside the window."""
    pairs = _applicable_pairs(t.window, beta)
    if not pairs:
        raise ValueError(f"no window time pairs at shift {tuple(beta)}")
    pos = {e: i for i, e in enumerate(t.window.elements())}
    idx = [(pos[g], pos[h]) for g, h in pairs]
    total = Fraction(0)
    for key, mass in t.masses.items():
        if all(key[i] == key[j] for i, j in idx):
            total += mass
    return total


def fixed_mass_report(t: CylinderTable, beta) -> tuple[Fraction, Fraction]:
    """(cell-level bound, exact value for the cell-uniform measure).

    Within a cell box the coordinates are independent and continuous, so
    two coordinates agree with probability zero: the exact cell-uniform
    value is always 0 once the shift applies anywhere in the window.
    """
    bound = fixed_mass_bound(t, beta)
    return bound, Fraction(0)
