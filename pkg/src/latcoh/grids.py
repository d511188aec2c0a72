"""Hilbert and weight grids of a good semigroup on a lattice box R(0, L).

The Hilbert grid is filled from the increment law

    h(0) = 0,   h(l + e_i) - h(l) = 1  iff  DeltaBar_i(l) is nonempty,

with every cell checked against all incoming edges; a disagreement would
mean the input set is not a good semigroup. The weight grid is
w(l) = 2 h(l) - |l|.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import ConsistencyError, InputError
from .points import box_points, pleq, psub, zeros
from .semigroup import GoodSemigroup

HILBERT = "hilbert"
WEIGHT = "weight"
MEMBERSHIP = "membership"


class ValueGrid:
    """Integer values on the box R(0, hi); role is hilbert/weight/membership."""

    __slots__ = ("hi", "values", "role")

    def __init__(self, hi, values, role):
        self.hi = tuple(int(x) for x in hi)
        values = np.asarray(values)
        if values.shape != tuple(x + 1 for x in self.hi):
            raise InputError(f"value array shape {values.shape} does not match box {self.hi}")
        self.values = values
        self.values.setflags(write=False)
        self.role = role

    @property
    def r(self):
        return len(self.hi)

    def __getitem__(self, point):
        if len(point) != self.r or not all(0 <= x <= h for x, h in zip(point, self.hi)):
            raise InputError(f"point {point} outside box R(0, {self.hi})")
        return int(self.values[tuple(point)])

    def points(self):
        return box_points(zeros(self.r), self.hi)


@dataclass(frozen=True)
class Minimum:
    point: tuple
    value: int
    kind: str  # "local" | "generalized"


class MinimaList(list):
    """Minima sorted lexicographically by point."""


def membership_grid(s: GoodSemigroup, hi=None):
    """Indicator of S on R(0, hi) via the min(l, c) reconstruction."""
    hi = _default_hi(s) if hi is None else tuple(hi)
    c = s.conductor
    small = np.zeros(tuple(x + 1 for x in c), dtype=bool)
    for e in s.small_elements:
        small[e] = True
    idx = np.ix_(*[np.minimum(np.arange(h + 1), ci) for h, ci in zip(hi, c)])
    return ValueGrid(hi, small[idx], MEMBERSHIP)


def delta_bar_grids(member: ValueGrid):
    """For each axis i the bit array  D_i[l] = (DeltaBar_i(l) != empty).

    Computed as a suffix-OR of the membership grid along every axis but i;
    capping witnesses at max(l, c) keeps them inside the box, so this is
    exact whenever the box dominates the conductor.
    """
    m = np.asarray(member.values)
    out = []
    for i in range(member.r):
        d = m.copy()
        for j in range(member.r):
            if j == i:
                continue
            d = np.flip(np.logical_or.accumulate(np.flip(d, axis=j), axis=j), axis=j)
        out.append(d)
    return out


def hilbert_grid(s: GoodSemigroup, hi=None):
    """Hilbert grid of S on R(0, hi); hi defaults to conductor + 1.

    Requires hi >= conductor so that DeltaBar witnesses can be capped into
    the box. The fill is checked across all incoming edges.
    """
    hi = _default_hi(s) if hi is None else tuple(int(x) for x in hi)
    if not pleq(s.conductor, hi):
        raise InputError(f"box {hi} must dominate the conductor {s.conductor}")
    member = membership_grid(s, hi)
    dbar = delta_bar_grids(member)
    h = _fill_from_increments(dbar)
    for a, d in enumerate(dbar):
        inc = np.diff(h, axis=a)
        expect = np.take(d, range(hi[a]), axis=a)
        if not np.array_equal(inc, expect.astype(np.int64)):
            bad = np.argwhere(inc != expect)
            raise ConsistencyError(
                f"Hilbert fill is path-dependent at {tuple(bad[0])} axis {a}: input is not a good semigroup"
            )
    return ValueGrid(hi, h, HILBERT)


def _fill_from_increments(dbar):
    """Sum increments along the canonical staircase (axis a varies after a-1)."""
    r = len(dbar)
    shape = dbar[0].shape
    h = np.zeros(shape, dtype=np.int64)
    for a in range(r):
        sl = tuple([slice(None)] * (a + 1) + [0] * (r - a - 1))
        d0 = dbar[a][sl].astype(np.int64)
        cs = np.zeros_like(d0)
        cs_view = np.moveaxis(cs, a, -1)
        d_view = np.moveaxis(d0, a, -1)
        cs_view[..., 1:] = np.cumsum(d_view[..., :-1], axis=-1)
        h += cs.reshape(cs.shape + (1,) * (r - a - 1))
    return h


def weight_grid(h: ValueGrid):
    """w = 2 h - |l| pointwise."""
    if h.role != HILBERT:
        raise InputError("weight_grid expects a hilbert grid")
    shape = h.values.shape
    total = np.zeros(shape, dtype=np.int64)
    for a, n in enumerate(shape):
        total += np.arange(n, dtype=np.int64).reshape((n,) + (1,) * (len(shape) - a - 1))
    return ValueGrid(h.hi, 2 * h.values - total, WEIGHT)


def semigroup_from_hilbert(h: ValueGrid):
    """Membership on the interior: l in S iff h strictly grows in all directions."""
    if h.role != HILBERT:
        raise InputError("semigroup_from_hilbert expects a hilbert grid")
    mem = None
    for a in range(h.r):
        inc = np.diff(h.values, axis=a) > 0
        inc = inc[tuple(slice(0, hh) for hh in _interior(h.hi))]
        mem = inc if mem is None else (mem & inc)
    return ValueGrid(psub(h.hi, (1,) * h.r), mem, MEMBERSHIP)


def _interior(hi):
    return tuple(x for x in hi)


def weight_irreducible_oracle(s: GoodSemigroup, ell):
    """r = 1 oracle: #elements below ell minus #gaps below ell."""
    if s.r != 1:
        raise InputError("the irreducible oracle needs a numerical semigroup")
    ell = int(ell)
    elements = sum(1 for k in range(ell) if s.contains((k,)))
    gaps = ell - elements
    return elements - gaps


def restrict_branches(s: GoodSemigroup, h: ValueGrid, branches):
    """Hilbert grid of the sub-curve on the selected branch axes.

    Slices h at zero on the dropped axes; by the restriction property this
    equals the sub-curve's own Hilbert grid on that box.
    """
    branches = sorted(set(branches))
    if not branches or any(b < 0 or b >= s.r for b in branches):
        raise InputError(f"invalid branch subset {branches} for r={s.r}")
    sl = tuple(slice(None) if a in branches else 0 for a in range(s.r))
    return ValueGrid(tuple(h.hi[a] for a in branches), h.values[sl], h.role)


def local_minima(w: ValueGrid, s: GoodSemigroup):
    """Points of R(0, c) where w strictly increases in every +/- direction.

    Each reported point is cross-checked against the semigroup
    characterization (member with Delta(p - 1) empty).
    """
    mask = _minima_mask(w, s.conductor, require_up=True)
    out = MinimaList()
    for p in np.argwhere(mask):
        p = tuple(int(x) for x in p)
        member = s.contains(p)
        delta_empty = not s.delta_any_nonempty(psub(p, (1,) * s.r))
        if not (member and delta_empty):
            raise ConsistencyError(
                f"grid local minimum {p} fails the semigroup test (member={member}, delta_empty={delta_empty})"
            )
        out.append(Minimum(p, int(w.values[p]), "local"))
    return out


def generalized_local_minima(w: ValueGrid, s: GoodSemigroup):
    """Points where w strictly increases in every minus direction."""
    mask = _minima_mask(w, s.conductor, require_up=False)
    out = MinimaList()
    for p in np.argwhere(mask):
        p = tuple(int(x) for x in p)
        if any(p) and s.delta_any_nonempty(psub(p, (1,) * s.r)):
            raise ConsistencyError(f"grid generalized minimum {p} has Delta(p-1) nonempty")
        out.append(Minimum(p, int(w.values[p]), "generalized"))
    return out


def _minima_mask(w, c, require_up):
    if not pleq(c, w.hi) or (require_up and not all(x < h for x, h in zip(c, w.hi))):
        raise InputError("weight grid too small; need R(0, c + 1)")
    region = tuple(slice(0, x + 1) for x in c)
    v = w.values
    mask = np.ones(tuple(x + 1 for x in c), dtype=bool)
    for a in range(w.r):
        if require_up:
            up = np.take(v, range(1, c[a] + 2), axis=a) > np.take(v, range(c[a] + 1), axis=a)
            mask &= up[tuple(region[i] if i != a else slice(None) for i in range(w.r))]
        down = np.ones_like(mask)
        sub = np.take(v, range(1, c[a] + 1), axis=a) < np.take(v, range(c[a]), axis=a)
        idx = tuple(
            region[i] if i != a else slice(1, c[a] + 1) for i in range(w.r)
        )
        down[idx] = sub[tuple(region[i] if i != a else slice(None) for i in range(w.r))]
        mask &= down
    return mask


def path_weight_formula_check(w: ValueGrid, s: GoodSemigroup, p, max_enumerate=400):
    """Evaluate the dual-drop path count on increasing paths 0 -> p.

    Counts steps where w drops and the dual path drops too; the negated
    count must equal w(p) on every path. All paths are used when there are
    at most ``max_enumerate``, otherwise a deterministic sample (>= 3).
    """
    p = tuple(int(x) for x in p)
    expected = w[p]
    for path in _increasing_paths(p, max_enumerate):
        count = 0
        for k in range(len(path) - 1):
            x, y = path[k], path[k + 1]
            if w[y] != w[x] - 1:
                continue
            if w[psub(p, x)] == w[psub(p, y)] - 1:
                count += 1
        if -count != expected:
            return False
    return True


def _increasing_paths(p, max_enumerate):
    """All monotone paths 0 -> p, or a deterministic >= 3 path sample."""
    r = len(p)
    total = 1
    rem = sum(p)
    for a in range(r):
        total *= comb(rem, p[a])
        rem -= p[a]
    if total <= max_enumerate:
        seqs = sorted(_step_sequences(p))
    else:
        axes = tuple(a for a in range(r) for _ in range(p[a]))
        seqs = {axes, tuple(reversed(axes))}
        round_robin = []
        left = list(p)
        while any(left):
            for a in range(r):
                if left[a]:
                    round_robin.append(a)
                    left[a] -= 1
        seqs.add(tuple(round_robin))
        seqs.add(tuple(reversed(round_robin)))
        seqs = sorted(seqs)
    for seq in seqs:
        path = [zeros(r)]
        for a in seq:
            x = path[-1]
            path.append(x[:a] + (x[a] + 1,) + x[a + 1 :])
        yield path


def _step_sequences(rem):
    """Distinct axis orders for a monotone path climbing the vector ``rem``."""
    if not any(rem):
        yield ()
        return
    for a in range(len(rem)):
        if rem[a]:
            shrunk = rem[:a] + (rem[a] - 1,) + rem[a + 1 :]
            for tail in _step_sequences(shrunk):
                yield (a,) + tail


def _default_hi(s):
    return tuple(x + 1 for x in s.conductor)
