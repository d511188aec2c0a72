"""Cubical sublevel complexes S_n cap R(0, hi) and their integral cohomology.

A cube is (base, dirs): the axis-parallel cube with smallest vertex ``base``
spanned by the coordinate directions ``dirs``. Sublevel complexes contain a
cube iff all its vertices have weight <= n, so they are full subcomplexes of
the box and automatically face-closed.

Cohomology is cellular: coboundary matrices with the sign convention
(-1)^(position of the direction in sorted dirs), ranks and torsion by
integer Smith normal form over arbitrary-precision ints.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InputError
from .grids import WEIGHT, ValueGrid


@dataclass(frozen=True)
class Cube:
    base: tuple
    dirs: tuple  # strictly increasing axis indices

    @property
    def dim(self):
        return len(self.dirs)

    def vertices(self):
        out = []
        for k in range(1 << len(self.dirs)):
            v = list(self.base)
            for p, a in enumerate(self.dirs):
                if k >> p & 1:
                    v[a] += 1
            out.append(tuple(v))
        return out


def cube_weight(w: ValueGrid, cube: Cube):
    """Max of w over the cube's vertices."""
    return max(w[v] for v in cube.vertices())


class CubicalComplex:
    """Finite face-closed set of cubes in R(0, hi).

    ``blocks`` maps a sorted dirs tuple to the sorted array of flat base
    indices (C-order raveling of the shape hi + 1).
    """

    def __init__(self, hi, blocks):
        self.hi = tuple(int(x) for x in hi)
        self.shape = tuple(x + 1 for x in self.hi)
        self.blocks = {tuple(d): np.asarray(b, dtype=np.int64) for d, b in blocks.items() if len(b)}
        self._index = None

    @property
    def r(self):
        return len(self.hi)

    @classmethod
    def from_cubes(cls, hi, cubes):
        """Build the face closure of an explicit cube list."""
        hi = tuple(int(x) for x in hi)
        shape = tuple(x + 1 for x in hi)
        seen = set()
        stack = [(tuple(c.base), tuple(c.dirs)) for c in cubes]
        for base, dirs in stack:
            if len(base) != len(hi) or list(dirs) != sorted(set(dirs)):
                raise InputError(f"bad cube ({base}, {dirs})")
            if any(b < 0 for b in base) or any(
                base[a] + (1 if a in dirs else 0) > h for a, h in zip(range(len(hi)), hi)
            ):
                raise InputError(f"cube ({base}, {dirs}) leaves the box R(0, {hi})")
        while stack:
            key = stack.pop()
            if key in seen:
                continue
            seen.add(key)
            base, dirs = key
            for p, a in enumerate(dirs):
                rest = dirs[:p] + dirs[p + 1 :]
                up = list(base)
                up[a] += 1
                stack.append((base, rest))
                stack.append((tuple(up), rest))
        blocks = {}
        for base, dirs in seen:
            blocks.setdefault(dirs, []).append(np.ravel_multi_index(base, shape))
        return cls(hi, {d: np.sort(np.asarray(b, dtype=np.int64)) for d, b in blocks.items()})

    def cubes(self, q=None):
        for dirs in sorted(self.blocks):
            if q is not None and len(dirs) != q:
                continue
            for flat in self.blocks[dirs]:
                yield Cube(tuple(int(x) for x in np.unravel_index(int(flat), self.shape)), dirs)

    def cube_count(self, q):
        return sum(len(b) for d, b in self.blocks.items() if len(d) == q)

    def counts(self):
        out = {}
        for d, b in self.blocks.items():
            out[len(d)] = out.get(len(d), 0) + len(b)
        return out

    def has_cube(self, cube: Cube):
        flats = self.blocks.get(tuple(cube.dirs))
        if flats is None:
            return False
        flat = np.ravel_multi_index(cube.base, self.shape)
        i = np.searchsorted(flats, flat)
        return i < len(flats) and flats[i] == flat

    def is_subcomplex_of(self, other):
        for d, b in self.blocks.items():
            ob = other.blocks.get(d)
            if ob is None:
                return False
            pos = np.searchsorted(ob, b)
            if pos.max(initial=-1) >= len(ob) or not np.array_equal(ob[pos], b):
                return False
        return True

    # -- cochain bookkeeping -------------------------------------------------

    def index(self):
        """Per dimension q: ordered blocks [(dirs, flats, offset)] and sizes."""
        if self._index is None:
            per_q = {}
            for dirs in sorted(self.blocks):
                per_q.setdefault(len(dirs), []).append(dirs)
            index = {}
            for q, dirlist in per_q.items():
                blocks = []
                offset = 0
                for dirs in dirlist:
                    flats = self.blocks[dirs]
                    blocks.append((dirs, flats, offset))
                    offset += len(flats)
                index[q] = (blocks, offset)
            self._index = index
        return self._index

    def cochain_dim(self, q):
        idx = self.index()
        return idx[q][1] if q in idx else 0

    def cube_id(self, cube: Cube):
        idx = self.index()
        q = cube.dim
        if q not in idx:
            raise InputError(f"no {q}-cubes present")
        flat = np.ravel_multi_index(cube.base, self.shape)
        for dirs, flats, offset in idx[q][0]:
            if dirs == tuple(cube.dirs):
                i = int(np.searchsorted(flats, flat))
                if i < len(flats) and flats[i] == flat:
                    return offset + i
                break
        raise InputError(f"cube {cube} not in complex")

    def coboundary_triplets(self, q):
        """Entries (row, col, sign) of delta_q : C^q -> C^(q+1).

        Row = (q+1)-cube, col = q-face, sign = (-1)^(slot of the dropped
        direction), with the far face of the pair taking the opposite sign.
        """
        idx = self.index()
        if q + 1 not in idx:
            return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64), 0, self.cochain_dim(q)
        qblocks = {dirs: (flats, offset) for dirs, flats, offset in idx.get(q, ([], 0))[0]}
        rows, cols, vals = [], [], []
        strides = np.array(
            [int(np.ravel_multi_index(tuple(1 if j == a else 0 for j in range(self.r)), self.shape)) for a in range(self.r)]
            if self.r > 0
            else [],
            dtype=np.int64,
        )
        for dirs, flats, offset in idx[q + 1][0]:
            n = len(flats)
            row_ids = offset + np.arange(n, dtype=np.int64)
            for p, a in enumerate(dirs):
                rest = dirs[:p] + dirs[p + 1 :]
                rflats, roffset = qblocks[rest]
                sign = -1 if p % 2 else 1
                near = roffset + np.searchsorted(rflats, flats)
                far = roffset + np.searchsorted(rflats, flats + strides[a])
                rows.extend([row_ids, row_ids])
                cols.extend([far, near])
                vals.extend([np.full(n, sign, np.int64), np.full(n, -sign, np.int64)])
        rows = np.concatenate(rows) if rows else np.zeros(0, np.int64)
        cols = np.concatenate(cols) if cols else np.zeros(0, np.int64)
        vals = np.concatenate(vals) if vals else np.zeros(0, np.int64)
        return rows, cols, vals, self.cochain_dim(q + 1), self.cochain_dim(q)

    def coboundary_matrix(self, q):
        rows, cols, vals, nr, nc = self.coboundary_triplets(q)
        m = np.zeros((nr, nc), dtype=np.int64)
        np.add.at(m, (rows, cols), vals)
        return m


def vertex_mask(w: ValueGrid, n, hi):
    region = tuple(slice(0, x + 1) for x in hi)
    return np.asarray(w.values[region]) <= n


def build_sublevel(w: ValueGrid, n, hi=None):
    """All cubes of R(0, hi) whose every vertex has weight <= n.

    ``hi`` defaults to the grid box; callers model S_n cap R(0,c) by
    passing hi = c.
    """
    if w.role != WEIGHT:
        raise InputError("build_sublevel expects a weight grid")
    hi = w.hi if hi is None else tuple(int(x) for x in hi)
    if not all(0 <= a <= b for a, b in zip(hi, w.hi)):
        raise InputError(f"box {hi} exceeds the grid box {w.hi}")
    vmask = vertex_mask(w, n, hi)
    shape = tuple(x + 1 for x in hi)
    r = len(hi)
    blocks = {}
    for q in range(r + 1):
        for dirs in combinations(range(r), q):
            m = vmask
            for a in dirs:
                m = np.take(m, range(0, m.shape[a] - 1), axis=a) & np.take(m, range(1, m.shape[a]), axis=a)
            if not m.any():
                continue
            bases = np.argwhere(m)
            blocks[dirs] = np.ravel_multi_index(bases.T, shape)
    return CubicalComplex(hi, blocks)


def connected_components(K: CubicalComplex):
    """Vertex labeling by edges; labels are 0..k-1 ordered by the smallest
    flat vertex index of each component."""
    verts = K.blocks.get((), np.zeros(0, np.int64))
    pos = {int(v): i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    strides = {}
    for a in range(K.r):
        strides[a] = int(np.ravel_multi_index(tuple(1 if j == a else 0 for j in range(K.r)), K.shape))
    for dirs, flats in K.blocks.items():
        if len(dirs) != 1:
            continue
        s = strides[dirs[0]]
        for f in flats:
            i, j = pos[int(f)], pos[int(f) + s]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    roots = {}
    labels = {}
    for i, v in enumerate(verts):
        root = find(i)
        if root not in roots:
            roots[root] = len(roots)
        labels[int(v)] = roots[root]
    return labels, len(roots)


@dataclass(frozen=True)
class CohomologyGroup:
    free_rank: int
    torsion: tuple = ()  # invariant factors > 1, divisibility order

    def is_zero(self):
        return self.free_rank == 0 and not self.torsion


def cohomology(K: CubicalComplex, max_q=None):
    """Integral cohomology per degree: H^q = Z^free + torsion factors."""
    r = K.r
    top = r if max_q is None else min(max_q, r)
    ranks = {}
    factors = {}
    for q in range(-1, top + 1):
        rows, cols, vals, nr, nc = K.coboundary_triplets(q) if q >= 0 else (None, None, None, 0, 0)
        if q < 0 or nr == 0 or nc == 0:
            ranks[q], factors[q] = 0, []
        else:
            fs = smith_invariant_factors(rows, cols, vals, nr, nc)
            ranks[q], factors[q] = len(fs), fs
    out = []
    for q in range(top + 1):
        free = K.cochain_dim(q) - ranks[q] - ranks.get(q - 1, 0)
        torsion = tuple(f for f in factors.get(q - 1, []) if f > 1)
        out.append(CohomologyGroup(int(free), torsion))
    return out


def euler_characteristic_counts(K: CubicalComplex):
    return sum((-1) ** q * n for q, n in K.counts().items())


# -- Smith normal form ------------------------------------------------------


def smith_invariant_factors(rows, cols, vals, nrows, ncols):
    """Invariant factors (positive, divisibility chain) of a sparse integer
    matrix given as triplets. Unit pivots are eliminated sparsely; whatever
    residual remains goes through the dense routine."""
    rdict = {}
    for r0, c0, v0 in zip(rows, cols, vals):
        if v0:
            d = rdict.setdefault(int(r0), {})
            c0 = int(c0)
            nv = d.get(c0, 0) + int(v0)
            if nv:
                d[c0] = nv
            elif c0 in d:
                del d[c0]
    for k in [k for k, d in rdict.items() if not d]:
        del rdict[k]
    cindex = {}
    for r0, d in rdict.items():
        for c0 in d:
            cindex.setdefault(c0, set()).add(r0)

    unit_factors = 0
    progress = True
    while progress:
        progress = False
        for r0 in sorted(rdict):
            d = rdict.get(r0)
            if not d:
                rdict.pop(r0, None)
                continue
            piv = None
            for c0 in sorted(d):
                if d[c0] in (1, -1):
                    piv = c0
                    break
            if piv is None:
                continue
            v = d[piv]
            prow = rdict.pop(r0)
            for c0 in prow:
                cindex[c0].discard(r0)
            for r1 in sorted(cindex.get(piv, ())):
                row1 = rdict[r1]
                mult = row1[piv] * v  # row1 -= mult * prow, clears column piv
                for c0, pv in prow.items():
                    nv = row1.get(c0, 0) - mult * pv
                    if nv:
                        row1[c0] = nv
                        cindex.setdefault(c0, set()).add(r1)
                    elif c0 in row1:
                        del row1[c0]
                        cindex[c0].discard(r1)
                if not row1:
                    del rdict[r1]
            cindex.pop(piv, None)
            unit_factors += 1
            progress = True
    if not rdict:
        return [1] * unit_factors
    # dense residual
    rows_left = sorted(rdict)
    cols_left = sorted({c0 for d in rdict.values() for c0 in d})
    cpos = {c0: i for i, c0 in enumerate(cols_left)}
    dense = [[0] * len(cols_left) for _ in rows_left]
    for i, r0 in enumerate(rows_left):
        for c0, v0 in rdict[r0].items():
            dense[i][cpos[c0]] = v0
    residual = dense_invariant_factors(dense)
    return _divisibility_chain([1] * unit_factors + residual)


def dense_invariant_factors(m):
    """Textbook SNF diagonal of a dense integer matrix (no transforms)."""
    m = [row[:] for row in m]
    out = []
    top = 0
    while True:
        best = None
        for i in range(top, len(m)):
            for j in range(top, len(m[0]) if m else 0):
                v = m[i][j]
                if v and (best is None or abs(v) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        m[top], m[i0] = m[i0], m[top]
        for row in m:
            row[top], row[j0] = row[j0], row[top]
        again = True
        while again:
            again = False
            piv = m[top][top]
            for i in range(top + 1, len(m)):
                if m[i][top]:
                    q = m[i][top] // piv
                    for j in range(top, len(m[0])):
                        m[i][j] -= q * m[top][j]
                    if m[i][top]:
                        m[top], m[i] = m[i], m[top]
                        again = True
            piv = m[top][top]
            for j in range(top + 1, len(m[0])):
                if m[top][j]:
                    q = m[top][j] // piv
                    for i in range(top, len(m)):
                        m[i][j] -= q * m[i][top]
                    if m[top][j]:
                        for i in range(top, len(m)):
                            m[i][top], m[i][j] = m[i][j], m[i][top]
                        again = True
        out.append(abs(m[top][top]))
        top += 1
        if top >= len(m) or top >= len(m[0]):
            break
    return _divisibility_chain(out)


def _divisibility_chain(factors):
    """Normalize positive factors into a divisibility chain via gcd/lcm."""
    import math

    fs = [f for f in factors if f]
    changed = True
    while changed:
        changed = False
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                if fs[j] % fs[i]:
                    g = math.gcd(fs[i], fs[j])
                    l = fs[i] * fs[j] // g
                    fs[i], fs[j] = g, l
                    changed = True
    return sorted(fs)


# -- dense SNF with transforms (fixture-scale, used for induced maps) --------


def snf_with_transforms(m):
    """U M V = D diagonal with U, V unimodular; also returns U^{-1}.

    The diagonal is not normalized into a divisibility chain (kernels,
    integral solving and free-part extraction do not need it; invariant
    factors come from smith_invariant_factors instead).
    ``m`` is a list of int rows; returns (d, u, uinv, v) as lists of rows.
    """
    rows, cols = len(m), len(m[0]) if m else 0
    d = [list(map(int, row)) for row in m]
    u = _identity(rows)
    uinv = _identity(rows)
    v = _identity(cols)

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def row_addmul(i, j, q):
        # row_i -= q * row_j
        d[i] = [a - q * b for a, b in zip(d[i], d[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]
        for row in uinv:
            row[j] += q * row[i]

    def col_swap(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def col_addmul(i, j, q):
        # col_i -= q * col_j
        for row in d:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    top = 0
    while top < rows and top < cols:
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best != (top, top):
            if best[0] != top:
                row_swap(top, best[0])
            if best[1] != top:
                col_swap(top, best[1])
        again = True
        while again:
            again = False
            for i in range(top + 1, rows):
                if d[i][top]:
                    row_addmul(i, top, d[i][top] // d[top][top])
                    if d[i][top]:
                        row_swap(top, i)
                        again = True
            for j in range(top + 1, cols):
                if d[top][j]:
                    col_addmul(j, top, d[top][j] // d[top][top])
                    if d[top][j]:
                        col_swap(top, j)
                        again = True
        top += 1
    for i in range(top):
        if d[i][i] < 0:
            for row in d:
                row[i] = -row[i]
            for row in v:
                row[i] = -row[i]
    return d, u, uinv, v


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def kernel_basis(m):
    """Integer basis of ker(M) as a list of column vectors."""
    rows, cols = len(m), len(m[0]) if m else 0
    if cols == 0:
        return []
    d, _, _, v = snf_with_transforms(m)
    out = []
    for j in range(cols):
        dj = d[j][j] if j < rows and j < cols else 0
        if dj == 0:
            out.append([v[i][j] for i in range(cols)])
    return out


def solve_integer(m, z):
    """Some integer x with M x = z, or None when unsolvable over Z."""
    rows, cols = len(m), len(m[0]) if m else 0
    d, u, _, v = snf_with_transforms(m)
    y = [sum(u[i][k] * z[k] for k in range(rows)) for i in range(rows)]
    xp = [0] * cols
    for i in range(min(rows, cols)):
        if d[i][i]:
            if y[i] % d[i][i]:
                return None
            xp[i] = y[i] // d[i][i]
        elif y[i]:
            return None
    for i in range(min(rows, cols), rows):
        if y[i]:
            return None
    return [sum(v[i][k] * xp[k] for k in range(cols)) for i in range(cols)]
