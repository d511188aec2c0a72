"""Good semigroups of Z^r_{>=0} with a conductor, kept by their small elements.

A semigroup S is stored as the finite set S cap R(0, c) together with c;
membership of an arbitrary point l is decided by the reconstruction rule

    l in S  <=>  min(l, c) componentwise in small_elements,

which is exact for semigroups of values (min-closure against the conductor).
"""

import json
from dataclasses import dataclass, field

from .errors import InputError, NoConductorError
from .points import (
    box_points,
    check_dim,
    ones,
    pleq,
    pmax,
    pmin,
    unit,
    zeros,
)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the axiom battery; ``violations`` holds (axiom, witnesses)."""

    verdict: bool
    violations: tuple = field(default_factory=tuple)

    def __bool__(self):
        return self.verdict


class GoodSemigroup:
    """A good (local) subsemigroup of Z^r_{>=0} with conductor ``conductor``.

    ``small_elements`` is the full member set inside R(0, conductor),
    sorted lexicographically. Instances are immutable and hashable.
    """

    __slots__ = ("r", "conductor", "small_elements", "_small_set")

    def __init__(self, r, conductor, small_elements):
        r = int(r)
        if r < 1:
            raise InputError("branch count must be >= 1")
        conductor = check_dim(conductor, r, "conductor")
        if any(x < 0 for x in conductor):
            raise InputError("conductor must be nonnegative")
        elems = []
        for e in small_elements:
            e = check_dim(e, r, "small element")
            if any(x < 0 for x in e):
                raise InputError(f"small element {e} has a negative coordinate")
            if not pleq(e, conductor):
                raise InputError(f"small element {e} exceeds the conductor {conductor}")
            elems.append(e)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "small_elements", tuple(sorted(set(elems))))
        object.__setattr__(self, "_small_set", frozenset(elems))

    def __setattr__(self, *a):
        raise AttributeError("GoodSemigroup is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, GoodSemigroup)
            and self.r == other.r
            and self.conductor == other.conductor
            and self.small_elements == other.small_elements
        )

    def __hash__(self):
        return hash((self.r, self.conductor, self.small_elements))

    def __repr__(self):
        return f"GoodSemigroup(r={self.r}, conductor={self.conductor}, #small={len(self.small_elements)})"

    # -- membership and derived queries ------------------------------------

    def contains(self, point):
        point = check_dim(point, self.r)
        if any(x < 0 for x in point):
            return False
        return pmin(point, self.conductor) in self._small_set

    __contains__ = contains

    @property
    def is_smooth(self):
        return self.r == 1 and self.conductor == (0,)

    def multiplicity_vector(self):
        """Componentwise minimum of the nonzero members; (1,...) when smooth."""
        nonzero = [e for e in self.small_elements if any(e)]
        if not nonzero:
            if self.is_smooth:
                return ones(1)
            raise InputError("semigroup has no nonzero small element")
        m = nonzero[0]
        for e in nonzero[1:]:
            m = pmin(m, e)
        return m

    def multiplicity(self):
        return sum(self.multiplicity_vector())

    def delta_bar_nonempty(self, point, i):
        """Is there s in S with s_i = point_i and s_j >= point_j for j != i?"""
        point = check_dim(point, self.r)
        if point[i] < 0:
            return False
        cap = pmax(point, self.conductor)
        lo = list(max(x, 0) for x in point)
        hi = list(cap)
        lo[i] = hi[i] = point[i]
        for s in box_points(tuple(lo), tuple(hi)):
            if self.contains(s):
                return True
        return False

    def delta_nonempty(self, point, i):
        """Is there s in S with s_i = point_i and s_j > point_j for j != i?"""
        point = check_dim(point, self.r)
        if point[i] < 0:
            return False
        lo = []
        hi = []
        for j in range(self.r):
            if j == i:
                lo.append(point[i])
                hi.append(point[i])
            else:
                lo.append(max(point[j] + 1, 0))
                hi.append(max(point[j] + 1, self.conductor[j]))
        for s in box_points(tuple(lo), tuple(hi)):
            if self.contains(s):
                return True
        return False

    def delta_any_nonempty(self, point):
        """Delta(point) = union of Delta_i(point) nonempty for some i."""
        return any(self.delta_nonempty(point, i) for i in range(self.r))

    def is_above_conductor(self, p):
        """Increasing-path criterion: a member path from p to p + m exists.

        For genuine semigroups this is equivalent to p >= conductor.
        """
        p = check_dim(p, self.r)
        if not self.contains(p):
            raise InputError(f"{p} is not a semigroup element")
        m = self.multiplicity_vector()
        target = tuple(a + b for a, b in zip(p, m))
        seen = set()
        stack = [p]
        while stack:
            x = stack.pop()
            if x == target:
                return True
            if x in seen:
                continue
            seen.add(x)
            for i in range(self.r):
                if x[i] < target[i]:
                    y = x[:i] + (x[i] + 1,) + x[i + 1 :]
                    if y not in seen and self.contains(y):
                        stack.append(y)
        return False

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        return {
            "branches": self.r,
            "conductor": list(self.conductor),
            "small_elements": [list(e) for e in self.small_elements],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d["branches"], tuple(d["conductor"]), [tuple(e) for e in d["small_elements"]])
        except KeyError as exc:
            raise InputError(f"semigroup object lacks field {exc}") from exc

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"not valid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise InputError("semigroup file must hold a JSON object")
        return cls.from_dict(d)


def from_numerical_generators(gens):
    """Numerical semigroup <gens> as a GoodSemigroup (r = 1).

    Requires gcd(gens) = 1, else no conductor exists.
    """
    import math

    gens = sorted(set(int(g) for g in gens))
    if not gens:
        raise InputError("empty generating set")
    if any(g <= 0 for g in gens):
        raise InputError("generators must be positive")
    g = gens[0]
    for x in gens[1:]:
        g = math.gcd(g, x)
    if g != 1:
        raise NoConductorError(f"gcd of {gens} is {g}; no conductor exists")
    if gens[0] == 1:
        return GoodSemigroup(1, (0,), [(0,)])
    a = gens[0]
    bound = 2 * a * max(gens)
    member = [False] * (bound + 1)
    member[0] = True
    for k in range(1, bound + 1):
        member[k] = any(k >= g and member[k - g] for g in gens)
    run = 0
    c = None
    for k in range(bound + 1):
        run = run + 1 if member[k] else 0
        if run == a:
            c = k - a + 1
            break
    if c is None:
        raise NoConductorError(f"no conductor below {bound} for generators {gens}")
    small = [(k,) for k in range(c + 1) if member[k]]
    return GoodSemigroup(1, (c,), small)


def wedge(s1, s2):
    """One-point union: members {0} cup ((S' \\ 0) x (S'' \\ 0)).

    The conductor concatenates the factors' conductors, with 0 lifted to 1
    for a smooth factor (the node case).
    """
    c1 = tuple(x if x > 0 else 1 for x in s1.conductor) if s1.is_smooth else s1.conductor
    c2 = tuple(x if x > 0 else 1 for x in s2.conductor) if s2.is_smooth else s2.conductor
    r = s1.r + s2.r
    conductor = c1 + c2
    small = []
    for p in box_points(zeros(r), conductor):
        a, b = p[: s1.r], p[s1.r :]
        if not any(p):
            small.append(p)
        elif any(a) and any(b) and s1.contains(a) and s2.contains(b):
            small.append(p)
    return GoodSemigroup(r, conductor, small)


def validate_good_semigroup(r, conductor, small_elements):
    """Check the good-semigroup axioms on the represented elements.

    Axioms: (1) zero and no nonzero member with a zero coordinate,
    (2) min-closure, (3) exchange, (4) conductor membership and minimality,
    (5) Delta(c - 1) empty. Returns a ValidationReport; malformed input
    raises InputError instead.
    """
    try:
        s = GoodSemigroup(r, conductor, small_elements)
    except InputError:
        raise
    violations = []
    small = s.small_elements
    zero = zeros(s.r)
    c = s.conductor

    # (1): 0 present; nonzero members have full support.
    if zero not in s._small_set:
        violations.append(("1", (zero,)))
    for e in small:
        if any(e) and not all(e):
            violations.append(("1", (e,)))

    # (2): min-closure of the small set.
    for i, e1 in enumerate(small):
        for e2 in small[i + 1 :]:
            m = pmin(e1, e2)
            if m not in s._small_set:
                violations.append(("2", (e1, e2, m)))

    # (3): exchange, witnesses capped into R(min, max(max, c) + 1).
    for i, e1 in enumerate(small):
        for e2 in small[i:]:
            for k in range(s.r):
                if e1[k] != e2[k]:
                    continue
                if _exchange_witness(s, e1, e2, k) is None:
                    violations.append(("3", (e1, e2, k)))

    # (4): conductor member and minimal. Points above c - e_i reconstruct to
    # c or c - e_i only, so minimality at i reduces to c - e_i not small.
    if c not in s._small_set:
        violations.append(("4", (c,)))
    else:
        for i in range(s.r):
            if c[i] == 0:
                continue
            below = c[:i] + (c[i] - 1,) + c[i + 1 :]
            if below in s._small_set:
                violations.append(("4", (below,)))

    # (5): Delta(c - 1) empty (meaningful once c >= 1).
    if all(x >= 1 for x in c):
        cm1 = tuple(x - 1 for x in c)
        for i in range(s.r):
            if s.delta_nonempty(cm1, i):
                violations.append(("5", (cm1, i)))

    ordered = tuple(sorted(set(violations)))
    return ValidationReport(verdict=not ordered, violations=ordered)


def _exchange_witness(s, e1, e2, k):
    """A witness t for axiom (3) at coordinate k, or None.

    t must satisfy t >= min(e1,e2), t_k > e1_k = e2_k, and
    t_j = min(e1_j, e2_j) at every j != k where e1_j != e2_j.
    Any witness reconstructs to a small element u = min(t, c), and u lifts
    back to a witness by raising its saturated coordinates, so scanning the
    small set decides existence.
    """
    c = s.conductor
    lo = pmin(e1, e2)
    exact = [j != k and e1[j] != e2[j] for j in range(s.r)]
    for u in s.small_elements:
        t = []
        for j in range(s.r):
            need = e1[k] + 1 if j == k else lo[j]
            if u[j] < c[j]:
                if exact[j] and u[j] != need:
                    break
                if not exact[j] and u[j] < need:
                    break
                t.append(u[j])
            else:
                # t_j may be anything >= c_j
                if exact[j] and need < c[j]:
                    break
                t.append(max(c[j], need))
        else:
            return tuple(t)
    return None
