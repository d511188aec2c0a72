"""Lattice-point helpers.

Points of Z^r are plain tuples of ints throughout the package; these
helpers keep the componentwise arithmetic in one place.
"""

import itertools


def pmin(a, b):
    return tuple(min(x, y) for x, y in zip(a, b))


def pmax(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def padd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def psub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def pleq(a, b):
    """Componentwise a <= b."""
    return all(x <= y for x, y in zip(a, b))


def plt(a, b):
    """Strictly smaller in every coordinate."""
    return all(x < y for x, y in zip(a, b))


def norm1(a):
    return sum(a)


def unit(r, i):
    return tuple(1 if j == i else 0 for j in range(r))


def ones(r):
    return (1,) * r


def zeros(r):
    return (0,) * r


def box_points(lo, hi):
    """Lattice points of the rectangle R(lo, hi), lexicographic order.

    Empty when lo <= hi fails in some coordinate.
    """
    if not pleq(lo, hi):
        return iter(())
    return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


def check_dim(p, r, what="lattice point"):
    if len(p) != r:
        from .errors import InputError

        raise InputError(f"{what} {p} has dimension {len(p)}, expected {r}")
    return tuple(int(x) for x in p)
