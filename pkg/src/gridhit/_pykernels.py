"""Pure-Python enumeration kernels.

These are the fallback twins of the compiled ``gridhit._speedups`` module:
same signatures, same outputs (including ordering), arbitrary-precision
integers throughout.  All functions work on integers only; rational shape
parameters are scaled by a common denominator before they get here.

Conventions:
  * boxes are inclusive integer ranges lo[i] <= x[i] <= hi[i];
  * ball membership is strict: sum((x[i]*den - cnum[i])**2) < rnum**2;
  * results are lists of tuples in lexicographic order;
  * the level of a positive integer is its number of trailing zero bits,
    the level of a point is the minimum over its coordinates.  Callers
    pass lo[i] >= 1 whenever levels are involved.
"""

from itertools import product
from math import isqrt


def int_level(i):
    if i <= 0:
        raise ValueError(f"level is undefined for {i}; coordinates are >= 1")
    return (i & -i).bit_length() - 1


def point_level(coords):
    best = -1
    for c in coords:
        if c <= 0:
            raise ValueError(f"level is undefined for coordinate {c}")
        lvl = (c & -c).bit_length() - 1
        if best < 0 or lvl < best:
            best = lvl
    if best < 0:
        raise ValueError("a point needs at least one coordinate")
    return best


def _lattice_start(lo, stride):
    """Smallest multiple of stride that is >= lo."""
    return -((-lo) // stride) * stride


def box_points_of_level(lo, hi, level):
    """Points of exact level ``level`` in the integer box [lo, hi]."""
    stride = 1 << level
    axes = []
    for a, b in zip(lo, hi):
        start = _lattice_start(a, stride)
        if start > b:
            return []
        axes.append(range(start, b + 1, stride))
    out = []
    for p in product(*axes):
        for v in p:
            if (v >> level) & 1:
                out.append(p)
                break
    return out


def _axis_range(lo, hi, c, den, rem):
    """Integer x in [lo, hi] with (x*den - c)**2 < rem, as a (lo, hi) pair."""
    if rem <= 0:
        return 1, 0
    u = isqrt(rem - 1)  # largest |x*den - c| allowed
    xlo = -((u - c) // den)
    xhi = (c + u) // den
    return max(lo, xlo), min(hi, xhi)


def ball_points(lo, hi, cnum, den, rnum):
    d = len(lo)
    rr = rnum * rnum
    out = []

    def rec(ax, acc, prefix):
        xlo, xhi = _axis_range(lo[ax], hi[ax], cnum[ax], den, rr - acc)
        if ax == d - 1:
            for x in range(xlo, xhi + 1):
                out.append(prefix + (x,))
            return
        c = cnum[ax]
        for x in range(xlo, xhi + 1):
            u = x * den - c
            rec(ax + 1, acc + u * u, prefix + (x,))

    rec(0, 0, ())
    return out


def ball_count(lo, hi, cnum, den, rnum):
    d = len(lo)
    rr = rnum * rnum

    def rec(ax, acc):
        xlo, xhi = _axis_range(lo[ax], hi[ax], cnum[ax], den, rr - acc)
        if ax == d - 1:
            return max(0, xhi - xlo + 1)
        c = cnum[ax]
        total = 0
        for x in range(xlo, xhi + 1):
            u = x * den - c
            total += rec(ax + 1, acc + u * u)
        return total

    return rec(0, 0)


def ball_points_of_level(lo, hi, cnum, den, rnum, level):
    d = len(lo)
    rr = rnum * rnum
    stride = 1 << level
    out = []

    def rec(ax, acc, prefix):
        xlo, xhi = _axis_range(lo[ax], hi[ax], cnum[ax], den, rr - acc)
        xlo = _lattice_start(xlo, stride)
        if ax == d - 1:
            for x in range(xlo, xhi + 1, stride):
                p = prefix + (x,)
                for v in p:
                    if (v >> level) & 1:
                        out.append(p)
                        break
            return
        c = cnum[ax]
        for x in range(xlo, xhi + 1, stride):
            u = x * den - c
            rec(ax + 1, acc + u * u, prefix + (x,))

    rec(0, 0, ())
    return out


def _ball_has_lattice_point(lo, hi, cnum, den, rnum, stride):
    d = len(lo)
    rr = rnum * rnum

    def rec(ax, acc):
        xlo, xhi = _axis_range(lo[ax], hi[ax], cnum[ax], den, rr - acc)
        xlo = _lattice_start(xlo, stride)
        if ax == d - 1:
            return xlo <= xhi
        c = cnum[ax]
        for x in range(xlo, xhi + 1, stride):
            u = x * den - c
            if rec(ax + 1, acc + u * u):
                return True
        return False

    return rec(0, 0)


def ball_max_level(lo, hi, cnum, den, rnum, cap):
    """Largest level of any integer point in the ball, or -1 if empty.

    A point of level >= l exists iff the ball meets the stride-2**l
    lattice, so the maximum exact level is the largest such l.
    """
    for level in range(cap, -1, -1):
        if _ball_has_lattice_point(lo, hi, cnum, den, rnum, 1 << level):
            return level
    return -1
