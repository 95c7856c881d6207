# cython: language_level=3
"""Compiled enumeration kernels: int64 twins of ``gridhit._pykernels``.

Same signatures, same outputs, same ordering.  The dispatcher in
``gridhit.kernels`` only routes calls here when every intermediate value
fits comfortably in 64 bits and the dimension is at most 3; anything else
takes the arbitrary-precision pure-Python path.
"""

from libc.math cimport sqrtl


cdef inline long long ll_isqrt(long long v):
    if v <= 0:
        return 0
    cdef long long s = <long long>sqrtl(<long double>v)
    if s < 0:
        s = 0
    while s > 0 and s * s > v:
        s -= 1
    while (s + 1) * (s + 1) <= v:
        s += 1
    return s


cdef inline void axis_range(long long lo, long long hi, long long c,
                            long long den, long long rem,
                            long long *outlo, long long *outhi):
    cdef long long u, xlo, xhi
    if rem <= 0:
        outlo[0] = 1
        outhi[0] = 0
        return
    u = ll_isqrt(rem - 1)
    xlo = -((u - c) // den)
    xhi = (c + u) // den
    outlo[0] = lo if lo > xlo else xlo
    outhi[0] = hi if hi < xhi else xhi


cdef inline long long lattice_start(long long lo, long long stride):
    return -((-lo) // stride) * stride


def int_level(long long i):
    if i <= 0:
        raise ValueError(f"level is undefined for {i}; coordinates are >= 1")
    cdef int level = 0
    while not (i & 1):
        i >>= 1
        level += 1
    return level


def point_level(coords):
    cdef long long c
    cdef int best = -1, lvl
    for v in coords:
        c = v
        if c <= 0:
            raise ValueError(f"level is undefined for coordinate {c}")
        lvl = 0
        while not (c & 1):
            c >>= 1
            lvl += 1
        if best < 0 or lvl < best:
            best = lvl
    if best < 0:
        raise ValueError("a point needs at least one coordinate")
    return best


# -- ball enumeration ---------------------------------------------------------

def ball_points(lo, hi, cnum, den, rnum):
    cdef int d = len(lo)
    cdef long long rr = (<long long>rnum) * (<long long>rnum)
    if d == 1:
        return _ball_points_1(lo[0], hi[0], cnum[0], den, rr)
    if d == 2:
        return _ball_points_2(lo[0], hi[0], lo[1], hi[1], cnum[0], cnum[1], den, rr)
    if d == 3:
        return _ball_points_3(lo[0], hi[0], lo[1], hi[1], lo[2], hi[2],
                              cnum[0], cnum[1], cnum[2], den, rr)
    raise ValueError("compiled kernel supports d <= 3")


cdef list _ball_points_1(long long lo0, long long hi0, long long c0,
                         long long den, long long rr):
    cdef list out = []
    cdef long long xlo, xhi, x
    axis_range(lo0, hi0, c0, den, rr, &xlo, &xhi)
    for x in range(xlo, xhi + 1):
        out.append((x,))
    return out


cdef list _ball_points_2(long long lo0, long long hi0, long long lo1, long long hi1,
                         long long c0, long long c1, long long den, long long rr):
    cdef list out = []
    cdef long long xlo0, xhi0, xlo1, xhi1, x0, x1, u0
    axis_range(lo0, hi0, c0, den, rr, &xlo0, &xhi0)
    for x0 in range(xlo0, xhi0 + 1):
        u0 = x0 * den - c0
        axis_range(lo1, hi1, c1, den, rr - u0 * u0, &xlo1, &xhi1)
        for x1 in range(xlo1, xhi1 + 1):
            out.append((x0, x1))
    return out


cdef list _ball_points_3(long long lo0, long long hi0, long long lo1, long long hi1,
                         long long lo2, long long hi2, long long c0, long long c1,
                         long long c2, long long den, long long rr):
    cdef list out = []
    cdef long long xlo0, xhi0, xlo1, xhi1, xlo2, xhi2, x0, x1, x2, u0, u1, acc
    axis_range(lo0, hi0, c0, den, rr, &xlo0, &xhi0)
    for x0 in range(xlo0, xhi0 + 1):
        u0 = x0 * den - c0
        axis_range(lo1, hi1, c1, den, rr - u0 * u0, &xlo1, &xhi1)
        for x1 in range(xlo1, xhi1 + 1):
            u1 = x1 * den - c1
            acc = u0 * u0 + u1 * u1
            axis_range(lo2, hi2, c2, den, rr - acc, &xlo2, &xhi2)
            for x2 in range(xlo2, xhi2 + 1):
                out.append((x0, x1, x2))
    return out


def ball_count(lo, hi, cnum, den, rnum):
    cdef int d = len(lo)
    cdef long long rr = (<long long>rnum) * (<long long>rnum)
    cdef long long total = 0
    cdef long long xlo0, xhi0, xlo1, xhi1, xlo2, xhi2, x0, x1, u0, u1
    if d == 1:
        axis_range(lo[0], hi[0], cnum[0], den, rr, &xlo0, &xhi0)
        total = xhi0 - xlo0 + 1
        return total if total > 0 else 0
    if d == 2:
        axis_range(lo[0], hi[0], cnum[0], den, rr, &xlo0, &xhi0)
        for x0 in range(xlo0, xhi0 + 1):
            u0 = x0 * den - cnum[0]
            axis_range(lo[1], hi[1], cnum[1], den, rr - u0 * u0, &xlo1, &xhi1)
            if xhi1 >= xlo1:
                total += xhi1 - xlo1 + 1
        return total
    if d == 3:
        axis_range(lo[0], hi[0], cnum[0], den, rr, &xlo0, &xhi0)
        for x0 in range(xlo0, xhi0 + 1):
            u0 = x0 * den - cnum[0]
            axis_range(lo[1], hi[1], cnum[1], den, rr - u0 * u0, &xlo1, &xhi1)
            for x1 in range(xlo1, xhi1 + 1):
                u1 = x1 * den - cnum[1]
                axis_range(lo[2], hi[2], cnum[2], den,
                           rr - u0 * u0 - u1 * u1, &xlo2, &xhi2)
                if xhi2 >= xlo2:
                    total += xhi2 - xlo2 + 1
        return total
    raise ValueError("compiled kernel supports d <= 3")


def ball_points_of_level(lo, hi, cnum, den, rnum, level):
    cdef int d = len(lo)
    cdef long long rr = (<long long>rnum) * (<long long>rnum)
    cdef long long stride = (<long long>1) << (<int>level)
    cdef int lv = level
    cdef list out = []
    cdef long long xlo0, xhi0, xlo1, xhi1, xlo2, xhi2, x0, x1, x2, u0, u1
    if d == 1:
        axis_range(lo[0], hi[0], cnum[0], den, rr, &xlo0, &xhi0)
        xlo0 = lattice_start(xlo0, stride)
        for x0 in range(xlo0, xhi0 + 1, stride):
            if (x0 >> lv) & 1:
                out.append((x0,))
        return out
    if d == 2:
        axis_range(lo[0], hi[0], cnum[0], den, rr, &xlo0, &xhi0)
        xlo0 = lattice_start(xlo0, stride)
        for x0 in range(xlo0, xhi0 + 1, stride):
            u0 = x0 * den - cnum[0]
            axis_range(lo[1], hi[1], cnum[1], den, rr - u0 * u0, &xlo1, &xhi1)
            xlo1 = lattice_start(xlo1, stride)
            for x1 in range(xlo1, xhi1 + 1, stride):
                if ((x0 >> lv) & 1) or ((x1 >> lv) & 1):
                    out.append((x0, x1))
        return out
    if d == 3:
        axis_range(lo[0], hi[0], cnum[0], den, rr, &xlo0, &xhi0)
        xlo0 = lattice_start(xlo0, stride)
        for x0 in range(xlo0, xhi0 + 1, stride):
            u0 = x0 * den - cnum[0]
            axis_range(lo[1], hi[1], cnum[1], den, rr - u0 * u0, &xlo1, &xhi1)
            xlo1 = lattice_start(xlo1, stride)
            for x1 in range(xlo1, xhi1 + 1, stride):
                u1 = x1 * den - cnum[1]
                axis_range(lo[2], hi[2], cnum[2], den,
                           rr - u0 * u0 - u1 * u1, &xlo2, &xhi2)
                xlo2 = lattice_start(xlo2, stride)
                for x2 in range(xlo2, xhi2 + 1, stride):
                    if ((x0 >> lv) & 1) or ((x1 >> lv) & 1) or ((x2 >> lv) & 1):
                        out.append((x0, x1, x2))
        return out
    raise ValueError("compiled kernel supports d <= 3")


cdef bint _ball_has_lattice_point(long long *lo, long long *hi, long long *cn,
                                  int d, long long den, long long rr,
                                  long long stride):
    cdef long long xlo0, xhi0, xlo1, xhi1, xlo2, xhi2, x0, x1, u0, u1
    axis_range(lo[0], hi[0], cn[0], den, rr, &xlo0, &xhi0)
    xlo0 = lattice_start(xlo0, stride)
    if d == 1:
        return xlo0 <= xhi0
    for x0 in range(xlo0, xhi0 + 1, stride):
        u0 = x0 * den - cn[0]
        axis_range(lo[1], hi[1], cn[1], den, rr - u0 * u0, &xlo1, &xhi1)
        xlo1 = lattice_start(xlo1, stride)
        if d == 2:
            if xlo1 <= xhi1:
                return True
            continue
        for x1 in range(xlo1, xhi1 + 1, stride):
            u1 = x1 * den - cn[1]
            axis_range(lo[2], hi[2], cn[2], den, rr - u0 * u0 - u1 * u1,
                       &xlo2, &xhi2)
            xlo2 = lattice_start(xlo2, stride)
            if xlo2 <= xhi2:
                return True
    return False


def ball_max_level(lo, hi, cnum, den, rnum, cap):
    cdef int d = len(lo)
    if d > 3:
        raise ValueError("compiled kernel supports d <= 3")
    cdef long long clo[3]
    cdef long long chi[3]
    cdef long long ccn[3]
    cdef int i
    for i in range(d):
        clo[i] = lo[i]
        chi[i] = hi[i]
        ccn[i] = cnum[i]
    cdef long long rr = (<long long>rnum) * (<long long>rnum)
    cdef long long dden = den
    cdef int level
    for level in range(cap, -1, -1):
        if _ball_has_lattice_point(clo, chi, ccn, d, dden, rr,
                                   (<long long>1) << level):
            return level
    return -1


# -- boxes --------------------------------------------------------------------

def box_points_of_level(lo, hi, level):
    cdef int d = len(lo)
    cdef long long stride = (<long long>1) << (<int>level)
    cdef int lv = level
    cdef list out = []
    cdef long long a0, b0, a1, b1, a2, b2, x0, x1, x2
    if d == 1:
        a0 = lattice_start(lo[0], stride); b0 = hi[0]
        for x0 in range(a0, b0 + 1, stride):
            if (x0 >> lv) & 1:
                out.append((x0,))
        return out
    if d == 2:
        a0 = lattice_start(lo[0], stride); b0 = hi[0]
        a1 = lattice_start(lo[1], stride); b1 = hi[1]
        for x0 in range(a0, b0 + 1, stride):
            for x1 in range(a1, b1 + 1, stride):
                if ((x0 >> lv) & 1) or ((x1 >> lv) & 1):
                    out.append((x0, x1))
        return out
    if d == 3:
        a0 = lattice_start(lo[0], stride); b0 = hi[0]
        a1 = lattice_start(lo[1], stride); b1 = hi[1]
        a2 = lattice_start(lo[2], stride); b2 = hi[2]
        for x0 in range(a0, b0 + 1, stride):
            for x1 in range(a1, b1 + 1, stride):
                for x2 in range(a2, b2 + 1, stride):
                    if ((x0 >> lv) & 1) or ((x1 >> lv) & 1) or ((x2 >> lv) & 1):
                        out.append((x0, x1, x2))
        return out
    raise ValueError("compiled kernel supports d <= 3")
