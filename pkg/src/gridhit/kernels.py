"""Kernel dispatch: compiled speedups when available and safe, pure otherwise.

The compiled module works on 64-bit integers and dimensions up to 3; the
dispatcher routes a call there only when every intermediate product is
provably far from overflow, and falls back to the arbitrary-precision
pure-Python twin otherwise.  ``GRIDHIT_PURE=1`` forces the pure backend
(used by the benchmark and by differential tests).
"""

import os

from gridhit import _pykernels

try:
    from gridhit import _speedups
except ImportError:
    _speedups = None

_FORCE_PURE = os.environ.get("GRIDHIT_PURE", "") not in ("", "0")
HAVE_SPEEDUPS = _speedups is not None
BACKEND = "compiled" if (HAVE_SPEEDUPS and not _FORCE_PURE) else "pure"

# Conservative per-term bound: with |x*den - c| < 2**30 and rnum < 2**30,
# every squared term and 3-term sum stays below 2**62.
_TERM_BOUND = 1 << 30
_PLAIN_BOUND = 1 << 62


def _compiled():
    return _speedups if (_speedups is not None and not _FORCE_PURE) else None


def _ball_args_safe(lo, hi, cnum, den, rnum):
    if len(lo) > 3 or den <= 0:
        return False
    if not (0 <= rnum < _TERM_BOUND and den < _TERM_BOUND):
        return False
    for a, b, c in zip(lo, hi, cnum):
        if abs(a) >= _TERM_BOUND or abs(b) >= _TERM_BOUND:
            return False
        if max(abs(a * den - c), abs(b * den - c)) + rnum >= _TERM_BOUND:
            return False
        if abs(c) >= _PLAIN_BOUND:
            return False
    return True


def _box_args_safe(lo, hi):
    if len(lo) > 3:
        return False
    return all(0 <= a < _TERM_BOUND and abs(b) < _TERM_BOUND
               for a, b in zip(lo, hi))


def int_level(i):
    mod = _compiled()
    if mod is not None and 0 < i < _PLAIN_BOUND:
        return mod.int_level(i)
    return _pykernels.int_level(i)


def point_level(coords):
    mod = _compiled()
    if mod is not None and all(0 < c < _PLAIN_BOUND for c in coords):
        return mod.point_level(coords)
    return _pykernels.point_level(coords)


def ball_points(lo, hi, cnum, den, rnum):
    mod = _compiled()
    if mod is not None and _ball_args_safe(lo, hi, cnum, den, rnum):
        return mod.ball_points(lo, hi, cnum, den, rnum)
    return _pykernels.ball_points(lo, hi, cnum, den, rnum)


def ball_count(lo, hi, cnum, den, rnum):
    mod = _compiled()
    if mod is not None and _ball_args_safe(lo, hi, cnum, den, rnum):
        return mod.ball_count(lo, hi, cnum, den, rnum)
    return _pykernels.ball_count(lo, hi, cnum, den, rnum)


def ball_points_of_level(lo, hi, cnum, den, rnum, level):
    mod = _compiled()
    if mod is not None and level < 62 and _ball_args_safe(lo, hi, cnum, den, rnum):
        return mod.ball_points_of_level(lo, hi, cnum, den, rnum, level)
    return _pykernels.ball_points_of_level(lo, hi, cnum, den, rnum, level)


def ball_max_level(lo, hi, cnum, den, rnum, cap):
    mod = _compiled()
    if mod is not None and cap < 62 and _ball_args_safe(lo, hi, cnum, den, rnum):
        return mod.ball_max_level(lo, hi, cnum, den, rnum, cap)
    return _pykernels.ball_max_level(lo, hi, cnum, den, rnum, cap)


def box_points_of_level(lo, hi, level):
    mod = _compiled()
    if mod is not None and level < 62 and _box_args_safe(lo, hi):
        return mod.box_points_of_level(lo, hi, level)
    return _pykernels.box_points_of_level(lo, hi, level)
