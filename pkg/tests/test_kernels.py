"""Kernel twins: the compiled module must match the pure one bit for bit,
and both must match a filter-everything oracle."""

from itertools import product
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from gridhit import _pykernels, kernels

speedups = pytest.importorskip("gridhit._speedups") \
    if kernels.HAVE_SPEEDUPS else None

needs_speedups = pytest.mark.skipif(not kernels.HAVE_SPEEDUPS,
                                    reason="compiled kernels not built")


def naive_ball_points(lo, hi, cnum, den, rnum):
    out = []
    for p in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if sum((x * den - c) ** 2 for x, c in zip(p, cnum)) < rnum * rnum:
            out.append(p)
    return out


def naive_level(i):
    level = 0
    while i % 2 == 0:
        i //= 2
        level += 1
    return level


_SPAN = {1: 256, 2: 48, 3: 14}

ball_cases = st.integers(1, 3).flatmap(lambda d: st.tuples(
    st.just(d),
    st.lists(st.integers(1, 5 * _SPAN[d]), min_size=d, max_size=d),
    st.integers(1, 5),                                          # denominator
    st.integers(1, 4 * _SPAN[d]),                               # radius numerator
))


class TestPureKernels:
    def test_int_level_examples(self):
        assert _pykernels.int_level(8) == 3
        assert _pykernels.int_level(1) == 0
        assert _pykernels.int_level(12) == 2
        with pytest.raises(ValueError):
            _pykernels.int_level(0)
        with pytest.raises(ValueError):
            _pykernels.int_level(-4)

    @given(st.integers(1, 1 << 40))
    def test_int_level_matches_division_loop(self, i):
        assert _pykernels.int_level(i) == naive_level(i)

    @given(st.lists(st.integers(1, 10 ** 6), min_size=1, max_size=4))
    def test_point_level_is_min(self, coords):
        assert _pykernels.point_level(tuple(coords)) == \
            min(naive_level(c) for c in coords)

    @settings(max_examples=60)
    @given(ball_cases)
    def test_ball_points_match_naive_filter(self, case):
        d, cnum, den, rnum = case
        lo, hi = (1,) * d, (_SPAN[d],) * d
        got = _pykernels.ball_points(lo, hi, tuple(cnum), den, rnum)
        want = naive_ball_points(lo, hi, tuple(cnum), den, rnum)
        assert got == want
        assert _pykernels.ball_count(lo, hi, tuple(cnum), den, rnum) == len(want)

    @settings(max_examples=60)
    @given(ball_cases, st.integers(0, 4))
    def test_ball_points_of_level_match_filter(self, case, level):
        d, cnum, den, rnum = case
        lo, hi = (1,) * d, (_SPAN[d],) * d
        want = [p for p in naive_ball_points(lo, hi, tuple(cnum), den, rnum)
                if min(naive_level(c) for c in p) == level]
        got = _pykernels.ball_points_of_level(lo, hi, tuple(cnum), den, rnum,
                                              level)
        assert got == want

    @settings(max_examples=60)
    @given(ball_cases)
    def test_ball_max_level_matches_filter(self, case):
        d, cnum, den, rnum = case
        lo, hi = (1,) * d, (_SPAN[d],) * d
        pts = naive_ball_points(lo, hi, tuple(cnum), den, rnum)
        want = max((min(naive_level(c) for c in p) for p in pts), default=-1)
        cap = _SPAN[d].bit_length()  # at least the largest reachable level
        assert _pykernels.ball_max_level(lo, hi, tuple(cnum), den, rnum,
                                         cap) == want

    @given(st.integers(1, 3), st.integers(0, 4), st.integers(1, 30),
           st.integers(0, 40))
    def test_box_points_of_level(self, d, level, span, offset):
        lo = (1 + offset,) * d
        hi = (offset + span,) * d
        want = [p for p in product(*(range(a, b + 1) for a, b in zip(lo, hi)))
                if min(naive_level(c) for c in p) == level]
        assert _pykernels.box_points_of_level(lo, hi, level) == want


@needs_speedups
class TestCompiledTwin:
    @given(st.integers(1, (1 << 62) - 1))
    def test_int_level(self, i):
        assert speedups.int_level(i) == _pykernels.int_level(i)

    @given(st.lists(st.integers(1, 10 ** 9), min_size=1, max_size=4))
    def test_point_level(self, coords):
        assert speedups.point_level(tuple(coords)) == \
            _pykernels.point_level(tuple(coords))

    @settings(max_examples=80)
    @given(ball_cases, st.integers(0, 5))
    def test_ball_functions_agree(self, case, level):
        d, cnum, den, rnum = case
        lo, hi = (1,) * d, (_SPAN[d],) * d
        args = (lo, hi, tuple(cnum), den, rnum)
        assert speedups.ball_points(*args) == _pykernels.ball_points(*args)
        assert speedups.ball_count(*args) == _pykernels.ball_count(*args)
        assert speedups.ball_points_of_level(*args, level) == \
            _pykernels.ball_points_of_level(*args, level)
        assert speedups.ball_max_level(*args, 7) == \
            _pykernels.ball_max_level(*args, 7)

    @given(st.integers(1, 3), st.integers(0, 5), st.integers(1, 40))
    def test_box_points_of_level_agree(self, d, level, span):
        lo, hi = (1,) * d, (span,) * d
        assert speedups.box_points_of_level(lo, hi, level) == \
            _pykernels.box_points_of_level(lo, hi, level)

    def test_unsupported_dimension_raises(self):
        with pytest.raises(ValueError):
            speedups.ball_points((1,) * 4, (2,) * 4, (1,) * 4, 1, 1)


class TestDispatch:
    def test_large_denominator_takes_pure_path(self):
        # Arguments past the int64 guard must still give exact answers.
        den = 1 << 40
        cnum = (3 * den // 2, 3 * den // 2)
        rnum = den
        got = kernels.ball_points((1, 1), (5, 5), cnum, den, rnum)
        assert got == naive_ball_points((1, 1), (5, 5), cnum, den, rnum)
        assert got == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_dispatcher_matches_pure_on_safe_args(self):
        args = ((1, 1), (64, 64), (500, 500), 16, 400)
        assert kernels.ball_points(*args) == _pykernels.ball_points(*args)

    def test_backend_reported(self):
        assert kernels.BACKEND in ("compiled", "pure")

    def test_guard_boundary_is_exact(self):
        # isqrt fixups near perfect squares: radius**2 - 1 boundary
        for rnum in (1, 2, 15, 16, 17, (1 << 15) - 1):
            lo, hi = (1,), (1 << 16,)
            c = ((1 << 15),)
            got = kernels.ball_points(lo, hi, c, 1, rnum)
            lo_want = (1 << 15) - rnum + 1
            hi_want = (1 << 15) + rnum - 1
            assert got[0] == (lo_want,) and got[-1] == (hi_want,)
            assert len(got) == 2 * rnum - 1
