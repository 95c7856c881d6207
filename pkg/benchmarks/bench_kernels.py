#!/usr/bin/env python3
"""Benchmark: compiled enumeration kernels vs. the pure-Python twins.

Runs each kernel workload against both backends in one process (the
dispatcher's force-pure switch is flipped directly, which is exactly what
GRIDHIT_PURE=1 does at import time), then an end-to-end engine sweep.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time
from fractions import Fraction

from gridhit import _pykernels, kernels


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_workloads():
    f = Fraction
    big_ball = ((1, 1), (255, 255), (511, 511), 2, 240)  # radius 120, ~45k pts
    ball3 = ((1, 1, 1), (63, 63, 63), (65, 65, 65), 2, 60)
    yield ("point_level 262k pts", lambda mod: sum(
        mod.point_level((x, y)) for x in range(1, 512, 8) for y in range(1, 512)))
    yield ("ball_points d2 r120", lambda mod: mod.ball_points(*big_ball))
    yield ("ball_count d2 r120", lambda mod: mod.ball_count(*big_ball))
    yield ("ball_points_of_level l2", lambda mod: mod.ball_points_of_level(
        *big_ball, 2))
    yield ("ball_max_level sweep", lambda mod: [
        mod.ball_max_level((1, 1), (255, 255), (2 * c + 1, 2 * c + 1), 2, 2 * r, 7)
        for c in range(20, 120, 5) for r in range(3, 60, 7)])
    yield ("ball_points d3 r30", lambda mod: mod.ball_points(*ball3))
    yield ("box_points_of_level 255^2", lambda mod: mod.box_points_of_level(
        (1, 1), (255, 255), 1))


def engine_sweep():
    from gridhit.engine import EngineState
    from gridhit.exactnum import sqrt_exact
    from gridhit.harness import gen_random

    total = 0
    for seed in range(8):
        inst = gen_random(2, 256, sqrt_exact(2), ("ball", "cube", "box"),
                          12, seed=1000 + seed)
        eng = EngineState(inst.grid, inst.fatness)  # instrumentation on
        for o in inst.objects:
            eng.process(o)
        total += len(eng.chosen)
    return total


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not kernels.HAVE_SPEEDUPS:
        print("compiled kernels not built; timing the pure backend only\n")

    rows = []
    for name, work in kernel_workloads():
        pure = timed(lambda: work(_pykernels), args.repeat)
        if kernels.HAVE_SPEEDUPS:
            from gridhit import _speedups
            comp = timed(lambda: work(_speedups), args.repeat)
            rows.append((name, comp, pure, pure / comp))
        else:
            rows.append((name, None, pure, None))

    # End to end through the dispatcher, both backend selections.
    saved = kernels._FORCE_PURE
    try:
        kernels._FORCE_PURE = False
        comp = timed(engine_sweep, args.repeat) if kernels.HAVE_SPEEDUPS else None
        kernels._FORCE_PURE = True
        pure = timed(engine_sweep, args.repeat)
    finally:
        kernels._FORCE_PURE = saved
    rows.append(("engine sweep 8x12 objects", comp, pure,
                 (pure / comp) if comp else None))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'compiled':>10}  {'pure':>10}  {'speedup':>8}")
    for name, comp, pure, ratio in rows:
        cs = f"{comp * 1e3:8.2f}ms" if comp is not None else "       --"
        rs = f"{ratio:7.1f}x" if ratio is not None else "      --"
        print(f"{name:<{width}}  {cs}  {pure * 1e3:8.2f}ms  {rs}")


if __name__ == "__main__":
    main()
