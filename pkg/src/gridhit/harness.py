"""Instance generation, online runs, forcing games, verification sweeps.

Everything here is deterministic given its seed: instance generation uses
only integer draws from ``random.Random``, runs carry no timestamps, and
records are emitted in a canonical JSON encoding, so regenerating or
replaying anything is byte-identical.

Verification sweeps re-derive the quantities they check with naive,
self-contained oracles (division-loop levels, filter-everything
membership) so that a bug in the fast paths cannot hide itself.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import product
from math import log2
from typing import Optional

from gridhit import adversary, engine, formats, geometry, oracle
from gridhit.adversary import GameState, GameSummary
from gridhit.engine import Added, EngineState
from gridhit.errors import GridHitError, InstanceFormatError
from gridhit.exactnum import (
    Scalar,
    as_scalar,
    is_rational,
    scalar_floor,
    sqrt_exact,
)
from gridhit.formats import InstanceFile
from gridhit.geometry import Ball, Box, Cube, FatObject, GridSpec, Point

SQRT2 = sqrt_exact(2)


# -- reports ------------------------------------------------------------------

@dataclass
class Report:
    """Outcome of one online run against its exact offline optimum."""

    d: int
    N: int
    fatness: Scalar
    object_count: int
    alg_size: int
    already_hit: int
    opt_size: Optional[int]
    opt_exact: bool
    ratio: Optional[Fraction]
    bound: float
    within_bound: Optional[bool]
    transcript: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "N": self.N,
            "alpha": formats.scalar_to_json(self.fatness),
            "objects": self.object_count,
            "alg_size": self.alg_size,
            "already_hit": self.already_hit,
            "opt_size": self.opt_size,
            "opt_exact": self.opt_exact,
            "ratio": None if self.ratio is None else
                     formats.scalar_to_json(self.ratio),
            "ratio_float": None if self.ratio is None else float(self.ratio),
            "bound": self.bound,
            "within_bound": self.within_bound,
            "transcript": self.transcript,
        }

    def to_csv(self) -> str:
        row = self.to_json()
        row["alpha"] = formats.scalar_to_text(self.fatness)  # comma-free
        head = ",".join(row)
        vals = ",".join("" if v is None else str(v) for v in row.values())
        return head + "\n" + vals + "\n"


# -- online runs --------------------------------------------------------------

def run_online(inst: InstanceFile, transcript_path=None,
               oracle_budget: int = 2_000_000) -> Report:
    """Feed the instance to a fresh engine and certify the optimum."""
    eng = EngineState(inst.grid, inst.fatness)
    lines = []
    for o in inst.objects:
        decision = eng.process(o)
        if transcript_path is not None:
            lines.append(formats.dumps({
                "object": formats.shape_to_json(o),
                "decision": formats.decision_to_json(decision),
                "cumulative_size": len(eng.chosen),
            }))
    if transcript_path is not None:
        with open(transcript_path, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line + "\n")

    opt_size = None
    opt_exact = False
    ratio = None
    within = None
    factor = (4 * as_scalar(inst.fatness) + 1) ** (2 * inst.grid.d)
    bound = float(factor) * log2(inst.grid.N)
    if inst.objects:
        reduced = oracle.reduce_instance(inst.objects)
        result = oracle.exact_min_hitting_set(reduced, budget=oracle_budget)
        opt_size = result.size
        opt_exact = result.exact
        rr = eng.ratio_report(opt_size)
        ratio = rr.ratio
        bound = rr.bound
        within = rr.within_bound if opt_exact else None
    return Report(
        d=inst.grid.d, N=inst.grid.N, fatness=inst.fatness,
        object_count=len(inst.objects), alg_size=len(eng.chosen),
        already_hit=eng.already_hit_count, opt_size=opt_size,
        opt_exact=opt_exact, ratio=ratio, bound=bound, within_bound=within,
        transcript=None if transcript_path is None else str(transcript_path),
    )


# -- forcing games --------------------------------------------------------------

def base_shape(d: int, kind: str, aspect=None) -> FatObject:
    """Unit-size template of the requested kind (the game dilates it)."""
    if kind == "cube":
        return Cube((0,) * d, 1)
    if kind == "ball":
        return Ball((Fraction(1, 2),) * d, Fraction(1, 2))
    if kind == "box":
        if aspect is None:
            aspect = (1,) * (d - 1) + (2,) if d > 1 else (1,)
        if len(aspect) != d:
            raise ValueError(f"aspect needs {d} entries, got {len(aspect)}")
        return Box((0,) * d, tuple(as_scalar(a) for a in aspect))
    raise ValueError(f"unknown shape kind {kind!r}")


def family_fatness(base: FatObject) -> Scalar:
    fs = geometry.fatness_sq(base)
    if not is_rational(fs):
        raise ValueError("base shape must have a rational squared fatness")
    return sqrt_exact(fs)


def engine_opponent(eng: EngineState):
    def opponent(o: FatObject) -> list[Point]:
        decision = eng.process(o)
        return list(decision.points) if isinstance(decision, Added) else []
    return opponent


def first_point_opponent(o: FatObject) -> list[Point]:
    """Baseline: place one deterministic point inside the object."""
    ec = geometry.enclosing_cube(o)
    mids = [c + ec.width / 2 for c in ec.corner]
    for p in product(*((scalar_floor(m), scalar_floor(m) + 1) for m in mids)):
        if all(c >= 1 for c in p) and geometry.contains(o, p):
            return [p]
    ranges = geometry._int_ranges(o)
    if ranges is not None:
        for p in product(*(range(a, b + 1) for a, b in ranges)):
            if geometry.contains(o, p):
                return [p]
    return []


def run_adversary(d: int, N: int, shape: str = "cube",
                  opponent: str = "engine", aspect=None,
                  trace_path=None) -> tuple[GameSummary, Report]:
    """Play the forcing game and certify that one point was optimal."""
    grid = GridSpec(d, N)
    base = base_shape(d, shape, aspect)
    fatness = family_fatness(base)
    if opponent == "engine":
        eng = EngineState(grid, fatness, instrument=False, keep_history=False)
        opp = engine_opponent(eng)
    elif opponent == "baseline":
        opp = first_point_opponent
    else:
        raise ValueError(f"unknown opponent {opponent!r}")

    state = adversary.play_game_traced(grid, base, opp)
    summary = adversary.summarize(state)

    reduced = oracle.reduce_instance(state.objects)
    result = oracle.exact_min_hitting_set(reduced)
    rr = engine.check_ratio_bound(grid, fatness, summary.total_points,
                                  result.size)
    if trace_path is not None:
        _write_game_trace(trace_path, state, summary, result.size)
    report = Report(
        d=d, N=N, fatness=fatness, object_count=summary.steps,
        alg_size=summary.total_points, already_hit=0,
        opt_size=result.size, opt_exact=result.exact, ratio=rr.ratio,
        bound=rr.bound, within_bound=rr.within_bound if result.exact else None,
        transcript=None if trace_path is None else str(trace_path),
    )
    return summary, report


def _write_game_trace(path, state: GameState, summary: GameSummary,
                      opt_size: int) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for j, o in enumerate(state.objects):
            rec = {
                "object": formats.shape_to_json(o),
                "points": [formats.point_to_json(p)
                           for p in state.responses[j]],
                "points_added": len(state.responses[j]),
                "outer_width": formats.scalar_to_json(geometry.out_width(o)),
                "inner_width": formats.scalar_to_json(geometry.in_width(o)),
                "empty_cell": {
                    "corner": [formats.scalar_to_json(c)
                               for c in state.empty_cells[j].corner],
                    "width": formats.scalar_to_json(state.empty_cells[j].width),
                },
            }
            fh.write(formats.dumps(rec) + "\n")
        fh.write(formats.dumps({
            "steps": summary.steps,
            "total_points": summary.total_points,
            "forced_minimum_met": summary.forced_minimum_met,
            "certificate": formats.point_to_json(summary.certificate),
            "opt_size": opt_size,
            "final_width": None if summary.final_width is None else
                           formats.scalar_to_json(summary.final_width),
        }) + "\n")


# -- instance generation ---------------------------------------------------------

def gen_random(d: int, N: int, fatness: Scalar, shapes=("ball", "cube", "box"),
               count: int = 20, seed: int = 0, min_width=1,
               max_width=None) -> InstanceFile:
    """Reproducible random instance: uniform placement, log-uniform widths
    in [min_width, max_width], rejection-sampled to satisfy the header
    invariants.  Only integer draws touch the RNG, so the same seed gives
    the same file on every platform."""
    grid = GridSpec(d, N)
    fatness = as_scalar(fatness)
    if not fatness >= 1:
        raise InstanceFormatError(f"alpha must be >= 1, got {fatness}")
    fat_sq = fatness * fatness
    shapes = tuple(shapes)
    if not shapes:
        raise InstanceFormatError("need at least one shape kind")
    for kind in shapes:
        if kind not in ("ball", "cube", "box"):
            raise InstanceFormatError(f"unknown shape kind {kind!r}")
    if "ball" in shapes and fat_sq < d:
        raise InstanceFormatError(
            f"alpha^2 = {fat_sq} < {d}: d-balls are sqrt(d)-fat and can "
            "never satisfy the header bound; drop balls or raise alpha")
    if max_width is None:
        max_width = N
    min_width = Fraction(min_width)
    max_width = Fraction(max_width)
    for which, w in (("min", min_width), ("max", max_width)):
        if w > N:
            raise InstanceFormatError(
                f"requested {which} width {w} exceeds the grid bound {N}: "
                "objects must fit inside the grid cube")
    if min_width < 1 or max_width < min_width:
        raise InstanceFormatError(
            f"bad width range [{min_width}, {max_width}]")

    rng = random.Random(seed)
    lo8 = int(min_width * 8) if (min_width * 8).denominator == 1 else \
        int(min_width * 8) + 1
    hi8 = int(max_width * 8)
    buckets = max(1, (hi8 // lo8).bit_length())

    # Boxes need a rational cap on the per-axis width ratio below fatness.
    ratio_cap = Fraction(scalar_floor(fatness * 64), 64)

    objects: list[FatObject] = []
    last_reason = "no attempt made"
    for _ in range(count):
        placed = False
        for _attempt in range(1000):
            kind = shapes[rng.randrange(len(shapes))]
            b = rng.randrange(buckets)
            w = Fraction(rng.randint(lo8 << b, min(hi8, ((lo8 << b) << 1) - 1)), 8)
            if w > N:
                last_reason = f"width {w} exceeds the grid bound {N}"
                continue
            o = _sample_shape(rng, kind, d, N, w, ratio_cap)
            if o is None:
                last_reason = f"{kind} of width {w} does not fit the grid"
                continue
            if not geometry.has_grid_point(o):
                last_reason = f"{kind} of width {w} caught no grid point"
                continue
            geometry.validate_in_grid(o, grid)
            geometry.validate_fatness(o, fat_sq)
            objects.append(o)
            placed = True
            break
        if not placed:
            raise InstanceFormatError(
                f"rejection budget exceeded while sampling: {last_reason}")
    return InstanceFile(grid, fatness, objects, seed)


def _sample_shape(rng: random.Random, kind: str, d: int, N: int,
                  w: Fraction, ratio_cap: Fraction) -> Optional[FatObject]:
    if kind == "ball":
        r = w / 2
        lo16 = int(16 * r)
        hi16 = 16 * N - lo16
        if lo16 > hi16:
            return None
        center = tuple(Fraction(rng.randint(lo16, hi16), 16) for _ in range(d))
        return Ball(center, r)
    if kind == "cube":
        span = int(8 * (N - w))
        if span < 0:
            return None
        corner = tuple(Fraction(rng.randint(0, span), 8) for _ in range(d))
        return Cube(corner, w)
    # box: per-axis widths in [w/ratio_cap, w]
    lo64 = int(-(-64 * w // ratio_cap))  # ceil
    hi64 = int(64 * w)
    widths = tuple(Fraction(rng.randint(lo64, hi64), 64) for _ in range(d))
    corner = []
    for wi in widths:
        span = int(64 * (N - wi))
        if span < 0:
            return None
        corner.append(Fraction(rng.randint(0, span), 64))
    return Box(tuple(corner), widths)


# -- naive oracles for the verification sweeps -----------------------------------

def _naive_int_level(i: int) -> int:
    level = 0
    while i % 2 == 0:
        i //= 2
        level += 1
    return level


def _naive_point_level(p) -> int:
    return min(_naive_int_level(c) for c in p)


def _naive_contains(o: FatObject, p) -> bool:
    if isinstance(o, Cube):
        return all(c < x < c + o.width for c, x in zip(o.corner, p))
    if isinstance(o, Ball):
        return sum((Fraction(x) - c) ** 2 for c, x in zip(o.center, p)) \
            < o.radius ** 2
    if isinstance(o, Box):
        return all(c < x < c + w for c, x, w in zip(o.corner, p, o.widths))
    raise TypeError("naive membership supports the three concrete shapes")


def _naive_ranges(o: FatObject) -> list[range]:
    """Integer candidate ranges from the shape fields alone."""
    if isinstance(o, Cube):
        ext = [(c, c + o.width) for c in o.corner]
    elif isinstance(o, Ball):
        ext = [(c - o.radius, c + o.radius) for c in o.center]
    elif isinstance(o, Box):
        ext = [(c, c + w) for c, w in zip(o.corner, o.widths)]
    else:
        raise TypeError("naive oracle supports the three concrete shapes")
    out = []
    for lo, hi in ext:
        lo, hi = Fraction(lo), Fraction(hi)
        a = max(1, lo.numerator // lo.denominator + 1)
        b = -((-hi.numerator) // hi.denominator) - 1
        out.append(range(a, b + 1))
    return out


def _naive_volume(o: FatObject) -> int:
    vol = 1
    for r in _naive_ranges(o):
        vol *= len(r)
    return vol


def _naive_interior(o: FatObject):
    for p in product(*_naive_ranges(o)):
        if _naive_contains(o, p):
            yield p


def _naive_object_level(o: FatObject) -> Optional[int]:
    best = None
    for p in _naive_interior(o):
        lvl = _naive_point_level(p)
        if best is None or lvl > best:
            best = lvl
    return best


# -- verification sweeps ----------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    violations: list = field(default_factory=list)

    def record(self, detail: dict):
        self.passed = False
        if len(self.violations) < 10:
            self.violations.append(detail)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("GRIDHIT_WORKERS", "1")))
    except ValueError:
        return 1


def _map_indexed(fn, n: int) -> list:
    """Deterministic map of fn over range(n), optionally in worker
    processes (GRIDHIT_WORKERS); result order is always by index."""
    workers = _workers()
    if workers <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n), chunksize=max(1, n // (8 * workers))))


def verify_level_width(N: int = 64, dims=(1, 2, 3), count: int = 10_000,
                       seed: int = 1405, cross_check: int = 300) -> SuiteResult:
    """Fuzz objects against the width-vs-level bounds.

    For every object: inscribed width <= 2**(level+1), with equality only
    when the inscribed cube is dyadically aligned (an open cube of width
    2**k sitting on a multiple of 2**k on some axis excludes the boundary
    point that would otherwise raise its level, so the bound is attained
    there and strictness is impossible to promise); and enclosing width
    <= fatness * 2**(level+1), compared in squares, exactly.  A sample of
    the levels is re-derived with the naive enumeration oracle.
    """
    res = SuiteResult("levelwidth", True, 0)
    per_d = count // len(dims)
    for d in dims:
        fat = sqrt_exact(d) if d > 1 else Fraction(2)
        inst = gen_random(d, N, fat, ("ball", "cube", "box"), per_d, seed + d)
        crossed = 0
        for o in inst.objects:
            level = geometry.object_level(o)
            two = Fraction(2) ** (level + 1)
            detail = None
            if not geometry.in_width(o) <= two:
                detail = "in_width > 2**(level+1)"
            elif not geometry.out_width(o) ** 2 <= geometry.fatness_sq(o) * two ** 2:
                detail = "out_width > fatness * 2**(level+1)"
            elif (crossed < cross_check and _naive_volume(o) <= 30_000):
                crossed += 1
                if _naive_object_level(o) != level:
                    detail = "level disagrees with the naive enumeration"
            res.checked += 1
            if detail:
                res.record({"object": formats.shape_to_json(o),
                            "level": level, "problem": detail})
    return res


def verify_level_count(N: int = 64, fatness_values=(Fraction(1), SQRT2),
                       cross_check: bool = True) -> SuiteResult:
    """Exhaustive d=2 scan: every integer-cornered cube of the critical
    width holds at most floor((4*fatness+1)**2) points of the given level;
    counts come from the closed form and are re-counted naively."""
    res = SuiteResult("levelcount", True, 0)
    grid = GridSpec(2, N)
    coord_level = [0] * N
    for i in range(1, N):
        coord_level[i] = _naive_int_level(i)
    for fat in fatness_values:
        fat = as_scalar(fat)
        cap = scalar_floor((4 * fat + 1) ** 2)
        for level in range(grid.level_bound + 1):
            width = scalar_floor(fat * (1 << (level + 2)))
            if width > N:
                continue
            for cx in range(N - width + 1):
                for cy in range(N - width + 1):
                    cube = Cube((cx, cy), width)
                    cnt = (geometry.count_level_at_least(cube, level)
                           - geometry.count_level_at_least(cube, level + 1))
                    res.checked += 1
                    problem = None
                    if cnt > cap:
                        problem = f"{cnt} points of level {level} > cap {cap}"
                    elif cross_check:
                        naive = 0
                        for x in range(cx + 1, cx + width):
                            lx = coord_level[x]
                            for y in range(cy + 1, cy + width):
                                ly = coord_level[y]
                                if (lx if lx < ly else ly) == level:
                                    naive += 1
                        if naive != cnt:
                            problem = f"closed form {cnt} != naive {naive}"
                    if problem:
                        res.record({"corner": [cx, cy], "width": width,
                                    "level": level, "problem": problem})
    return res


_STEPCAP_NS = (16, 32, 64, 128, 256)


def _fatness_cycle(i: int):
    kind = i % 3
    if kind == 0:
        return Fraction(1), ("cube",)
    if kind == 1:
        return SQRT2, ("ball", "cube", "box")
    return Fraction(2), ("ball", "cube", "box")


def _stepcap_one(i: int, seed: int, d: int) -> dict:
    N = _STEPCAP_NS[i % len(_STEPCAP_NS)]
    fat, shapes = _fatness_cycle(i)
    inst = gen_random(d, N, fat, shapes, 6 + i % 7, seed + i)
    eng = EngineState(inst.grid, inst.fatness, instrument=True)
    violations = []
    for o in inst.objects:
        try:
            decision = eng.process(o)
        except GridHitError as exc:
            violations.append({"instance": i, "problem": str(exc)})
            break
        if isinstance(decision, Added) and len(decision.points) > eng.step_cap:
            violations.append({"instance": i,
                               "problem": f"step added {len(decision.points)}"})
    if eng.level_point_counts:
        worst = max(eng.level_point_counts.values())
        if worst > eng.step_cap:
            violations.append({"instance": i,
                               "problem": f"shared-object counter reached {worst}"})
    if not oracle.verify_hitting_set(inst.objects, eng.chosen):
        violations.append({"instance": i, "problem": "hitting set incomplete"})
    return {"checked": len(inst.objects), "violations": violations}


def verify_step_caps(instances: int = 1000, seed: int = 2203,
                     d: int = 2) -> SuiteResult:
    """Random online runs: per-step additions and the per-(level, point)
    instrumented counters stay within floor((4*fatness+1)**d)."""
    res = SuiteResult("stepcap", True, 0)
    for out in _map_indexed(partial(_stepcap_one, seed=seed, d=d), instances):
        res.checked += out["checked"]
        for v in out["violations"]:
            res.record(v)
    return res


def _ratio_one(i: int, seed: int, Ns) -> dict:
    N = Ns[i % len(Ns)]
    fat, shapes = _fatness_cycle(i)
    inst = gen_random(2, N, fat, shapes, 4 + i % 27, seed + i)
    report = run_online(inst, oracle_budget=5_000_000)
    violations = []
    if not report.opt_exact:
        violations.append({"instance": i, "problem": "oracle budget exceeded"})
    elif report.within_bound is not True:
        violations.append({"instance": i,
                           "problem": f"ratio {report.ratio} above bound"})
    return {"violations": violations}


def verify_ratio(instances: int = 200, seed: int = 715,
                 Ns=(64, 256)) -> SuiteResult:
    """Random online runs with certified optima: the measured ratio never
    exceeds (4*fatness+1)**(2d) * log2(N)."""
    res = SuiteResult("ratio", True, 0)
    for out in _map_indexed(partial(_ratio_one, seed=seed, Ns=Ns), instances):
        res.checked += 1
        for v in out["violations"]:
            res.record(v)
    return res


def verify_oracle(target: int = 100, seed: int = 908) -> SuiteResult:
    """Branch and bound vs. exhaustive subset enumeration on instances
    whose reduced candidate count is at most 12, plus sandwich checks."""
    res = SuiteResult("oracle", True, 0)
    attempts = 0
    while res.checked < target and attempts < 40 * target:
        attempts += 1
        inst = gen_random(2, 24, SQRT2, ("ball", "cube", "box"),
                          3 + attempts % 5, seed + attempts, max_width=8)
        reduced = oracle.reduce_instance(inst.objects)
        if len(reduced.candidates) > 12:
            continue
        res.checked += 1
        bb = oracle.exact_min_hitting_set(reduced)
        ex = oracle.exhaustive_min_hitting_set(reduced)
        greedy = oracle.greedy_hitting_set(reduced)
        if bb.size != ex.size:
            res.record({"attempt": attempts,
                        "problem": f"b&b {bb.size} != exhaustive {ex.size}"})
        if not (bb.lower_bound <= bb.size <= greedy.size):
            res.record({"attempt": attempts, "problem": "bound sandwich broken"})
        if not oracle.verify_hitting_set(inst.objects, bb.points):
            res.record({"attempt": attempts, "problem": "b&b set does not hit"})
        if not bb.exact:
            res.record({"attempt": attempts, "problem": "b&b gave up"})
    if res.checked < target:
        res.record({"problem": f"only {res.checked} qualifying instances"})
    return res


SUITES = {
    "levelwidth": verify_level_width,
    "levelcount": verify_level_count,
    "stepcap": verify_step_caps,
    "ratio": verify_ratio,
    "oracle": verify_oracle,
}


def run_suite(name: str, **params) -> list[SuiteResult]:
    if name == "all":
        return [fn() for fn in SUITES.values()]
    if name not in SUITES:
        raise InstanceFormatError(
            f"unknown suite {name!r}; pick from {sorted(SUITES)} or 'all'")
    return [SUITES[name](**params)]
