"""The online hitting-set engine.

The engine maintains a growing point set.  When an object arrives it does
nothing if the set already hits it; otherwise it adds every maximum-level
point of the object.  Decisions are irrevocable and depend only on the
current point set and the arriving object, so replaying a transcript
reproduces the run exactly.

Instrumentation: for every object that was unhit at arrival, the engine
counts, per (object level, interior point) pair, how many such objects of
that level contain that point.  Each count is provably at most
floor((4*fatness + 1)**d) and the engine checks the cap after every step;
the same cap bounds the number of points any single step may add.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import log2
from typing import Optional, Union

from gridhit import geometry
from gridhit.errors import EmptyObjectError, InvariantViolation
from gridhit.exactnum import Scalar, as_scalar, scalar_floor
from gridhit.geometry import FatObject, GridSpec, Point


@dataclass(frozen=True)
class Added:
    """The step added every maximum-level point of the object."""

    points: tuple[Point, ...]
    level: int


@dataclass(frozen=True)
class AlreadyHit:
    """The object was hit by an existing point; nothing was added."""


Decision = Union[Added, AlreadyHit]


@dataclass
class RatioReport:
    ratio: Fraction
    bound: float
    within_bound: bool
    exact_comparison: bool


class EngineState:
    """One online run: strictly sequential; distinct instances are
    independent and may run in parallel.

    ``instrument=False`` skips the per-point instrumentation (the only
    part of a step that is linear in the object's area), for long sweeps
    and large-grid games.  ``keep_history=False`` drops per-step records
    and keeps counts only.
    """

    def __init__(self, grid: GridSpec, fatness: Scalar, *,
                 instrument: bool = True, keep_history: bool = True,
                 use_index: bool = False):
        fatness = as_scalar(fatness)
        if not fatness >= 1:
            raise ValueError(f"fatness must be >= 1, got {fatness}")
        self.grid = grid
        self.fatness = fatness
        self.fatness_sq = fatness * fatness
        self.step_cap = scalar_floor((4 * fatness + 1) ** grid.d)
        self.instrument = instrument
        self.keep_history = keep_history
        self.use_index = use_index
        self.chosen: list[Point] = []
        self._chosen_set: set[Point] = set()
        self.history: Optional[list[tuple[FatObject, Decision, int]]] = \
            [] if keep_history else None
        self.level_point_counts: Counter = Counter()
        self.steps = 0
        self.already_hit_count = 0

    # -- hit detection -------------------------------------------------------

    def _is_hit_scan(self, o: FatObject) -> bool:
        return any(geometry.contains(o, p) for p in self.chosen)

    def _is_hit_indexed(self, o: FatObject) -> bool:
        # Unit-cell bucket index: chosen points are their own cells, so a
        # lookup per interior lattice point beats the scan for small
        # objects; fall back to the scan when the object is the bigger side.
        size = geometry.count_grid_points(o)
        if size >= len(self.chosen):
            return self._is_hit_scan(o)
        return any(p in self._chosen_set for p in geometry.grid_points_in(o))

    def is_hit(self, o: FatObject) -> bool:
        if self.use_index:
            return self._is_hit_indexed(o)
        return self._is_hit_scan(o)

    # -- the online step -----------------------------------------------------

    def process(self, o: FatObject) -> Decision:
        geometry.validate_in_grid(o, self.grid)
        geometry.validate_fatness(o, self.fatness_sq)
        self.steps += 1

        if self.is_hit(o):
            self.already_hit_count += 1
            decision: Decision = AlreadyHit()
            if self.keep_history:
                self.history.append((o, decision, len(self.chosen)))
            return decision

        if self.instrument:
            interior = geometry.grid_points_in(o)
            if not interior:
                raise EmptyObjectError("object contains no grid point")
        else:
            interior = None
        level = geometry.object_level(o)
        added = geometry.points_of_level(o, level)
        if not added:
            raise EmptyObjectError("object contains no grid point")
        if len(added) > self.step_cap:
            raise InvariantViolation(
                f"step added {len(added)} points, cap is {self.step_cap}")
        for p in added:
            if p in self._chosen_set:
                raise InvariantViolation(
                    f"point {p} re-added; it should have hit the object")
        self.chosen.extend(added)
        self._chosen_set.update(added)

        if interior is not None:
            keys = [(level, p) for p in interior]
            self.level_point_counts.update(keys)
            counts = self.level_point_counts
            worst = max(counts[k] for k in keys)
            if worst > self.step_cap:
                raise InvariantViolation(
                    f"some (level, point) pair is shared by {worst} unhit "
                    f"objects, cap is {self.step_cap}")

        decision = Added(tuple(added), level)
        if self.keep_history:
            self.history.append((o, decision, len(self.chosen)))
        return decision

    # -- results -------------------------------------------------------------

    def hitting_set(self) -> list[Point]:
        return list(self.chosen)

    def ratio_report(self, opt_size: int) -> RatioReport:
        return check_ratio_bound(self.grid, self.fatness,
                                 len(self.chosen), opt_size)


def check_ratio_bound(grid: GridSpec, fatness: Scalar,
                      alg_size: int, opt_size: int) -> RatioReport:
    """Compare alg_size/opt_size with (4*fatness+1)**(2d) * log2(N).

    The comparison is exact whenever N is a power of two (the log is an
    integer and the factor an exact scalar); otherwise it falls back to a
    float comparison with a hair of slack.
    """
    if opt_size < 1:
        raise ValueError(f"opt_size must be >= 1, got {opt_size}")
    ratio = Fraction(alg_size, opt_size)
    factor = (4 * as_scalar(fatness) + 1) ** (2 * grid.d)
    n = grid.N
    if n & (n - 1) == 0:
        within = ratio <= factor * (n.bit_length() - 1)
        exact = True
    else:
        within = float(ratio) <= float(factor) * log2(n) * (1 + 1e-12)
        exact = False
    return RatioReport(ratio, float(factor) * log2(n), within, exact)


def new_engine(grid: GridSpec, fatness: Scalar, **kwargs) -> EngineState:
    return EngineState(grid, fatness, **kwargs)


def process(state: EngineState, o: FatObject) -> Decision:
    return state.process(o)


def hitting_set(state: EngineState) -> list[Point]:
    return state.hitting_set()


def ratio_report(state: EngineState, opt_size: int) -> RatioReport:
    return state.ratio_report(opt_size)
