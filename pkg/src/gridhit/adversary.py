"""The nested-dilation forcing game.

The adversary presents dilations of one base shape.  The first fills the
whole grid cube; every later one is squeezed into a cell of the previous
object's inscribed cube that the opponent's points missed, which the
pigeonhole principle always provides.  The game ends when the candidate
object contains no grid point.  Nesting makes a single point an offline
optimum, while the width recurrence forces any opponent to spend points
at a rate governed only by the grid bound and the base shape's fatness.

Ball games leave the rationals: the inscribed cube of a ball has
quadratic-irrational corners, and every later object inherits them.  The
exact scalars keep the recurrence an identity rather than an estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from gridhit import geometry
from gridhit.errors import EmptyObjectError, InvariantViolation, ProtocolError
from gridhit.exactnum import Scalar, scalar_floor
from gridhit.geometry import Cube, FatObject, GridSpec, Point

Opponent = Callable[[FatObject], list[Point]]


@dataclass
class GameState:
    """Trace of one game: objects[j] was answered by responses[j]."""

    grid: GridSpec
    base: FatObject
    objects: list[FatObject] = field(default_factory=list)
    responses: list[tuple[Point, ...]] = field(default_factory=list)
    empty_cells: list[Cube] = field(default_factory=list)
    all_points: list[Point] = field(default_factory=list)
    point_set: set[Point] = field(default_factory=set)
    finished: bool = False
    final_width: Optional[Scalar] = None

    @property
    def points_per_step(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.responses)


@dataclass
class GameSummary:
    steps: int
    points_per_step: tuple[int, ...]
    total_points: int
    forced_minimum_met: bool
    certificate: Point
    final_width: Optional[Scalar]


def initial_object(grid: GridSpec, base: FatObject) -> FatObject:
    """The dilation of the base shape whose enclosing cube is the whole
    open grid cube."""
    ec = geometry.enclosing_cube(base)
    if len(ec.corner) != grid.d:
        raise ValueError(
            f"base shape dimension {len(ec.corner)} != grid dimension {grid.d}")
    beta = grid.N / ec.width
    v = tuple(-beta * c for c in ec.corner)
    first = geometry.dilate(base, beta, v)
    got = geometry.enclosing_cube(first)
    if got.width != grid.N or any(c != 0 for c in got.corner):
        raise InvariantViolation("initial dilation missed the grid cube")
    return first


def find_empty_subcube(c: Cube, points: list[Point]) -> Cube:
    """A cube of width width(c)/(len(points)+1) inside c whose open
    interior avoids every point.

    Per axis the side is split into len(points)+1 equal cells; each point
    blocks at most the one open cell its coordinate falls strictly inside
    (a coordinate on a cell boundary blocks neither neighbour), so some
    cell index is free.  The smallest free index is taken on every axis.
    """
    k = len(points)
    cell = c.width / (k + 1)
    corner = []
    for axis, base in enumerate(c.corner):
        blocked = set()
        for p in points:
            t = (p[axis] - base) / cell
            h = scalar_floor(t)
            if t == h:
                continue  # exactly on a boundary
            if 0 <= h <= k:
                blocked.add(h)
        for h in range(k + 1):
            if h not in blocked:
                corner.append(base + h * cell)
                break
        else:
            raise InvariantViolation("pigeonhole failed; too many points")
    return Cube(tuple(corner), cell)


def new_game(grid: GridSpec, base: FatObject) -> GameState:
    state = GameState(grid=grid, base=base)
    first = initial_object(grid, base)
    if not geometry.has_grid_point(first):
        raise EmptyObjectError("the grid-filling object has no grid point")
    state.objects.append(first)
    return state


def next_object(state: GameState,
                points_added: list[Point]) -> Optional[FatObject]:
    """Record the opponent's answer to the current object and produce the
    next one, or None when the game is over."""
    if state.finished:
        raise ProtocolError("the game is already over")
    if len(state.responses) != len(state.objects) - 1:
        raise ProtocolError("current object was already answered")
    current = state.objects[-1]

    new_pts: list[Point] = []
    for p in points_added:
        p = tuple(p)
        if not state.grid.contains_point(p):
            raise ProtocolError(f"point {p} is outside the grid")
        if p not in state.point_set and p not in new_pts:
            new_pts.append(p)
    if not any(geometry.contains(current, p) for p in new_pts):
        raise ProtocolError("the current object was left unhit")
    state.responses.append(tuple(new_pts))
    state.all_points.extend(new_pts)
    state.point_set.update(new_pts)

    inner = geometry.inscribed_cube(current)
    inside = [p for p in state.all_points if geometry.contains(inner, p)]
    if len(inside) > len(new_pts):
        # Points predating this step cannot be in the (unhit) object.
        raise InvariantViolation("stale points inside the inscribed cube")
    cell = find_empty_subcube(inner, inside)
    state.empty_cells.append(cell)

    base_ec = geometry.enclosing_cube(state.base)
    beta = cell.width / base_ec.width
    v = tuple(cc - beta * bc for cc, bc in zip(cell.corner, base_ec.corner))
    candidate = geometry.dilate(state.base, beta, v)

    if not geometry.has_grid_point(candidate):
        state.finished = True
        state.final_width = geometry.out_width(candidate)
        return None
    for p in state.all_points:
        if geometry.contains(candidate, p):
            raise InvariantViolation(
                f"candidate object contains existing point {p}")
    state.objects.append(candidate)
    return candidate


def forced_minimum_met(grid: GridSpec, base: FatObject, total: int) -> bool:
    """Exact check that ``total`` meets the guaranteed minimum.

    The guarantee total >= log2(N) / (1 + log2(fatness)) rearranges to
    (2*fatness)**total >= N, compared in squares to stay rational.
    """
    fat_sq = geometry.fatness_sq(base)
    return (4 * fat_sq) ** total >= grid.N * grid.N


def play_game(grid: GridSpec, base: FatObject, opponent: Opponent) -> GameSummary:
    """Run the full game loop against an opponent callback.

    The opponent receives each object and returns the points it places
    that turn (at least one of them inside the object).
    """
    state = play_game_traced(grid, base, opponent)
    return summarize(state)


def play_game_traced(grid: GridSpec, base: FatObject,
                     opponent: Opponent) -> GameState:
    state = new_game(grid, base)
    while not state.finished:
        current = state.objects[-1]
        next_object(state, list(opponent(current)))
    return state


def summarize(state: GameState) -> GameSummary:
    if not state.finished:
        raise ProtocolError("game still in progress")
    ks = state.points_per_step
    total = sum(ks)
    certificate = min(geometry.grid_points_in(state.objects[-1]))
    for o in state.objects:
        if not geometry.contains(o, certificate):
            raise InvariantViolation(
                "nesting broken: the certificate misses an object")
    return GameSummary(
        steps=len(state.objects),
        points_per_step=ks,
        total_points=total,
        forced_minimum_met=forced_minimum_met(state.grid, state.base, total),
        certificate=certificate,
        final_width=state.final_width,
    )
