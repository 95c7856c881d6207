"""Lattice points, dyadic levels, and fat shapes on the open grid cube.

The ground set for grid bound N and dimension d is P = {1, ..., N-1}^d,
the integer points of the open cube (0, N)^d.  The level of a positive
integer is its number of trailing zero bits; the level of a point is the
minimum over its coordinates, so levels partition P into a dyadic
hierarchy with a single maximum-level point when N is a power of two.

Shapes are open sets: strict inequalities on every face and boundary.
Three concrete shapes are supported (cube, ball, axis-parallel box) plus
a generic extension bundle.  Every predicate is exact: coordinates and
widths are ints, Fractions, or quadratic irrationals (see ``exactnum``),
never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Callable, Union

from gridhit import kernels
from gridhit.errors import EmptyObjectError, FatnessViolation, GridBoundsError
from gridhit.exactnum import (
    Scalar,
    as_scalar,
    is_rational,
    scalar_ceil,
    scalar_floor,
    sqrt_exact,
)

Point = tuple[int, ...]


@dataclass(frozen=True)
class GridSpec:
    """The ambient grid: dimension d and bound N, with P = {1..N-1}^d."""

    d: int
    N: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        if not isinstance(self.N, int) or self.N < 2:
            raise ValueError(f"grid bound must be an integer >= 2, got {self.N}")

    @property
    def level_bound(self) -> int:
        """Largest level any point of P can have: floor(log2(N-1))."""
        return (self.N - 1).bit_length() - 1

    @property
    def point_count(self) -> int:
        return (self.N - 1) ** self.d

    def contains_point(self, p) -> bool:
        return (len(p) == self.d
                and all(isinstance(c, int) and 1 <= c <= self.N - 1 for c in p))

    def all_points(self):
        """Iterate all of P in lexicographic order (desk scale only)."""
        return product(range(1, self.N), repeat=self.d)


def _scalar_tuple(values) -> tuple[Scalar, ...]:
    return tuple(as_scalar(v) for v in values)


@dataclass(frozen=True)
class Cube:
    """Open axis-parallel cube: corner_i < x_i < corner_i + width."""

    corner: tuple[Scalar, ...]
    width: Scalar

    def __post_init__(self):
        object.__setattr__(self, "corner", _scalar_tuple(self.corner))
        object.__setattr__(self, "width", as_scalar(self.width))
        if not self.width > 0:
            raise ValueError(f"cube width must be positive, got {self.width}")


@dataclass(frozen=True)
class Ball:
    """Open ball: sum((x_i - center_i)^2) < radius^2."""

    center: tuple[Scalar, ...]
    radius: Scalar

    def __post_init__(self):
        object.__setattr__(self, "center", _scalar_tuple(self.center))
        object.__setattr__(self, "radius", as_scalar(self.radius))
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Box:
    """Open axis-parallel box with per-axis widths."""

    corner: tuple[Scalar, ...]
    widths: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "corner", _scalar_tuple(self.corner))
        object.__setattr__(self, "widths", _scalar_tuple(self.widths))
        if len(self.corner) != len(self.widths):
            raise ValueError("corner and widths must have the same dimension")
        if not all(w > 0 for w in self.widths):
            raise ValueError("box widths must be positive")


@dataclass(frozen=True)
class CustomShape:
    """Extension point: any open set given as a (membership, enclosing
    cube, inscribed cube, squared fatness) bundle.  Ships unused by the
    rest of the package; enumeration falls back to filtering the
    enclosing cube by the membership predicate."""

    membership: Callable[[Point], bool]
    enclosing: Cube
    inscribed: Cube
    fatness_square: Scalar


FatObject = Union[Cube, Ball, Box, CustomShape]


# -- levels -------------------------------------------------------------------

def int_level(i: int) -> int:
    """Number of trailing zero bits of i >= 1 (the 2-adic valuation)."""
    return kernels.int_level(i)


def point_level(p) -> int:
    """min over coordinates of int_level; defined since 0 is never in P."""
    return kernels.point_level(tuple(p))


def _max_coord_level(a: int, b: int) -> int:
    """Largest level of any integer in [a, b], for 1 <= a <= b."""
    for level in range(b.bit_length() - 1, -1, -1):
        if (b >> level) << level >= a:
            return level
    return 0


# -- basic shape queries --------------------------------------------------------

def dimension(o: FatObject) -> int:
    if isinstance(o, (Cube, Box)):
        return len(o.corner)
    if isinstance(o, Ball):
        return len(o.center)
    return len(o.enclosing.corner)


def contains(o: FatObject, p) -> bool:
    """Strict (open-set) membership; p may have any exact scalar coords."""
    if isinstance(o, Cube):
        return all(c < x < c + o.width for c, x in zip(o.corner, p))
    if isinstance(o, Ball):
        acc = 0
        for c, x in zip(o.center, p):
            t = x - c
            acc = acc + t * t
        return acc < o.radius * o.radius
    if isinstance(o, Box):
        return all(c < x < c + w for c, x, w in zip(o.corner, p, o.widths))
    return o.membership(tuple(p))


def _extent(o: FatObject) -> list[tuple[Scalar, Scalar]]:
    """Closed per-axis bounds [lo_i, hi_i] that contain the object."""
    if isinstance(o, Cube):
        return [(c, c + o.width) for c in o.corner]
    if isinstance(o, Ball):
        return [(c - o.radius, c + o.radius) for c in o.center]
    if isinstance(o, Box):
        return [(c, c + w) for c, w in zip(o.corner, o.widths)]
    ec = o.enclosing
    return [(c, c + ec.width) for c in ec.corner]


def enclosing_cube(o: FatObject) -> Cube:
    """Smallest axis-parallel cube containing the object (centered when
    the minimizer is not unique)."""
    if isinstance(o, Cube):
        return o
    if isinstance(o, Ball):
        return Cube(tuple(c - o.radius for c in o.center), 2 * o.radius)
    if isinstance(o, Box):
        wmax = max(o.widths)
        corner = tuple(c - (wmax - w) / 2 for c, w in zip(o.corner, o.widths))
        return Cube(corner, wmax)
    return o.enclosing


def inscribed_cube(o: FatObject) -> Cube:
    """Largest axis-parallel cube contained in the object (centered).

    For a ball this has width 2r/sqrt(d): the open cube whose closure
    touches the sphere at its corners is contained in the open ball.
    """
    if isinstance(o, Cube):
        return o
    if isinstance(o, Ball):
        half = o.radius / sqrt_exact(len(o.center))
        return Cube(tuple(c - half for c in o.center), 2 * half)
    if isinstance(o, Box):
        wmin = min(o.widths)
        corner = tuple(c + (w - wmin) / 2 for c, w in zip(o.corner, o.widths))
        return Cube(corner, wmin)
    return o.inscribed


def out_width(o: FatObject) -> Scalar:
    return enclosing_cube(o).width


def in_width(o: FatObject) -> Scalar:
    return inscribed_cube(o).width


def fatness_sq(o: FatObject) -> Scalar:
    """Squared fatness (out_width/in_width)^2; squaring keeps the value
    rational for balls, whose fatness is sqrt(d)."""
    if isinstance(o, Cube):
        return Fraction(1)
    if isinstance(o, Ball):
        return Fraction(len(o.center))
    if isinstance(o, Box):
        r = max(o.widths) / min(o.widths)
        return r * r
    return o.fatness_square


def validate_fatness(o: FatObject, family_fatness_sq: Scalar) -> None:
    if fatness_sq(o) > family_fatness_sq:
        raise FatnessViolation(
            f"object fatness^2 {fatness_sq(o)} exceeds the declared bound "
            f"{family_fatness_sq}")


def dilate(o: FatObject, beta: Scalar, v) -> FatObject:
    """Scale by beta > 0 and translate by v; fatness is preserved."""
    beta = as_scalar(beta)
    if not beta > 0:
        raise ValueError(f"dilation scale must be positive, got {beta}")
    v = _scalar_tuple(v)
    if len(v) != dimension(o):
        raise ValueError("translation vector has wrong dimension")
    if isinstance(o, Cube):
        return Cube(tuple(beta * c + t for c, t in zip(o.corner, v)),
                    beta * o.width)
    if isinstance(o, Ball):
        return Ball(tuple(beta * c + t for c, t in zip(o.center, v)),
                    beta * o.radius)
    if isinstance(o, Box):
        return Box(tuple(beta * c + t for c, t in zip(o.corner, v)),
                   tuple(beta * w for w in o.widths))
    raise TypeError("custom shapes do not carry a dilation rule")


def validate_in_grid(o: FatObject, grid: GridSpec) -> None:
    if dimension(o) != grid.d:
        raise GridBoundsError(
            f"object dimension {dimension(o)} != grid dimension {grid.d}")
    for lo, hi in _extent(o):
        if lo < 0 or hi > grid.N:
            raise GridBoundsError(
                f"object extent [{lo}, {hi}] leaves [0, {grid.N}]")


# -- lattice enumeration --------------------------------------------------------

def _int_ranges(o: FatObject) -> list[tuple[int, int]] | None:
    """Per-axis inclusive integer candidate bounds, clipped to coords >= 1.

    Returns None when some axis admits no integer, i.e. the object surely
    contains no grid point.
    """
    ranges = []
    for lo, hi in _extent(o):
        a = max(1, scalar_floor(lo) + 1)
        b = scalar_ceil(hi) - 1
        if a > b:
            return None
        ranges.append((a, b))
    return ranges


def _ball_int_args(o: Ball):
    """Scale a rational ball to integers: center num/den, radius num/den."""
    den = lcm(*(Fraction(c).denominator for c in o.center),
              Fraction(o.radius).denominator)
    cnum = tuple(int(Fraction(c) * den) for c in o.center)
    rnum = int(Fraction(o.radius) * den)
    return cnum, den, rnum


def _is_rational_ball(o: FatObject) -> bool:
    return (isinstance(o, Ball) and is_rational(o.radius)
            and all(is_rational(c) for c in o.center))


def grid_points_in(o: FatObject) -> list[Point]:
    """All integer points strictly inside the object, lexicographically.

    For an object that lies inside its grid these are exactly the points
    of P it contains.
    """
    ranges = _int_ranges(o)
    if ranges is None:
        return []
    lo = tuple(a for a, _ in ranges)
    hi = tuple(b for _, b in ranges)
    if isinstance(o, (Cube, Box)):
        return list(product(*(range(a, b + 1) for a, b in ranges)))
    if _is_rational_ball(o):
        cnum, den, rnum = _ball_int_args(o)
        return kernels.ball_points(lo, hi, cnum, den, rnum)
    return [p for p in product(*(range(a, b + 1) for a, b in ranges))
            if contains(o, p)]


def count_grid_points(o: FatObject) -> int:
    ranges = _int_ranges(o)
    if ranges is None:
        return 0
    if isinstance(o, (Cube, Box)):
        n = 1
        for a, b in ranges:
            n *= b - a + 1
        return n
    if _is_rational_ball(o):
        cnum, den, rnum = _ball_int_args(o)
        lo = tuple(a for a, _ in ranges)
        hi = tuple(b for _, b in ranges)
        return kernels.ball_count(lo, hi, cnum, den, rnum)
    return len(grid_points_in(o))


def has_grid_point(o: FatObject) -> bool:
    ranges = _int_ranges(o)
    if ranges is None:
        return False
    if isinstance(o, (Cube, Box)):
        return True
    if _is_rational_ball(o):
        cnum, den, rnum = _ball_int_args(o)
        lo = tuple(a for a, _ in ranges)
        hi = tuple(b for _, b in ranges)
        return kernels.ball_count(lo, hi, cnum, den, rnum) > 0
    # Generic shapes: try the candidates around the center of the
    # enclosing cube first (an immediate hit for any large object), then
    # fall back to an early-exit scan.
    ec = enclosing_cube(o)
    mids = [c + ec.width / 2 for c in ec.corner]
    cands = product(*((scalar_floor(m), scalar_floor(m) + 1) for m in mids))
    for p in cands:
        if all(a <= x <= b for x, (a, b) in zip(p, ranges)) and contains(o, p):
            return True
    for p in product(*(range(a, b + 1) for a, b in ranges)):
        if contains(o, p):
            return True
    return False


def object_level(o: FatObject) -> int:
    """Maximum level over the integer points inside the object."""
    ranges = _int_ranges(o)
    if ranges is None:
        raise EmptyObjectError("object contains no grid point")
    cap = min(_max_coord_level(a, b) for a, b in ranges)
    if isinstance(o, (Cube, Box)):
        # The box is a product set, so max-min splits per axis.
        return cap
    if _is_rational_ball(o):
        cnum, den, rnum = _ball_int_args(o)
        lo = tuple(a for a, _ in ranges)
        hi = tuple(b for _, b in ranges)
        level = kernels.ball_max_level(lo, hi, cnum, den, rnum, cap)
        if level < 0:
            raise EmptyObjectError("object contains no grid point")
        return level
    for level in range(cap, -1, -1):
        stride = 1 << level
        axes = []
        for a, b in ranges:
            start = -((-a) // stride) * stride
            axes.append(range(start, b + 1, stride))
        if any(contains(o, p) for p in product(*axes)):
            return level
    raise EmptyObjectError("object contains no grid point")


def points_of_level(o: FatObject, level: int) -> list[Point]:
    """The integer points inside the object whose level is exactly
    ``level``, lexicographically."""
    if level < 0:
        raise ValueError(f"level must be non-negative, got {level}")
    ranges = _int_ranges(o)
    if ranges is None:
        return []
    lo = tuple(a for a, _ in ranges)
    hi = tuple(b for _, b in ranges)
    if isinstance(o, (Cube, Box)):
        return kernels.box_points_of_level(lo, hi, level)
    if _is_rational_ball(o):
        cnum, den, rnum = _ball_int_args(o)
        return kernels.ball_points_of_level(lo, hi, cnum, den, rnum, level)
    stride = 1 << level
    axes = []
    for a, b in ranges:
        start = -((-a) // stride) * stride
        axes.append(range(start, b + 1, stride))
    return [p for p in product(*axes)
            if any((v >> level) & 1 for v in p) and contains(o, p)]


def count_level_at_least(c: Cube, level: int) -> int:
    """Number of integer points of level >= ``level`` in the open cube.

    Per axis these are the multiples of 2**level strictly inside the
    side interval, and the qualifying points are exactly their product.
    """
    if level < 0:
        raise ValueError(f"level must be non-negative, got {level}")
    stride = 1 << level
    total = 1
    for corner in c.corner:
        lo_mult = max(1, scalar_floor(corner / stride) + 1)
        hi_mult = scalar_ceil((corner + c.width) / stride) - 1
        if hi_mult < lo_mult:
            return 0
        total *= hi_mult - lo_mult + 1
    return total
