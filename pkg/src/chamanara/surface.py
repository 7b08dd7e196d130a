"""The Chamanara surface as a quotient of the unit square.

The bottom side is cut into the segments ``I_k^0 = [1-2^-k, 1-2^-k-1] x {0}``,
the top into ``I_k^1 = [2^-k-1, 2^-k] x {1}``, the left side into
``J_k^0 = {0} x [1-2^-k, 1-2^-k-1]`` and the right into
``J_k^1 = {1} x [2^-k-1, 2^-k]``.  ``I_k^0`` is glued to ``I_k^1`` and
``J_k^0`` to ``J_k^1`` by translations.  The corners ``(0, 1)``, ``(1, 0)``
and every segment endpoint are removed.

Every surface point has a unique representative in ``[0, 1) x [0, 1)``:
interior points, points on the bottom side and points on the left side.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .dyadic import DigitStream, DyadicRational, as_fraction

Coordinate = Union[Fraction, DigitStream]

DEFAULT_K_MAX = 64
DEFAULT_PRECISION_CAP = 256
INFINITY = float("inf")


class RemovedPointError(ValueError):
    """Raised when an operation needs a point of the surface but got a removed point."""


def _coord(c) -> Coordinate:
    if isinstance(c, DigitStream):
        return c
    if isinstance(c, float):
        raise TypeError("float coordinates are not exact; use Fraction or a DigitStream")
    return as_fraction(c) if not isinstance(c, str) else Fraction(c)


@dataclass(frozen=True)
class SquarePoint:
    """A point of the closed unit square with exact or stream coordinates."""

    x: Coordinate
    y: Coordinate

    def __post_init__(self):
        object.__setattr__(self, "x", _coord(self.x))
        object.__setattr__(self, "y", _coord(self.y))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.x, Fraction) and isinstance(self.y, Fraction)

    def swapped(self) -> "SquarePoint":
        return SquarePoint(self.y, self.x)

    def box(self, precision: int) -> "Box":
        return Box.of(self, precision)

    def __repr__(self) -> str:
        def fmt(c):
            return str(c) if isinstance(c, Fraction) else repr(c)
        return f"SquarePoint({fmt(self.x)}, {fmt(self.y)})"


def _bounds(c: Coordinate, precision: int) -> tuple[Fraction, Fraction]:
    if isinstance(c, Fraction):
        return c, c
    return c.bounds(precision)


@dataclass(frozen=True)
class Box:
    """Closed axis-parallel rectangle known to contain a point."""

    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    @classmethod
    def of(cls, p: Union[SquarePoint, "Box"], precision: int = 128) -> "Box":
        if isinstance(p, Box):
            return p
        x_lo, x_hi = _bounds(p.x, precision)
        y_lo, y_hi = _bounds(p.y, precision)
        return cls(x_lo, x_hi, y_lo, y_hi)

    @classmethod
    def from_digits(cls, x_digits: str, y_digits: str) -> "Box":
        """Box of all points whose expansions start with the given digit strings."""
        def iv(d):
            lo = Fraction(int(d, 2) if d else 0, 1 << len(d))
            return lo, lo + Fraction(1, 1 << len(d))
        (a, b), (c, d) = iv(x_digits), iv(y_digits)
        return cls(a, b, c, d)

    @property
    def is_point(self) -> bool:
        return self.x_lo == self.x_hi and self.y_lo == self.y_hi


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi


# ---------------------------------------------------------------------------
# Edges
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeSegment:
    """One of the glued boundary segments ``I_k^side`` or ``J_k^side``."""

    family: str
    k: int
    side: int

    def __post_init__(self):
        if self.family not in ("I", "J") or self.side not in (0, 1) or self.k < 0:
            raise ValueError(f"no such edge {self.family}_{self.k}^{self.side}")

    @property
    def label(self) -> str:
        return f"{self.family}_{self.k}^{self.side}"

    @property
    def length(self) -> Fraction:
        return Fraction(1, 1 << (self.k + 1))

    @property
    def span(self) -> tuple[Fraction, Fraction]:
        """The interval swept along the side by this segment."""
        a = Fraction(1, 1 << self.k)
        b = Fraction(1, 1 << (self.k + 1))
        return (1 - a, 1 - b) if self.side == 0 else (b, a)

    @property
    def endpoints(self) -> tuple[SquarePoint, SquarePoint]:
        lo, hi = self.span
        if self.family == "I":
            y = self.side
            return SquarePoint(lo, y), SquarePoint(hi, y)
        x = self.side
        return SquarePoint(x, lo), SquarePoint(x, hi)

    @property
    def partner(self) -> "EdgeSegment":
        return EdgeSegment(self.family, self.k, 1 - self.side)

    @property
    def translation(self) -> tuple[Fraction, Fraction]:
        """The vector carrying this segment onto its partner."""
        t = 1 - 3 * self.length
        if self.family == "I":
            return (-t, Fraction(1)) if self.side == 0 else (t, Fraction(-1))
        return (Fraction(1), -t) if self.side == 0 else (Fraction(-1), t)


def edges(k_max: int = DEFAULT_K_MAX) -> list[EdgeSegment]:
    """All segments with ``k <= k_max``, ordered by family, k, side."""
    return [EdgeSegment(f, k, s) for f in ("I", "J") for k in range(k_max + 1) for s in (0, 1)]


def _edge_index(u: Fraction) -> tuple[int, bool]:
    """For ``u`` in ``(0, 1]`` return ``k`` with ``u`` in ``(2^-k-1, 2^-k]`` and whether ``u = 2^-k``."""
    a, b = u.denominator, u.numerator  # 1/u = a/b >= 1
    k = a.bit_length() - b.bit_length()
    if (b << k) > a:
        k -= 1
    return k, (b << k) == a


class PointKind(enum.Enum):
    INTERIOR = "interior"
    EDGE_INTERIOR = "edge_interior"
    REMOVED = "removed"


class RemovalReason(enum.Enum):
    CORNER = "corner"
    ENDPOINT = "endpoint"


@dataclass(frozen=True)
class PointClass:
    kind: PointKind
    edge: Optional[EdgeSegment] = None
    partner: Optional[SquarePoint] = None
    reason: Optional[RemovalReason] = None

    @property
    def is_removed(self) -> bool:
        return self.kind is PointKind.REMOVED


def _glue(edge: EdgeSegment, p: SquarePoint) -> SquarePoint:
    dx, dy = edge.translation
    return SquarePoint(p.x + dx, p.y + dy)


def _classify_exact(x: Fraction, y: Fraction) -> PointClass:
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ValueError(f"({x}, {y}) lies outside the closed unit square")
    if (x, y) in ((0, 1), (1, 0)):
        return PointClass(PointKind.REMOVED, reason=RemovalReason.CORNER)
    if 0 < x < 1 and 0 < y < 1:
        return PointClass(PointKind.INTERIOR)
    if y == 0 or y == 1:
        family, side, along = "I", int(y), x
    else:
        family, side, along = "J", int(x), y
    u = 1 - along if side == 0 else along
    k, at_endpoint = _edge_index(u)
    if at_endpoint:
        return PointClass(PointKind.REMOVED, reason=RemovalReason.ENDPOINT)
    edge = EdgeSegment(family, k, side)
    p = SquarePoint(x, y)
    return PointClass(PointKind.EDGE_INTERIOR, edge=edge, partner=_glue(edge, p))


def classify_point(p: SquarePoint, precision_cap: int = DEFAULT_PRECISION_CAP) -> PointClass:
    """Classify a point of the closed square as interior, edge-interior or removed.

    Exact coordinates are classified by closed-form interval formulas, so no
    bound on ``k`` applies.  Points with stream coordinates are evaluated at
    increasing precision until their box is inside the open square; a
    stream point on (or too close to) the boundary is an error.
    """
    if p.is_exact:
        return _classify_exact(p.x, p.y)
    for c in (p.x, p.y):
        if isinstance(c, Fraction) and c in (0, 1):
            raise ValueError("stream coordinate along the boundary cannot be classified exactly")
    m = 8
    while True:
        b = Box.of(p, m)
        if b.x_lo < 0 or b.x_hi > 1 or b.y_lo < 0 or b.y_hi > 1:
            raise ValueError(f"{p!r} lies outside the closed unit square")
        if 0 < b.x_lo and b.x_hi < 1 and 0 < b.y_lo and b.y_hi < 1:
            return PointClass(PointKind.INTERIOR)
        if m >= precision_cap:
            raise ValueError(f"could not separate {p!r} from the boundary within {precision_cap} digits")
        m = min(2 * m, precision_cap)


def identify_edge(p: SquarePoint) -> SquarePoint:
    """The glued partner of a point in the interior of an edge segment."""
    cls = classify_point(p)
    if cls.is_removed:
        raise RemovedPointError(f"{p!r} is a removed point ({cls.reason.value})")
    if cls.kind is not PointKind.EDGE_INTERIOR:
        raise ValueError(f"{p!r} is not in the interior of a glued segment ({cls.kind.value})")
    return cls.partner


def canonical_rep(p: SquarePoint) -> SquarePoint:
    """The representative of ``p``'s surface point in ``[0, 1) x [0, 1)``."""
    cls = classify_point(p)
    if cls.is_removed:
        raise RemovedPointError(f"{p!r} is a removed point ({cls.reason.value})")
    if cls.kind is PointKind.EDGE_INTERIOR and cls.edge.side == 1:
        return cls.partner
    return p


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceBound:
    """Certified bounds ``lower <= d_X(p, q) <= upper`` in the flat metric.

    ``upper`` is ``None`` when unknown.  ``lower = 0`` means inconclusive, not
    equality.  An empty minimum is represented with both bounds infinite.
    """

    lower: Union[Fraction, float]
    upper: Union[Fraction, float, None]
    depth: int

    @classmethod
    def infinite(cls, depth: int = 0) -> "DistanceBound":
        return cls(INFINITY, INFINITY, depth)

    @property
    def inconclusive(self) -> bool:
        return self.lower <= 0

    def to_dict(self) -> dict:
        from .dyadic import rational_to_json
        return {"lower": rational_to_json(self.lower),
                "upper": None if self.upper is None else rational_to_json(self.upper),
                "depth": self.depth}

    @classmethod
    def from_dict(cls, d: dict) -> "DistanceBound":
        from .dyadic import rational_from_json
        up = d["upper"]
        return cls(rational_from_json(d["lower"]),
                   None if up is None else rational_from_json(up), d["depth"])


def _box_boundary_lower(b: Box) -> Fraction:
    return max(Fraction(0), min(b.x_lo, 1 - b.x_hi, b.y_lo, 1 - b.y_hi))


def boundary_distance(p: Union[SquarePoint, Box], precision: int = 128) -> Interval:
    """``min(x, 1-x, y, 1-y)`` for an interior point, as an exact interval."""
    b = Box.of(p, precision)
    lo = _box_boundary_lower(b)
    hi = min(b.x_hi, 1 - b.x_lo, b.y_hi, 1 - b.y_lo)
    return Interval(lo, hi)


def _gap(a_lo, a_hi, b_lo, b_hi) -> Fraction:
    return max(Fraction(0), b_lo - a_hi, a_lo - b_hi)


def _spread(a_lo, a_hi, b_lo, b_hi) -> Fraction:
    return max(abs(b_hi - a_lo), abs(a_hi - b_lo))


_HALF_POWERS = [2.0 ** -(k + 1) for k in range(DEFAULT_K_MAX + 1)]


def _one_crossing_upper(p: SquarePoint, q: SquarePoint, best: Fraction,
                        k_max: int) -> Fraction:
    """Shorten the upper bound with straight paths crossing one glued segment.

    A path leaving through segment ``e`` and re-entering through its partner
    has the length of the straight segment from ``p`` to ``q`` translated by
    minus the gluing vector, provided that segment crosses the interior of
    ``e``.  Candidates are found in floating point and confirmed exactly.
    """
    px, py, qx, qy = p.x, p.y, q.x, q.y
    # work in coordinates where the exit side is y = 0 or y = 1
    for family in ("I", "J"):
        a0, b0, a1, b1 = (px, py, qx, qy) if family == "I" else (py, px, qy, qx)
        fa0, fb0, fa1, fb1 = float(a0), float(b0), float(a1), float(b1)
        for side in (0, 1):
            across = (b0 + 1 - b1) if side == 0 else (b1 + 1 - b0)
            if across >= best:
                continue
            sign = 1 if side == 0 else -1
            # copy of q: along-coordinate a1 + sign*(1 - 3L), across-coordinate b1 - sign
            fs = (side - fb0) / (fb1 - sign - fb0)
            for k in range(min(k_max, len(_HALF_POWERS) - 1) + 1):
                L = _HALF_POWERS[k]
                c = fa0 + fs * (fa1 + sign * (1 - 3 * L) - fa0)
                lo, hi = (1 - 2 * L, 1 - L) if side == 0 else (L, 2 * L)
                if not (lo - 1e-9 < c < hi + 1e-9):
                    continue
                e = EdgeSegment(family, k, side)
                elo, ehi = e.span
                ta = a1 + sign * (1 - 3 * e.length)
                tb = b1 - sign
                s = (side - b0) / (tb - b0)
                c_ex = a0 + s * (ta - a0)
                if elo < c_ex < ehi:
                    best = min(best, abs(a0 - ta) + abs(b0 - tb))
    return best


def distance_lower_bound(p: Union[SquarePoint, Box], q: Union[SquarePoint, Box],
                         depth: int = 1, precision: int = 128,
                         k_max: int = DEFAULT_K_MAX) -> DistanceBound:
    """Certified bounds on the surface distance between two interior points.

    A path from ``p`` to ``q`` either stays in the open square, and is at
    least as long as the straight segment, or it reaches the boundary from
    ``p`` and comes back from the boundary to ``q``.  The lower bound is the
    minimum of the coordinate-difference bound ``max(|dx|, |dy|)`` on the
    straight segment and ``d(p, boundary) + d(q, boundary)``.

    Depth ``d >= 1`` unfolds through one glued segment (for exact points),
    which can only shorten the upper bound: every route that crosses the
    boundary is already bounded below by the exit term.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    exact_pair = isinstance(p, SquarePoint) and isinstance(q, SquarePoint) and p.is_exact and q.is_exact
    if exact_pair:
        for r in (p, q):
            if classify_point(r).kind is not PointKind.INTERIOR:
                raise ValueError(f"{r!r} is not an interior point")
        if p == q:
            raise ValueError("distance bounds need two distinct points")
    bp, bq = Box.of(p, precision), Box.of(q, precision)
    gx = _gap(bp.x_lo, bp.x_hi, bq.x_lo, bq.x_hi)
    gy = _gap(bp.y_lo, bp.y_hi, bq.y_lo, bq.y_hi)
    direct = max(gx, gy)
    exit_ = _box_boundary_lower(bp) + _box_boundary_lower(bq)
    lower = min(direct, exit_)
    upper = (_spread(bp.x_lo, bp.x_hi, bq.x_lo, bq.x_hi)
             + _spread(bp.y_lo, bp.y_hi, bq.y_lo, bq.y_hi))
    if depth >= 1 and exact_pair:
        upper = _one_crossing_upper(p, q, upper, k_max)
    return DistanceBound(lower, upper, depth)


def euclidean_distance(p: SquarePoint, q: SquarePoint) -> float:
    return math.hypot(float(p.x - q.x), float(p.y - q.y))


__all__ = [
    "Box", "Coordinate", "DistanceBound", "EdgeSegment", "Interval", "PointClass",
    "PointKind", "RemovalReason", "RemovedPointError", "SquarePoint",
    "boundary_distance", "canonical_rep", "classify_point", "distance_lower_bound",
    "edges", "euclidean_distance", "identify_edge", "DyadicRational",
]
