"""The affine automorphism ``phi`` of the Chamanara surface and its relatives.

On canonical representatives ``(x, y)`` in ``[0, 1) x [0, 1)``::

    phi(x, y) = (x/2 + 1/2, 2y)        if y <  1/2
              = (x/2,       2y - 1)    if y >= 1/2

with derivative ``diag(1/2, 2)``.  On binary expansions this is the
baker-type rule ``x' = [1 - y_1, x_1, x_2, ...]``, ``y' = [y_2, y_3, ...]``.
The coordinate swap ``tau`` conjugates ``phi`` to its inverse.

Exact points go through the case formula, stream points through the digit
rule; the two agree wherever both apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .dyadic import DigitStream, prefix_then, shift_of, stream_of
from .surface import (DistanceBound, PointKind, RemovedPointError, SquarePoint,
                      canonical_rep, classify_point, distance_lower_bound)

HALF = Fraction(1, 2)
PERIODIC_CAP = 20

Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class AffineMapDescriptor:
    """Name and derivative of one of the maps ``phi**n`` or ``tau``."""

    name: str
    derivative: Matrix
    power: int = 0

    @property
    def determinant(self) -> Fraction:
        (a, b), (c, d) = self.derivative
        return a * d - b * c

    @property
    def trace(self) -> Fraction:
        return self.derivative[0][0] + self.derivative[1][1]

    @property
    def is_hyperbolic(self) -> bool:
        return self.determinant == 1 and abs(self.trace) > 2

    def apply_derivative(self, dx: Fraction, dy: Fraction) -> tuple[Fraction, Fraction]:
        (a, b), (c, d) = self.derivative
        return a * dx + b * dy, c * dx + d * dy

    def __call__(self, p: SquarePoint) -> SquarePoint:
        if self.name == "tau":
            return tau(p)
        return iterate(p, min(0, self.power), max(0, self.power))[0 if self.power < 0 else -1]


def phi_power(n: int) -> AffineMapDescriptor:
    f = Fraction(2) ** -n
    name = {1: "phi", -1: "phi_inverse"}.get(n, f"phi_power({n})")
    return AffineMapDescriptor(name, ((f, Fraction(0)), (Fraction(0), 1 / f)), n)


PHI = phi_power(1)
PHI_INVERSE = phi_power(-1)
TAU = AffineMapDescriptor("tau", ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))))


def _check_canonical(p: SquarePoint) -> None:
    if p.is_exact and not (0 <= p.x < 1 and 0 <= p.y < 1):
        raise ValueError(f"{p!r} is not a canonical representative in [0,1)x[0,1)")
    cls = classify_point(p)
    if cls.is_removed:
        raise RemovedPointError(f"{p!r} is a removed point ({cls.reason.value})")


def _stream_pair(p: SquarePoint) -> tuple[DigitStream, DigitStream]:
    x, y = stream_of(p.x), stream_of(p.y)
    for s in (x, y):
        if s.eventually_constant:
            raise ValueError("the digit rule needs non-terminating expansions; "
                             "use the exact formula for dyadic coordinates")
    return x, y


def phi_digits(x: DigitStream, y: DigitStream) -> tuple[DigitStream, DigitStream]:
    """One step of the digit rule: ``([1 - y_1] + x, y shifted by one)``."""
    if x.eventually_constant or y.eventually_constant:
        raise ValueError("the digit rule is only used on non-terminating expansions")
    return prefix_then([1 - y.digit_at(1)], x), shift_of(y, 1)


def phi(p: SquarePoint) -> SquarePoint:
    """Image of a canonical representative under ``phi``."""
    _check_canonical(p)
    if p.is_exact:
        x, y = p.x, p.y
        if y < HALF:
            return SquarePoint(x / 2 + HALF, 2 * y)
        return SquarePoint(x / 2, 2 * y - 1)
    return SquarePoint(*phi_digits(*_stream_pair(p)))


def phi_inverse(p: SquarePoint) -> SquarePoint:
    """Image under ``phi**-1``; streams use the conjugation ``tau phi tau``."""
    _check_canonical(p)
    if p.is_exact:
        x, y = p.x, p.y
        if x >= HALF:
            return SquarePoint(2 * x - 1, y / 2)
        return SquarePoint(2 * x, y / 2 + HALF)
    y, x = phi_digits(*_stream_pair(p.swapped()))
    return SquarePoint(x, y)


def tau(p: SquarePoint) -> SquarePoint:
    """The coordinate swap, followed by the canonical representative."""
    return canonical_rep(p.swapped())


def iterate(p: SquarePoint, n_min: int, n_max: int) -> list[SquarePoint]:
    """The orbit segment ``[phi**n_min(p), ..., phi**n_max(p)]``."""
    if not n_min <= 0 <= n_max:
        raise ValueError("need n_min <= 0 <= n_max")
    _check_canonical(p)
    if not p.is_exact:
        _stream_pair(p)
    forward = [p]
    for _ in range(n_max):
        q = forward[-1]
        forward.append(_phi_unchecked(q))
    backward = []
    q = p
    for _ in range(-n_min):
        q = _phi_inverse_unchecked(q)
        backward.append(q)
    return backward[::-1] + forward


def _phi_unchecked(p: SquarePoint) -> SquarePoint:
    if p.is_exact:
        return phi(p)
    return SquarePoint(*phi_digits(p.x, p.y))


def _phi_inverse_unchecked(p: SquarePoint) -> SquarePoint:
    if p.is_exact:
        return phi_inverse(p)
    y, x = phi_digits(p.y, p.x)
    return SquarePoint(x, y)


# ---------------------------------------------------------------------------
# Periodic points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicPoint:
    """A fixed point of ``phi**period`` together with its orbit."""

    x: Fraction
    y: Fraction
    period: int
    orbit: tuple[SquarePoint, ...]

    @property
    def point(self) -> SquarePoint:
        return SquarePoint(self.x, self.y)

    def to_dict(self) -> dict:
        from .dyadic import rational_to_json
        return {"period": self.period, "x": rational_to_json(self.x), "y": rational_to_json(self.y)}


def _word_value(bits: list[int]) -> Fraction:
    n = len(bits)
    return Fraction(int("".join(map(str, bits)), 2), (1 << n) - 1)


def periodic_points(n: int, cap: int = PERIODIC_CAP) -> list[PeriodicPoint]:
    """All fixed points of ``phi**n`` in the open square.

    A fixed point has ``y`` with purely periodic expansion ``w w w ...`` for
    an ``n``-bit word ``w`` and ``x`` with period word
    ``(1 - w_n, ..., 1 - w_1)``.  The constant words are excluded.  The list
    is ordered by ``y``.
    """
    if n < 1:
        raise ValueError("period must be positive")
    if n > cap:
        raise ValueError(f"period {n} exceeds the cap {cap}")
    out = []
    for w in range(1, (1 << n) - 1):
        bits = [(w >> (n - 1 - i)) & 1 for i in range(n)]
        y = _word_value(bits)
        x = _word_value([1 - b for b in reversed(bits)])
        p = SquarePoint(x, y)
        orbit = tuple(iterate(p, 0, n - 1))
        out.append(PeriodicPoint(x, y, n, orbit))
    return out


class InconclusiveError(RuntimeError):
    """A certified bound collapsed to zero at the available precision or depth."""


def verify_isolation(points: list[PeriodicPoint], depth: int = 1) -> DistanceBound:
    """Minimum certified pairwise separation of a set of periodic points.

    Returns the infinite sentinel for fewer than two points and raises
    :class:`InconclusiveError` if some pair has a zero lower bound.
    """
    pts = sorted({(q.x, q.y) for q in points})
    if len(pts) < 2:
        return DistanceBound.infinite(depth)
    best: Optional[DistanceBound] = None
    bad = []
    for a, b in combinations(pts, 2):
        d = distance_lower_bound(SquarePoint(*a), SquarePoint(*b), depth)
        if d.inconclusive:
            bad.append((a, b))
        if best is None or d.lower < best.lower:
            best = d
    if bad:
        raise InconclusiveError(f"{len(bad)} pairs have no positive separation bound, e.g. {bad[0]}")
    return best


__all__ = [
    "AffineMapDescriptor", "InconclusiveError", "PHI", "PHI_INVERSE", "PeriodicPoint",
    "TAU", "iterate", "periodic_points", "phi", "phi_digits", "phi_inverse", "phi_power",
    "tau", "verify_isolation", "PointKind",
]
