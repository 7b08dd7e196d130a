"""Discrete orbits of ``phi`` and the punctured surface they produce.

A special point has coordinates ``x = 1 - sum 2^-a_n`` and ``y = sum 2^-b_n``
for sparse exponent sequences ``a`` and ``b``.  Its orbit has a closed form
in digits::

    phi^n(x, y)  = ([1-y_n, ..., 1-y_1] + x,  y shifted by n)
    phi^-n(x, y) = (x shifted by n,  [1-x_n, ..., 1-x_1] + y)

The second line is the first conjugated by the coordinate swap.  Far along
the forward orbit, the first ``t`` digits of ``x`` hold at most one zero and
those of ``y`` at most one one.  So late orbit points cluster near
``(1 - 2^-j, 0)`` or near ``(1, 2^-j)``.  All of these are removed points.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .dyadic import (DigitStream, SparseExponentSequence, is_dyadic, prefix_then,
                     rational_from_json, rational_to_json, same_stream, shift_of,
                     sparse_complement_digits, sparse_sum_digits, stream_of,
                     verify_divergence, RationalStream)
from .dynamics import PHI, AffineMapDescriptor, InconclusiveError, iterate, phi_digits
from .surface import (Box, DistanceBound, PointKind, SquarePoint, classify_point,
                      distance_lower_bound)

DEFAULT_N = 50
DEFAULT_PRECISION = 128
DEFAULT_DEPTH = 1
DEFAULT_TOL_EXPONENT = 20
DIVERGENCE_CHECKPOINTS = (2, 4, 8, 16, 32)
MEMBERSHIP_PRECISION_CAP = 1024


# ---------------------------------------------------------------------------
# Special points and their orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpecialPoint:
    """``(1 - sum 2^-a_n, sum 2^-b_n)`` for sparse sequences ``a = x_seq``, ``b = y_seq``."""

    x_seq: SparseExponentSequence
    y_seq: SparseExponentSequence
    x: DigitStream = field(compare=False)
    y: DigitStream = field(compare=False)

    @property
    def point(self) -> SquarePoint:
        return SquarePoint(self.x, self.y)

    def image_is_sparse_describable(self, n: int) -> bool:
        """Whether ``phi^n`` of this point is a finite prefix/shift over the same two streams."""
        x, y = orbit_point(self.point, n)
        bases = {id(self.x), id(self.y)}
        return id(x.canonical()[0]) in bases and id(y.canonical()[0]) in bases


def make_special_point(x_seq: SparseExponentSequence, y_seq: SparseExponentSequence,
                       checkpoints: Iterable[int] = DIVERGENCE_CHECKPOINTS,
                       horizon_margin: int = 32) -> SpecialPoint:
    """Build the special point of two sequences after spot-checking their divergence.

    Each sequence must satisfy ``s_{n+1} - s_n >= M`` on
    ``[N(M), N(M) + horizon_margin]`` for every checkpoint ``M``.
    """
    for label, seq in (("x", x_seq), ("y", y_seq)):
        for M in checkpoints:
            N = seq.witness(M)
            check = verify_divergence(seq, M, N + horizon_margin)
            if not check:
                raise ValueError(f"{label} sequence {seq.name} fails the divergence check "
                                 f"for M={M} at index {check.violating_index}")
    return SpecialPoint(x_seq, y_seq, sparse_complement_digits(x_seq), sparse_sum_digits(y_seq))


def _complement_reversed(s: DigitStream, n: int) -> bytes:
    return bytes(1 - d for d in reversed(s.digits(n)))


def forward_orbit_digits(zeta: Union[SpecialPoint, SquarePoint], n: int) -> tuple[DigitStream, DigitStream]:
    """``phi^n`` of a stream point in closed form, ``n >= 0``."""
    if n < 0:
        raise ValueError("use backward_orbit_digits for negative indices")
    x, y = (zeta.x, zeta.y)
    if n == 0:
        return x, y
    return prefix_then(_complement_reversed(y, n), x), shift_of(y, n)


def backward_orbit_digits(zeta: Union[SpecialPoint, SquarePoint], n: int) -> tuple[DigitStream, DigitStream]:
    """``phi^-n`` through the swap conjugation: swap, go forward ``n`` steps, swap back."""
    swapped = SquarePoint(zeta.y, zeta.x)
    a, b = forward_orbit_digits(swapped, n)
    return b, a


def orbit_point(zeta: Union[SpecialPoint, SquarePoint], n: int) -> tuple[DigitStream, DigitStream]:
    return forward_orbit_digits(zeta, n) if n >= 0 else backward_orbit_digits(zeta, -n)


# ---------------------------------------------------------------------------
# Separation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitEntry:
    n: int
    x_digits: str
    y_digits: str

    @property
    def box(self) -> Box:
        return Box.from_digits(self.x_digits, self.y_digits)

    def to_dict(self) -> dict:
        return {"n": self.n, "x": self.x_digits, "y": self.y_digits, "truncated": True}

    @classmethod
    def from_dict(cls, d: dict) -> "OrbitEntry":
        return cls(d["n"], d["x"], d["y"])


def orbit_entries(zeta, n_min: int, n_max: int, precision: int) -> tuple[OrbitEntry, ...]:
    out = []
    for n in range(n_min, n_max + 1):
        x, y = orbit_point(zeta, n)
        out.append(OrbitEntry(n, x.digit_string(precision), y.digit_string(precision)))
    return tuple(out)


@dataclass(frozen=True)
class OrbitReport:
    """Certified pairwise separation of an orbit window."""

    n_min: int
    n_max: int
    precision: int
    depth: int
    orbit: tuple[OrbitEntry, ...]
    min_separation: DistanceBound
    min_pair: Optional[tuple[int, int]]
    inconclusive_pairs: tuple[tuple[int, int], ...]

    @property
    def certified(self) -> bool:
        return not self.inconclusive_pairs and self.min_separation.lower > 0

    def to_dict(self) -> dict:
        return {
            "kind": "orbit_report",
            "n_min": self.n_min, "n_max": self.n_max,
            "precision": self.precision, "depth": self.depth,
            "orbit": [e.to_dict() for e in self.orbit],
            "min_separation": self.min_separation.to_dict(),
            "min_pair": list(self.min_pair) if self.min_pair else None,
            "inconclusive_pairs": [list(p) for p in self.inconclusive_pairs],
            "certified": self.certified,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OrbitReport":
        return cls(d["n_min"], d["n_max"], d["precision"], d["depth"],
                   tuple(OrbitEntry.from_dict(e) for e in d["orbit"]),
                   DistanceBound.from_dict(d["min_separation"]),
                   tuple(d["min_pair"]) if d["min_pair"] else None,
                   tuple(tuple(p) for p in d["inconclusive_pairs"]))


def _row_minimum(i: int, boxes: Sequence[Box], depth: int):
    best = None
    bad = []
    for j in range(i + 1, len(boxes)):
        d = distance_lower_bound(boxes[i], boxes[j], depth)
        if d.inconclusive:
            bad.append(j)
        if best is None or d.lower < best[0].lower:
            best = (d, j)
    return best, bad


def certified_separation(zeta: Union[SpecialPoint, SquarePoint], n_min: int, n_max: int,
                         precision: int = DEFAULT_PRECISION, depth: int = DEFAULT_DEPTH,
                         workers: int = 1) -> OrbitReport:
    """Pairwise certified lower bounds on the surface distance within an orbit window.

    Each orbit point is replaced by its dyadic box of side ``2^-precision``;
    a pair is inconclusive when its lower bound is zero.  The result does not
    depend on ``workers``.
    """
    if n_min > n_max:
        raise ValueError("empty orbit window")
    entries = orbit_entries(zeta, n_min, n_max, precision)
    boxes = [e.box for e in entries]
    rows = range(len(boxes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _row_minimum(i, boxes, depth), rows))
    else:
        results = [_row_minimum(i, boxes, depth) for i in rows]
    best, pair, bad = None, None, []
    for i, (row_best, row_bad) in enumerate(results):
        bad.extend((entries[i].n, entries[j].n) for j in row_bad)
        if row_best is not None and (best is None or row_best[0].lower < best.lower):
            best, pair = row_best[0], (entries[i].n, entries[row_best[1]].n)
    if best is None:
        best = DistanceBound.infinite(depth)
    return OrbitReport(n_min, n_max, precision, depth, entries, best, pair, tuple(bad))


# ---------------------------------------------------------------------------
# Accumulation
# ---------------------------------------------------------------------------

class CandidateForm(enum.Enum):
    """Removed points approached by late orbit points; ``j = None`` means ``j = infinity``."""

    BOTTOM = "(1-2^-j,0)"
    RIGHT = "(1,2^-j)"
    LEFT = "(0,1-2^-j)"
    TOP = "(2^-j,1)"

    def point(self, j: Optional[int]) -> tuple[Fraction, Fraction]:
        p = Fraction(0) if j is None else Fraction(1, 1 << j)
        return {
            CandidateForm.BOTTOM: (1 - p, Fraction(0)),
            CandidateForm.RIGHT: (Fraction(1), p),
            CandidateForm.LEFT: (Fraction(0), 1 - p),
            CandidateForm.TOP: (p, Fraction(1)),
        }[self]


FORWARD_FAMILY = (CandidateForm.BOTTOM, CandidateForm.RIGHT)
SWAPPED_FAMILY = (CandidateForm.LEFT, CandidateForm.TOP)
ALL_FORMS = tuple(CandidateForm)


def _floor_log2_inv(u: Fraction) -> int:
    """``floor(log2(1/u))`` for ``0 < u <= 1``."""
    a, b = u.denominator, u.numerator
    k = a.bit_length() - b.bit_length()
    if (b << k) > a:
        k -= 1
    return k


def _residual(box: Box, c: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    """Lower and upper bounds on the sup-norm distance from a box to a point."""
    cx, cy = c
    up = max(abs(box.x_lo - cx), abs(box.x_hi - cx), abs(box.y_lo - cy), abs(box.y_hi - cy))

    def gap(lo, hi, v):
        return max(Fraction(0), lo - v, v - hi)
    lo = max(gap(box.x_lo, box.x_hi, cx), gap(box.y_lo, box.y_hi, cy))
    return lo, up


def nearest_candidate(box: Box, family: Sequence[CandidateForm], j_max: int):
    """The closest candidate ``(form, j)`` by residual upper bound; ties go to smaller ``j``.

    ``j`` ranges over ``0..j_max`` and infinity; the point at ``j = infinity``
    is shared by two forms and reported under the first of them.
    """
    options = []
    seen_points = set()
    for order, form in enumerate(family):
        if form in (CandidateForm.BOTTOM, CandidateForm.LEFT):
            along = box.x_lo if form is CandidateForm.BOTTOM else box.y_lo
            u = 1 - along
        else:
            u = box.y_lo if form is CandidateForm.RIGHT else box.x_lo
        js: set[Optional[int]] = {None}
        if u > 0:
            j0 = min(_floor_log2_inv(min(u, Fraction(1))), j_max)
            js.update(j for j in (j0 - 1, j0, j0 + 1) if 0 <= j <= j_max)
        else:
            js.add(j_max)
        for j in js:
            c = form.point(j)
            if c in seen_points:
                continue
            seen_points.add(c)
            lo, up = _residual(box, c)
            key = (up, float("inf") if j is None else j, order)
            options.append((key, form, j, c, lo, up))
    options.sort(key=lambda o: o[0])
    _, form, j, c, lo, up = options[0]
    return form, j, c, lo, up


def k_statistic(x_prefix: str, y_prefix: str) -> int:
    """Zero digits of ``x`` plus one digits of ``y`` over the given prefixes."""
    return x_prefix.count("0") + y_prefix.count("1")


def _common_prefix(strings: Sequence[str]) -> str:
    first = strings[0]
    n = len(first)
    for s in strings[1:]:
        i = 0
        while i < n and i < len(s) and s[i] == first[i]:
            i += 1
        n = i
    return first[:n]


@dataclass(frozen=True)
class Cluster:
    """Orbit points within the tolerance of a leader, fitted to the nearest candidate.

    ``residual`` bounds the sup-norm distance from every member to the
    candidate; ``outliers`` are the members not certified within the
    tolerance of it.  A cluster with outliers is flagged.
    """

    form: CandidateForm
    j: Optional[int]
    candidate: tuple[Fraction, Fraction]
    members: tuple[int, ...]
    residual: Fraction
    stabilized_x: str
    stabilized_y: str
    k_statistic: int
    outliers: tuple[int, ...] = ()

    @property
    def flagged(self) -> bool:
        return bool(self.outliers)

    def to_dict(self) -> dict:
        return {
            "form": self.form.value,
            "j": "inf" if self.j is None else self.j,
            "candidate": [rational_to_json(c) for c in self.candidate],
            "members": list(self.members),
            "residual": rational_to_json(self.residual),
            "stabilized_x": self.stabilized_x,
            "stabilized_y": self.stabilized_y,
            "k_statistic": self.k_statistic,
            "outliers": list(self.outliers),
            "flagged": self.flagged,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Cluster":
        return cls(CandidateForm(d["form"]), None if d["j"] == "inf" else d["j"],
                   tuple(rational_from_json(c) for c in d["candidate"]),
                   tuple(d["members"]), rational_from_json(d["residual"]),
                   d["stabilized_x"], d["stabilized_y"], d["k_statistic"], tuple(d["outliers"]))


@dataclass(frozen=True)
class AccumulationReport:
    """Clusters of an orbit window around removed points, fitted to a candidate family.

    Beyond ``horizon`` the divergence witness guarantees that the first
    ``t`` digits of every orbit point hold at most one exceptional digit, so
    an outlier or an unclustered point past the horizon is a violation.  Flagged clusters whose
    outliers all precede it are finite-horizon artifacts.
    """

    direction: str
    tol_exponent: int
    precision: int
    n_max: int
    family: tuple[CandidateForm, ...]
    clusters: tuple[Cluster, ...]
    unclustered: tuple[tuple[int, int], ...]
    horizon: Optional[int]

    def _late(self, indices: Iterable[int]) -> list[int]:
        if self.horizon is None:
            return []
        return [n for n in indices if n >= self.horizon]

    @property
    def late_clusters(self) -> tuple[Cluster, ...]:
        return tuple(c for c in self.clusters if self._late(c.members))

    @property
    def finite_horizon_artifacts(self) -> tuple[Cluster, ...]:
        return tuple(c for c in self.clusters if c.flagged and not self._late(c.outliers))

    @property
    def late_unclustered(self) -> tuple[tuple[int, int], ...]:
        return tuple(u for u in self.unclustered if self._late([u[0]]))

    @property
    def violations(self) -> list[str]:
        out = [f"orbit index {n} is near no removed point (K = {K})"
               for n, K in self.late_unclustered]
        for c in self.late_clusters:
            late = self._late(c.outliers)
            if late:
                out.append(f"orbit indices {late}: not within 2^-{self.tol_exponent} "
                           f"of {c.form.value} j={'inf' if c.j is None else c.j}")
            if c.k_statistic > 1:
                out.append(f"cluster {list(c.members)}: K = {c.k_statistic}")
        return out

    def to_dict(self) -> dict:
        return {
            "kind": "accumulation_report",
            "direction": self.direction,
            "tol_exponent": self.tol_exponent,
            "precision": self.precision,
            "n_max": self.n_max,
            "family": [f.value for f in self.family],
            "clusters": [c.to_dict() for c in self.clusters],
            "unclustered": [list(u) for u in self.unclustered],
            "horizon": self.horizon,
            "finite_horizon_artifacts": [c.members[0] for c in self.finite_horizon_artifacts],
            "violations": self.violations,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AccumulationReport":
        return cls(d["direction"], d["tol_exponent"], d["precision"], d["n_max"],
                   tuple(CandidateForm(f) for f in d["family"]),
                   tuple(Cluster.from_dict(c) for c in d["clusters"]),
                   tuple(tuple(u) for u in d["unclustered"]), d["horizon"])


def tol_exponent(tol) -> int:
    """``t`` with ``tol = 2^-t``."""
    tol = Fraction(tol)
    if tol.numerator != 1 or not is_dyadic(tol):
        raise ValueError(f"tolerance {tol} is not of the form 2^-t")
    return tol.denominator.bit_length() - 1


def _within(p: SquarePoint, tol: Fraction, m: int, measure) -> bool:
    """Decide ``measure(p) <= tol``, refining the box of ``p`` until the bounds separate."""
    prec = m
    while True:
        lo, up = measure(Box.of(p, prec))
        if up <= tol:
            return True
        if lo > tol or prec >= MEMBERSHIP_PRECISION_CAP:
            return False
        prec *= 2


def cluster_points(points: Sequence[tuple[int, SquarePoint]], t: int,
                   precision: Optional[int] = None,
                   family: Sequence[CandidateForm] = FORWARD_FAMILY
                   ) -> tuple[list[Cluster], list[tuple[int, int]]]:
    """Group points around removed points, then fit each group to ``family``.

    Candidates are resolved up to ``j = t``: beyond that they lie within the
    tolerance of the ``j = infinity`` point.  A point joins the group of its
    nearest removed point (any boundary form) when it is certified within
    ``2^-t`` of it; boxes are refined until the
    comparison is decided.  Each group is then fitted to the nearest
    candidate of ``family``; members not certified within the tolerance of
    that candidate are outliers.  The K statistic is taken over the first
    ``t`` digits common to all members.  Returns the clusters and the
    ``(n, K)`` pairs of points near no removed point.
    """
    if t < 4:
        raise ValueError("tolerance must be at most 2^-4")
    m = precision or max(64, 3 * t)
    tol = Fraction(1, 1 << t)
    groups: dict = {}
    unclustered = []
    for n, p in points:
        prec = m
        while True:
            form, j, c, lo, up = nearest_candidate(Box.of(p, prec), ALL_FORMS, t)
            if up <= tol or lo > tol or prec >= MEMBERSHIP_PRECISION_CAP:
                break
            prec *= 2
        if up <= tol:
            groups.setdefault(c, []).append((n, p))
        else:
            xs, ys = stream_of(p.x).digit_string(t), stream_of(p.y).digit_string(t)
            unclustered.append((n, k_statistic(xs, ys)))
    clusters = []
    for anchor, g in groups.items():
        boxes = [Box.of(p, m) for _, p in g]
        form, j, c, _, _ = nearest_candidate(Box(anchor[0], anchor[0], anchor[1], anchor[1]),
                                             family, t)
        residual = max(_residual(b, c)[1] for b in boxes)
        outliers = tuple(n for n, p in g
                         if not _within(p, tol, m, lambda box: _residual(box, c)))
        sx = _common_prefix([stream_of(p.x).digit_string(t) for _, p in g])
        sy = _common_prefix([stream_of(p.y).digit_string(t) for _, p in g])
        clusters.append(Cluster(form, j, c, tuple(n for n, _ in g), residual, sx, sy,
                                k_statistic(sx, sy), outliers))
    clusters.sort(key=lambda cl: cl.members[0])
    return clusters, unclustered


def accumulation_horizon(seq: SparseExponentSequence, t: int) -> int:
    """Index beyond which every orbit point has ``K <= 1`` over its first ``t`` digits.

    The first ``t`` digits of both coordinates of ``phi^n`` read the sequence
    in the window ``[n-t+1, n+t]``.  Once gaps are at least ``2t`` (from index
    ``N = N(2t)`` on) and ``n >= s_{N-1} + t``, the window holds at most one term.
    """
    N = seq.witness(2 * t)
    return max(t, (seq[N - 1] if N > 1 else 0) + t)


def accumulation_clusters(zeta: SpecialPoint, n_max: int, tol=Fraction(1, 1 << DEFAULT_TOL_EXPONENT),
                          precision: Optional[int] = None, direction: str = "forward",
                          family: Sequence[CandidateForm] = FORWARD_FAMILY) -> AccumulationReport:
    """Cluster ``phi^n(zeta)`` (or ``phi^-n(zeta)``) for ``0 <= n <= n_max`` around removed points.

    The default candidates are ``(1 - 2^-j, 0)`` and ``(1, 2^-j)`` with ``j``
    in ``N u {infinity}``.  Backward orbits are computed through the swap
    conjugation; their late points read ``x`` where forward points read
    ``y``, and land near the same candidates.
    """
    t = tol_exponent(tol)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if direction == "forward":
        pts = [(n, SquarePoint(*forward_orbit_digits(zeta, n))) for n in range(n_max + 1)]
        seq = zeta.y_seq
    elif direction == "backward":
        pts = [(n, SquarePoint(*backward_orbit_digits(zeta, n))) for n in range(n_max + 1)]
        seq = zeta.x_seq
    else:
        raise ValueError("direction is 'forward' or 'backward'")
    m = precision or max(64, 3 * t)
    clusters, unclustered = cluster_points(pts, t, m, family)
    return AccumulationReport(direction, t, m, n_max, tuple(family), tuple(clusters),
                              tuple(unclustered), accumulation_horizon(seq, t))


# ---------------------------------------------------------------------------
# Stabilizer proxy and the punctured surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProxyCertificate:
    """For each period ``p``, a position ``i`` with ``y_i != y_{i+p}`` (or ``None``)."""

    N: int
    witnesses: dict
    search_horizon: int

    @property
    def failures(self) -> list[int]:
        return [p for p, w in self.witnesses.items() if w is None]

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed


def stabilizer_proxy_check(zeta: Union[SpecialPoint, SquarePoint], N: int,
                           digit_budget: int = 4096) -> ProxyCertificate:
    """Certify that ``phi^n(zeta) != zeta`` for ``0 < |n| <= N``.

    The second coordinate of ``phi^n(zeta)`` is ``y`` shifted by ``n``, so a
    fixed point needs ``y_{i+n} = y_i`` for all ``i``.  A position breaking
    this is recorded for every period.  For special points the search
    horizon comes from the divergence witness: past ``s_{N(N+1)}`` the gaps
    exceed ``N`` and the next one of ``y`` has no partner ``p`` places later.
    For rational ``y`` the horizon is its preperiod plus period, which is
    exact.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if isinstance(zeta, SpecialPoint):
        y = zeta.y
        seq = zeta.y_seq
        horizon = seq[seq.witness(N + 1)] + N
    else:
        y = stream_of(zeta.y)
        if isinstance(y, RationalStream):
            pre, per = y.preperiod_and_period()
            horizon = pre + per + N
        else:
            horizon = digit_budget
    digits = y.digits(horizon + N)
    witnesses = {}
    for p in range(1, N + 1):
        witnesses[p] = next(((i, digits[i - 1], digits[i + p - 1])
                             for i in range(1, horizon + 1) if digits[i - 1] != digits[i + p - 1]), None)
    return ProxyCertificate(N, witnesses, horizon)


@dataclass(frozen=True)
class Puncture:
    n: int
    x_digits: str
    y_digits: str
    radius: Fraction


@dataclass(frozen=True)
class PuncturedSurfaceDescription:
    """The Chamanara surface with a window of the orbit of ``zeta`` removed."""

    base: str
    generator: AffineMapDescriptor
    punctures: tuple[Puncture, ...]
    separation: DistanceBound
    shift_invariant: bool

    def apply_generator(self) -> list[int]:
        """Indices of the puncture list after applying ``phi`` (each shifts by one)."""
        return [p.n + 1 for p in self.punctures]


def build_punctured_surface(zeta: SpecialPoint, N: int = DEFAULT_N,
                            precision: int = DEFAULT_PRECISION,
                            depth: int = DEFAULT_DEPTH) -> PuncturedSurfaceDescription:
    """Remove ``phi^n(zeta)`` for ``|n| <= N`` with certified disjoint neighbourhoods.

    Every puncture gets radius half the certified minimum separation.  The
    generator check applies the digit rule to puncture ``n`` and confirms it
    is, as a stream description, exactly puncture ``n + 1``.
    """
    proxy = stabilizer_proxy_check(zeta, N)
    if not proxy:
        raise ValueError(f"stabilizer proxy failed for periods {proxy.failures}")
    report = certified_separation(zeta, -N, N, precision, depth)
    if not report.certified:
        raise InconclusiveError(f"{len(report.inconclusive_pairs)} inconclusive pairs; "
                                "raise the precision")
    radius = report.min_separation.lower / 2
    punctures = tuple(Puncture(e.n, e.x_digits, e.y_digits, radius) for e in report.orbit)
    invariant = True
    for n in range(-N, N):
        x, y = orbit_point(zeta, n)
        fx, fy = phi_digits(x, y)
        nx, ny = orbit_point(zeta, n + 1)
        if not (same_stream(fx, nx) is True and same_stream(fy, ny) is True):
            invariant = False
            break
    return PuncturedSurfaceDescription("chamanara", PHI, punctures, report.min_separation, invariant)


__all__ = [
    "AccumulationReport", "CandidateForm", "Cluster", "FORWARD_FAMILY", "OrbitEntry",
    "OrbitReport", "ProxyCertificate", "Puncture", "PuncturedSurfaceDescription",
    "SWAPPED_FAMILY", "SpecialPoint", "accumulation_clusters", "accumulation_horizon",
    "backward_orbit_digits", "build_punctured_surface", "certified_separation",
    "cluster_points", "forward_orbit_digits", "k_statistic", "make_special_point",
    "nearest_candidate", "orbit_entries", "orbit_point", "stabilizer_proxy_check",
    "tol_exponent", "iterate", "classify_point", "PointKind",
]
