"""Acceptance checks with brute-force oracles.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in
order.  The oracles here are written independently of the library code
they test: vectorised integer versions of the case formula for ``phi``,
direct interval searches for the edge catalogue, and grid searches for
fixed points.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .dyadic import PrefixThen, RationalStream, exponential_sequence, polynomial_sequence
from .dynamics import iterate, periodic_points, phi, phi_digits, phi_inverse, tau, verify_isolation
from .orbits import (FORWARD_FAMILY, CandidateForm, accumulation_clusters,
                     build_punctured_surface, certified_separation, make_special_point,
                     stabilizer_proxy_check)
from .surface import EdgeSegment, PointKind, SquarePoint, classify_point, identify_edge

SEED = 20240607
TOL_EXPONENT = 20
BOTTOM_TOP_FAMILY = (CandidateForm.BOTTOM, CandidateForm.TOP)


@dataclass(frozen=True)
class CheckResult:
    criterion: str
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.criterion}: {self.title} ({self.seconds:.2f} s) {self.detail}"


def standard_points():
    """The two standard special points, built from ``2^n - 1`` and ``n^2``."""
    e, s = exponential_sequence(2, -1), polynomial_sequence([0, 0, 1])
    return {"2^n-1": make_special_point(e, e), "n^2": make_special_point(s, s)}


def _timed(criterion: str, title: str, fn: Callable[[], tuple[bool, str]],
           budget: Optional[float] = None) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported as such
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if budget is not None and dt >= budget:
        ok, detail = False, f"{detail}; over the {budget:g} s budget"
    return CheckResult(criterion, title, ok, detail, dt)


def _random_interior(rng: random.Random, max_exp: int = 40) -> SquarePoint:
    e = rng.randint(1, max_exp)
    d = 1 << e
    return SquarePoint(Fraction(rng.randint(1, d - 1), d), Fraction(rng.randint(1, d - 1), d))


# ---------------------------------------------------------------------------
# 1. Case formula against the digit rule
# ---------------------------------------------------------------------------

GRID_EXP = 12


def _grid_removed_mask(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    D = 1 << GRID_EXP
    ends = np.array([D - (D >> k) for k in range(GRID_EXP + 1)])
    return ((Y == 0) & np.isin(X, ends)) | ((X == 0) & np.isin(Y, ends))


def check_formula_vs_digits(sample: int = 4096) -> tuple[bool, str]:
    D = 1 << GRID_EXP
    X, Y = np.meshgrid(np.arange(D, dtype=np.int64), np.arange(D, dtype=np.int64), indexing="ij")
    keep = ~_grid_removed_mask(X, Y)
    # case formula, x' in units of 2^-13 and y' in units of 2^-12
    low = Y < D // 2
    x_case = np.where(low, X + D, X)
    y_case = np.where(low, 2 * Y, 2 * Y - D)
    # digit rule: x' = [1 - y_1, x_1, ...], y' = [y_2, y_3, ...]
    y1 = Y >> (GRID_EXP - 1)
    x_rule = ((1 - y1) << GRID_EXP) | X
    y_rule = (Y << 1) & (D - 1)
    bad = keep & ((x_case != x_rule) | (y_case != y_rule))
    n_bad = int(bad.sum())
    # the library's two code paths on a sample, with a non-terminating tail
    rng = random.Random(SEED)
    third = RationalStream(Fraction(1, 3))
    lib_bad = 0
    for _ in range(sample):
        a, b = rng.randrange(D), rng.randrange(D)
        if _grid_removed_mask(np.array(a), np.array(b)):
            continue
        p = SquarePoint(Fraction(a, D), Fraction(b, D))
        q = phi(p)
        xs = PrefixThen([(a >> (GRID_EXP - 1 - i)) & 1 for i in range(GRID_EXP)], third)
        ys = PrefixThen([(b >> (GRID_EXP - 1 - i)) & 1 for i in range(GRID_EXP)], third)
        x2, y2 = phi_digits(xs, ys)
        if x2.approx(GRID_EXP + 1).value != q.x or y2.approx(GRID_EXP - 1).value != q.y:
            lib_bad += 1
    total = int(keep.sum())
    ok = n_bad == 0 and lib_bad == 0
    return ok, f"{total} grid points, {n_bad} mismatches; library sample {sample}, {lib_bad} mismatches"


# ---------------------------------------------------------------------------
# 2. Group laws, 3. derivative
# ---------------------------------------------------------------------------

def check_group_laws(count: int = 10_000) -> tuple[bool, str]:
    rng = random.Random(SEED)
    failures = []
    for _ in range(count):
        p = _random_interior(rng)
        try:
            laws = (phi_inverse(phi(p)) == p, phi(phi_inverse(p)) == p,
                    tau(tau(p)) == p, tau(phi(tau(p))) == phi_inverse(p))
        except ValueError as exc:
            failures.append((p, str(exc)))
            continue
        if not all(laws):
            failures.append((p, laws))
    return not failures, f"{count} points, {len(failures)} failures" + (
        f", first {failures[0]}" if failures else "")


def check_derivative(count: int = 1000) -> tuple[bool, str]:
    rng = random.Random(SEED + 1)
    done = failures = 0
    while done < count:
        p = _random_interior(rng, 30)
        d = Fraction(1, 1 << rng.randint(8, 30))
        q = SquarePoint(p.x + rng.randint(-64, 64) * d, p.y + rng.randint(-64, 64) * d)
        if q == p or not (0 < q.x < 1 and 0 < q.y < 1):
            continue
        if (p.y < Fraction(1, 2)) != (q.y < Fraction(1, 2)):
            continue
        done += 1
        a, b = phi(p), phi(q)
        if (b.x - a.x, b.y - a.y) != ((q.x - p.x) / 2, 2 * (q.y - p.y)):
            failures += 1
    return failures == 0, f"{count} pairs, {failures} failures"


# ---------------------------------------------------------------------------
# 4. Periodic points
# ---------------------------------------------------------------------------

def brute_force_fixed_points(n: int) -> set[tuple[Fraction, Fraction]]:
    """Grid points ``(a, b)/(2^n - 1)`` in the open square fixed by ``n`` case-formula steps."""
    D = (1 << n) - 1
    if D < 2:
        return set()
    a, b = np.meshgrid(np.arange(1, D), np.arange(1, D), indexing="ij")
    a, b = a.ravel().astype(object), b.ravel().astype(object)
    # x carried over the denominator D * 2^n, y over D; every step halves x exactly
    X, Y = a * (1 << n), b.copy()
    half = D << (n - 1)
    for _ in range(n):
        low = 2 * Y < D
        X = np.where(low, X // 2 + half, X // 2)
        Y = np.where(low, 2 * Y, 2 * Y - D)
    fixed = (X == a * (1 << n)) & (Y == b)
    return {(Fraction(int(u), D), Fraction(int(v), D)) for u, v in zip(a[fixed], b[fixed])}


EXPECTED_COUNTS = {1: 0, 2: 2, 3: 6, 4: 14, 5: 30, 6: 62, 7: 126, 8: 254}


def check_periodic_points(n_max: int = 8) -> tuple[bool, str]:
    parts, ok = [], True
    for n in range(1, n_max + 1):
        oracle = brute_force_fixed_points(n)
        got = {(q.x, q.y) for q in periodic_points(n)}
        bound = verify_isolation(periodic_points(n))
        same = got == oracle and len(oracle) == EXPECTED_COUNTS[n]
        ok &= same and bound.lower > 0
        parts.append(f"n={n}:{len(oracle)}{'' if same else '!'}")
    return ok, " ".join(parts)


# ---------------------------------------------------------------------------
# 5. Gluing
# ---------------------------------------------------------------------------

def oracle_boundary_class(x: Fraction, y: Fraction):
    """``None`` for removed points, else ``(family, k, side)``, by interval search."""
    if (x, y) in ((0, 1), (1, 0)):
        return None
    if y in (0, 1):
        u, family, side = x, "I", int(y)
    elif x in (0, 1):
        u, family, side = y, "J", int(x)
    else:
        raise ValueError("not a boundary point")
    for k in range(64):
        lo, hi = ((1 - Fraction(1, 2 ** k), 1 - Fraction(1, 2 ** (k + 1))) if side == 0
                  else (Fraction(1, 2 ** (k + 1)), Fraction(1, 2 ** k)))
        if u in (lo, hi):
            return None
        if lo < u < hi:
            return family, k, side
    return None


def check_gluing(k_max: int = 12, samples: int = 63) -> tuple[bool, str]:
    problems = []
    checked = 0
    for k in range(k_max + 1):
        for family in ("I", "J"):
            for side in (0, 1):
                e = EdgeSegment(family, k, side)
                lo, _ = e.span
                step = e.length / (samples + 1)
                pts = []
                for j in range(1, samples + 1):
                    u = lo + j * step
                    x, y = ((u, Fraction(side)) if family == "I" else (Fraction(side), u))
                    pts.append(SquarePoint(x, y))
                images = [identify_edge(p) for p in pts]
                for p, q in zip(pts, images):
                    checked += 1
                    if identify_edge(q) != p:
                        problems.append(("involution", p))
                    cq = classify_point(q)
                    if cq.kind is not PointKind.EDGE_INTERIOR or cq.edge != e.partner:
                        problems.append(("partner edge", p))
                sub = list(zip(pts, images))[::4]
                for (p1, q1) in sub:
                    for (p2, q2) in sub:
                        if abs(p1.x - p2.x) + abs(p1.y - p2.y) != abs(q1.x - q2.x) + abs(q1.y - q2.y):
                            problems.append(("isometry", p1, p2))
    D = 1 << GRID_EXP
    mismatched = 0
    boundary = set()
    for i in range(D + 1):
        u = Fraction(i, D)
        boundary.update({(u, Fraction(0)), (u, Fraction(1)), (Fraction(0), u), (Fraction(1), u)})
    for x, y in boundary:
        expected = oracle_boundary_class(x, y)
        c = classify_point(SquarePoint(x, y))
        got = None if c.kind is PointKind.REMOVED else (c.edge.family, c.edge.k, c.edge.side)
        if c.kind is PointKind.INTERIOR or got != expected:
            mismatched += 1
    ok = not problems and mismatched == 0
    return ok, (f"{checked} edge samples, {len(problems)} gluing problems; "
                f"{len(boundary)} boundary grid points, {mismatched} misclassified")


# ---------------------------------------------------------------------------
# 6-9. Orbits
# ---------------------------------------------------------------------------

def check_separation(zeta) -> tuple[bool, str]:
    r = certified_separation(zeta, -50, 50, precision=128, depth=1)
    lower = r.min_separation.lower
    ok = lower > 0 and not r.inconclusive_pairs
    return ok, (f"min lower bound 2^{float(np.log2(float(lower))):.2f} at pair {r.min_pair}, "
                f"{len(r.inconclusive_pairs)} inconclusive")


def check_accumulation(points, family, n_max: int = 200) -> tuple[bool, str]:
    parts, ok = [], True
    for name, zeta in points.items():
        rep = accumulation_clusters(zeta, n_max, Fraction(1, 1 << TOL_EXPONENT), family=family)
        in_family = all(c.form in family for c in rep.clusters)
        removed = all(classify_point(SquarePoint(*c.candidate)).kind is PointKind.REMOVED
                      for c in rep.clusters)
        k_ok = all(c.k_statistic <= 1 for c in rep.clusters)
        flagged = [c for c in rep.clusters if c.flagged]
        good = in_family and removed and k_ok and not flagged and not rep.violations
        ok &= good
        parts.append(f"{name}: {len(rep.clusters)} clusters, {len(flagged)} with residual "
                     f"above 2^-{TOL_EXPONENT}, {len(rep.violations)} late violations, "
                     f"max K {max((c.k_statistic for c in rep.clusters), default=0)}")
    return ok, "; ".join(parts)


def check_pipeline(points) -> tuple[bool, str]:
    parts, ok = [], True
    for name, zeta in points.items():
        d = build_punctured_surface(zeta, 50)
        good = (len(d.punctures) == 101 and all(p.radius > 0 for p in d.punctures)
                and d.shift_invariant
                and [p.n for p in d.punctures] == list(range(-50, 51)))
        ok &= good
        parts.append(f"{name}: {len(d.punctures)} punctures, shift invariant {d.shift_invariant}")
    return ok, "; ".join(parts)


def check_proxy(points) -> tuple[bool, str]:
    parts, ok = [], True
    for name, zeta in points.items():
        cert = stabilizer_proxy_check(zeta, 10)
        good = cert.passed and all(cert.witnesses[p] is not None for p in range(1, 11))
        ok &= good
        parts.append(f"{name}: passed {cert.passed}")
    rational = stabilizer_proxy_check(SquarePoint(Fraction(1, 3), Fraction(1, 3)), 2)
    ok &= (not rational.passed) and rational.failures == [2]
    parts.append(f"(1/3,1/3) at N=2: passed {rational.passed}, failing periods {rational.failures}")
    return ok, "; ".join(parts)


def run_all(progress: Optional[Callable[[CheckResult], None]] = None) -> list[CheckResult]:
    pts = standard_points()
    specs = [
        ("1", "case formula agrees with the digit rule on the 2^-12 grid", check_formula_vs_digits, 10),
        ("2", "group laws on 10^4 random dyadic points", check_group_laws, None),
        ("3", "derivative diag(1/2, 2) on 10^3 pairs", check_derivative, None),
        ("4", "periodic points match brute force for n <= 8, isolated", check_periodic_points, 30),
        ("5", "gluing involution, isometry and boundary classification", check_gluing, None),
        ("6", "certified separation, s_n = 2^n - 1", lambda: check_separation(pts["2^n-1"]), 60),
        ("6", "certified separation, s_n = n^2", lambda: check_separation(pts["n^2"]), 60),
        ("7", "accumulation at (1-2^-j, 0) or (2^-j, 1) as stated",
         lambda: check_accumulation(pts, BOTTOM_TOP_FAMILY), None),
        ("7*", "accumulation at (1-2^-j, 0) or (1, 2^-j)",
         lambda: check_accumulation(pts, FORWARD_FAMILY), None),
        ("8", "punctured surface with 101 punctures, shift invariant", lambda: check_pipeline(pts), None),
        ("9", "stabilizer proxy", lambda: check_proxy(pts), None),
    ]
    results = []
    for crit, title, fn, budget in specs:
        r = _timed(crit, title, fn, budget)
        results.append(r)
        if progress:
            progress(r)
    return results


__all__ = ["CheckResult", "EXPECTED_COUNTS", "FORWARD_FAMILY", "BOTTOM_TOP_FAMILY", "brute_force_fixed_points",
           "check_accumulation", "check_derivative", "check_formula_vs_digits", "check_gluing",
           "check_group_laws", "check_periodic_points", "check_pipeline", "check_proxy",
           "check_separation", "oracle_boundary_class", "run_all", "standard_points"]
