from fractions import Fraction as F

import pytest

from chamanara.dyadic import RationalStream, SparseExponentSequence, same_stream, sparse_sum_digits
from chamanara.dynamics import InconclusiveError, phi_digits
from chamanara.orbits import (ALL_FORMS, FORWARD_FAMILY, SWAPPED_FAMILY, AccumulationReport,
                              CandidateForm, OrbitReport, SpecialPoint, accumulation_clusters,
                              accumulation_horizon, backward_orbit_digits, build_punctured_surface,
                              certified_separation, cluster_points, forward_orbit_digits,
                              k_statistic, make_special_point, nearest_candidate, orbit_point,
                              stabilizer_proxy_check, tol_exponent)
from chamanara.surface import Box, PointKind, SquarePoint, classify_point, distance_lower_bound

TOL = F(1, 2 ** 20)


# special points

def test_special_point_from_squares(zeta_sq):
    y10 = zeta_sq.y.approx(10).value
    assert abs(float(y10) - 0.564453) < 1e-6
    assert abs(float(1 - y10) - 0.435546) < 1e-6
    x10 = zeta_sq.x.approx(10).value
    x_true = 1 - sum(F(1, 2 ** (n * n)) for n in range(1, 8))
    assert x10 <= x_true < x10 + F(1, 2 ** 10)


def test_special_point_from_mersenne(zeta_exp):
    assert zeta_exp.y.digit_string(7) == "1010001"
    assert classify_point(zeta_exp.point).kind is PointKind.INTERIOR


def test_constant_increment_rejected():
    even = SparseExponentSequence(lambda n: 2 * n, lambda M: 1, "even")
    with pytest.raises(ValueError):
        make_special_point(even, even)


def test_images_stay_sparse_describable(zeta_exp):
    assert all(zeta_exp.image_is_sparse_describable(n) for n in range(-20, 21))


def test_specials_are_not_eventually_periodic(zeta_sq, zeta_exp):
    for z in (zeta_sq, zeta_exp):
        d = z.y.digits(4000)
        for p in range(1, 40):
            assert any(d[i] != d[i + p] for i in range(2000, 4000 - p))


# orbits in closed form

def test_forward_orbit_examples(zeta_exp):
    x, y = forward_orbit_digits(zeta_exp, 0)
    assert x is zeta_exp.x and y is zeta_exp.y
    x3, y3 = forward_orbit_digits(zeta_exp, 3)
    assert y3.digit_string(4) == "0001"
    assert x3.digit_string(3) == "010"
    with pytest.raises(ValueError):
        forward_orbit_digits(zeta_exp, -1)


@pytest.mark.parametrize("which", ["zeta_exp", "zeta_sq"])
def test_closed_form_matches_step_by_step(which, request):
    z = request.getfixturevalue(which)
    x, y = z.x, z.y
    for n in range(1, 65):
        x, y = phi_digits(x, y)
        cx, cy = forward_orbit_digits(z, n)
        assert cx.digit_string(200) == x.digit_string(200)
        assert cy.digit_string(200) == y.digit_string(200)
        assert same_stream(cx, x) is True and same_stream(cy, y) is True


@pytest.mark.parametrize("which", ["zeta_exp", "zeta_sq"])
def test_backward_orbit_through_swap(which, request):
    z = request.getfixturevalue(which)
    x, y = z.x, z.y
    swapped = SquarePoint(z.y, z.x)
    for n in range(1, 65):
        yy, xx = phi_digits(y, x)          # one inverse step through the swap
        x, y = xx, yy
        bx, by = backward_orbit_digits(z, n)
        assert bx.digit_string(150) == x.digit_string(150)
        assert by.digit_string(150) == y.digit_string(150)
        fx, fy = forward_orbit_digits(swapped, n)
        assert (fy.digit_string(150), fx.digit_string(150)) == (bx.digit_string(150), by.digit_string(150))


# separation

def test_separation_mersenne(zeta_exp):
    r = certified_separation(zeta_exp, -50, 50, 128, 1)
    assert r.certified and r.min_separation.lower > 0 and not r.inconclusive_pairs
    assert len(r.orbit) == 101


def test_separation_single_point(zeta_exp):
    r = certified_separation(zeta_exp, 7, 7)
    assert r.min_separation.lower == float("inf") and r.min_pair is None


def test_separation_consecutive_sound(zeta_sq):
    for n in range(-10, 10):
        r = certified_separation(zeta_sq, n, n + 1, 64, 1)
        a, b = (Box.from_digits(e.x_digits, e.y_digits) for e in r.orbit)
        dx = max(a.x_hi - b.x_lo, b.x_hi - a.x_lo)
        dy = max(a.y_hi - b.y_lo, b.y_hi - a.y_lo)
        assert r.min_separation.lower ** 2 <= dx ** 2 + dy ** 2


def test_separation_monotone_in_window(zeta_exp):
    lows = [certified_separation(zeta_exp, -N, N, 96).min_separation.lower for N in (2, 5, 10, 20, 40)]
    assert all(a >= b for a, b in zip(lows, lows[1:]))


def test_low_precision_is_inconclusive(zeta_exp):
    r = certified_separation(zeta_exp, -30, 30, precision=8)
    assert not r.certified and r.inconclusive_pairs


def test_separation_independent_of_workers(zeta_sq):
    a = certified_separation(zeta_sq, -20, 20, 96, workers=1)
    b = certified_separation(zeta_sq, -20, 20, 96, workers=4)
    assert a == b


def test_orbit_report_round_trip(zeta_exp):
    r = certified_separation(zeta_exp, -6, 6, 64)
    assert OrbitReport.from_dict(r.to_dict()) == r


def test_separation_rejects_empty_window(zeta_exp):
    with pytest.raises(ValueError):
        certified_separation(zeta_exp, 3, 2)


# accumulation

def test_accumulation_mersenne(zeta_exp):
    rep = accumulation_clusters(zeta_exp, 200, TOL)
    assert rep.clusters and not rep.violations
    for c in rep.clusters:
        assert c.form in FORWARD_FAMILY
        assert classify_point(SquarePoint(*c.candidate)).kind is PointKind.REMOVED
        assert c.k_statistic <= 1
        assert not c.flagged
    assert not rep.late_unclustered


def test_accumulation_backward(zeta_exp, zeta_sq):
    for z in (zeta_exp, zeta_sq):
        rep = accumulation_clusters(z, 200, TOL, direction="backward")
        assert not rep.violations and all(not c.flagged for c in rep.clusters)


def test_backward_against_swapped_family_is_flagged(zeta_exp):
    rep = accumulation_clusters(zeta_exp, 200, TOL, direction="backward", family=SWAPPED_FAMILY)
    assert rep.violations


def test_late_points_near_right_edge(zeta_exp):
    # phi^(s-1) puts the one of y at position 1: the point is close to (1, 1/2)
    x, y = forward_orbit_digits(zeta_exp, 62)
    assert x.digit_string(20) == "1" * 20 and y.digit_string(20) == "1" + "0" * 19
    box = Box.of(SquarePoint(x, y), 64)
    form, j, c, lo, up = nearest_candidate(box, ALL_FORMS, 63)
    assert (form, j) == (CandidateForm.RIGHT, 1) and up <= TOL


def test_synthetic_cluster_at_corner():
    pts = [(n, SquarePoint(1 - F(1, 2 ** (30 + n)), F(1, 2 ** (40 + n)))) for n in range(5)]
    (c,), un = cluster_points(pts, 20)
    assert not un
    assert c.form is CandidateForm.BOTTOM and c.j is None and c.candidate == (1, 0)
    assert c.k_statistic == 0 and not c.flagged


def test_synthetic_cluster_at_half():
    pts = [(n, SquarePoint(F(1, 2) - F(1, 2 ** (30 + n)), F(1, 2 ** (40 + n)))) for n in range(5)]
    (c,), _ = cluster_points(pts, 20)
    assert c.form is CandidateForm.BOTTOM and c.j == 1 and c.candidate == (F(1, 2), 0)
    assert c.stabilized_x == "0" + "1" * 19 and c.k_statistic == 1


def test_far_points_are_unclustered():
    clusters, un = cluster_points([(0, SquarePoint(F(1, 3), F(1, 3)))], 20)
    assert not clusters and un == [(0, k_statistic("01" * 10, "01" * 10))]


def test_tolerance_validation(zeta_exp):
    with pytest.raises(ValueError):
        accumulation_clusters(zeta_exp, 10, F(1, 8))
    with pytest.raises(ValueError):
        accumulation_clusters(zeta_exp, 10, F(3, 2 ** 20))
    assert tol_exponent(F(1, 2 ** 33)) == 33


def test_accumulation_report_round_trip(zeta_sq):
    rep = accumulation_clusters(zeta_sq, 60, TOL)
    assert AccumulationReport.from_dict(rep.to_dict()) == rep


def test_horizon_guarantees_small_k(zeta_exp, zeta_sq):
    for z in (zeta_exp, zeta_sq):
        h = accumulation_horizon(z.y_seq, 20)
        for n in range(h, h + 150):
            x, y = forward_orbit_digits(z, n)
            assert k_statistic(x.digit_string(20), y.digit_string(20)) <= 1


def test_gap_growth(zeta_exp, zeta_sq):
    for z in (zeta_exp, zeta_sq):
        ones = [i for i, d in enumerate(z.y.digits(5000), 1) if d]
        gaps = [b - a for a, b in zip(ones, ones[1:])]
        assert gaps == sorted(gaps) and gaps[-1] > 100


# stabilizer proxy and punctured surface

def test_proxy_squares(zeta_sq):
    cert = stabilizer_proxy_check(zeta_sq, 10)
    assert cert.passed
    for p, (i, a, b) in cert.witnesses.items():
        d = zeta_sq.y.digits(i + p)
        assert d[i - 1] == a != b == d[i + p - 1]


def test_proxy_rational_point():
    assert not stabilizer_proxy_check(SquarePoint(F(1, 3), F(1, 3)), 2)
    assert stabilizer_proxy_check(SquarePoint(F(1, 3), F(1, 3)), 1)


def test_proxy_rejects_zero():
    with pytest.raises(ValueError):
        stabilizer_proxy_check(SquarePoint(F(1, 3), F(1, 3)), 0)


def test_punctured_surface(zeta_exp):
    d = build_punctured_surface(zeta_exp, 50)
    assert len(d.punctures) == 101
    assert len({p.radius for p in d.punctures}) == 1 and d.punctures[0].radius > 0
    assert d.shift_invariant
    assert d.apply_generator() == list(range(-49, 52))
    assert d.generator.name == "phi"


def test_punctured_surface_rejects_failed_proxy(mersenne):
    fake = SpecialPoint(mersenne, mersenne, RationalStream(F(1, 3)), RationalStream(F(1, 3)))
    with pytest.raises(ValueError):
        build_punctured_surface(fake, 5)


def test_punctured_surface_propagates_inconclusive(zeta_exp):
    with pytest.raises(InconclusiveError):
        build_punctured_surface(zeta_exp, 30, precision=8)
