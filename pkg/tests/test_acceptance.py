"""Acceptance criteria 1-9, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.  Criterion 7 runs twice: once against
the family ``(1-2^-j, 0), (2^-j, 1)`` and once against
``(1-2^-j, 0), (1, 2^-j)``; only the second holds for the forward orbit.
"""

import pytest

from chamanara import checks


@pytest.fixture(scope="module")
def points():
    return checks.standard_points()


def report(capsys, criterion, title, fn, budget=None):
    result = checks._timed(criterion, title, fn, budget)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


def test_criterion_1_case_formula_vs_digit_rule(capsys):
    report(capsys, "1", "case formula agrees with the digit rule on the 2^-12 grid",
           checks.check_formula_vs_digits, 10)


def test_criterion_2_group_laws(capsys):
    report(capsys, "2", "group laws on 10^4 random dyadic points", checks.check_group_laws)


def test_criterion_3_derivative(capsys):
    report(capsys, "3", "derivative diag(1/2, 2) on 10^3 pairs", checks.check_derivative)


def test_criterion_4_periodic_points(capsys):
    report(capsys, "4", "periodic points match brute force for n <= 8, isolated",
           checks.check_periodic_points, 30)


def test_criterion_5_gluing(capsys):
    report(capsys, "5", "gluing involution, isometry and boundary classification", checks.check_gluing)


@pytest.mark.parametrize("name", ["2^n-1", "n^2"])
def test_criterion_6_certified_separation(capsys, points, name):
    report(capsys, "6", f"certified separation, s_n = {name}",
           lambda: checks.check_separation(points[name]), 60)


def test_criterion_7_bottom_or_top_family(capsys, points):
    report(capsys, "7", "accumulation at (1-2^-j, 0) or (2^-j, 1)",
           lambda: checks.check_accumulation(points, checks.BOTTOM_TOP_FAMILY))


def test_criterion_7_bottom_or_right_family(capsys, points):
    report(capsys, "7*", "accumulation at (1-2^-j, 0) or (1, 2^-j)",
           lambda: checks.check_accumulation(points, checks.FORWARD_FAMILY))


def test_criterion_8_punctured_surface(capsys, points):
    report(capsys, "8", "punctured surface with 101 punctures, shift invariant",
           lambda: checks.check_pipeline(points))


def test_criterion_9_stabilizer_proxy(capsys, points):
    report(capsys, "9", "stabilizer proxy", lambda: checks.check_proxy(points))


if __name__ == "__main__":
    import sys
    results = checks.run_all(lambda r: print(r.line(), flush=True))
    sys.exit(0 if all(r.passed for r in results) else 1)
