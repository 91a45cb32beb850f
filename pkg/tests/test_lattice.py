import math
import random
from fractions import Fraction as F

import pytest
from scipy import integrate

from latharm.lattice import (
    ball_sum,
    ball_sum_report,
    coeff_series,
    coefficient_bound_report,
    cutoff_f,
    long_sum_physical,
    long_sum_report,
    main_term,
    representations,
    short_sum,
    short_sum_report,
    two_adic_part,
)
from latharm.poly import parse_poly, sphere_average

from conftest import random_homogeneous


def brute_shell_sum(p, n):
    """Independent oracle: triple loop over |coord| <= isqrt(n)."""
    total = F(0)
    k = math.isqrt(n)
    for x in range(-k, k + 1):
        for y in range(-k, k + 1):
            for z in range(-k, k + 1):
                if x * x + y * y + z * z == n:
                    total += p.evaluate(x, y, z)
    return total


def brute_representations(n):
    k = math.isqrt(n)
    return [
        (x, y, z)
        for x in range(-k, k + 1)
        for y in range(-k, k + 1)
        for z in range(-k, k + 1)
        if x * x + y * y + z * z == n
    ]


# -- representations -----------------------------------------------------------


def test_representations_unit_shell():
    assert representations(1) == [
        (-1, 0, 0), (0, -1, 0), (0, 0, -1), (0, 0, 1), (0, 1, 0), (1, 0, 0),
    ]


def test_representations_seven_empty():
    # 7 = 7 mod 8 is not a sum of three squares; brute force agrees
    assert representations(7) == []
    assert brute_representations(7) == []


def test_representations_origin():
    assert representations(0) == [(0, 0, 0)]


def test_representations_match_brute_force():
    for n in range(0, 60):
        ours = representations(n)
        assert ours == sorted(brute_representations(n))
        assert len(set(ours)) == len(ours)


# -- coefficient series -----------------------------------------------------------


def test_quartic_first_coefficients(quartic):
    # oracle first: hand/brute enumeration over |coord| <= 2
    expected = [brute_shell_sum(quartic, n) for n in (1, 2, 3)]
    assert expected == [F(12), F(-24), F(-96)]
    series = coeff_series(quartic, 3)
    assert list(series.values) == expected


def test_representation_counts():
    series = coeff_series(parse_poly("1"), 3)
    assert list(series.values) == [F(6), F(12), F(8)]


def test_series_matches_brute_force_corpus():
    rng = random.Random(5)
    polys = [parse_poly("1"), parse_poly("x^2"), parse_poly("x*y")]
    polys += [random_homogeneous(rng, d) for d in (2, 3, 4, 5)]
    for p in polys:
        series = coeff_series(p, 40)
        for n in range(1, 41):
            assert series.a(n) == brute_shell_sum(p, n), (p.to_string(), n)


def test_odd_degree_series_vanishes():
    series = coeff_series(parse_poly("x^3-2*x*y*z"), 50)
    assert all(v == 0 for v in series.values)


def test_octahedral_vanishing():
    # any monomial with an odd exponent sums to zero on every shell
    series = coeff_series(parse_poly("x^2*y"), 30)
    assert all(v == 0 for v in series.values)
    assert ball_sum(parse_poly("x^2*y"), 30) == 0


def test_series_consistency_with_ball_sum(quartic):
    series = coeff_series(quartic, 200)
    running = F(0)
    for n in range(1, 201):
        running += series.a(n)
    assert ball_sum(quartic, 200) == running  # P(0) = 0 for degree 4


def test_parallel_determinism(quartic):
    assert coeff_series(quartic, 300, workers=3) == coeff_series(quartic, 300)


def test_series_rejects_bad_input():
    with pytest.raises(ValueError):
        coeff_series(parse_poly("x^2+y"), 10)
    with pytest.raises(ValueError):
        coeff_series(parse_poly("x"), 0)


# -- exact ball sums ---------------------------------------------------------------


def test_ball_sum_odd_symmetry():
    for r_sq in (1, 5, 20):
        assert ball_sum(parse_poly("x*y"), r_sq) == 0


def test_ball_sum_counts_unit_ball():
    assert ball_sum(parse_poly("1"), 1) == 7


def test_ball_sum_quartic(quartic):
    assert ball_sum(quartic, 3) == F(-108)


# -- cutoff and weighted sums --------------------------------------------------------


def test_cutoff_values():
    assert cutoff_f(5.0, 5.0, 0.5) == 5.0
    assert cutoff_f(5.5, 5.0, 0.5) == 0.0
    assert cutoff_f(5.25, 5.0, 0.5) == 2.5
    assert cutoff_f(0.0, 5.0, 0.5) == 0.0
    assert cutoff_f(7.0, 5.0, 0.5) == 0.0


def test_short_sum_empty_window():
    # (R, R+H] straddles no integer when R^2=2.25, (R+H)^2=2.56
    assert short_sum(parse_poly("1"), 1.5, 0.1) == 0.0


def test_short_sum_two_shells():
    value = short_sum(parse_poly("1"), 1.0, 0.5)
    expected = 6 * cutoff_f(1.0, 1.0, 0.5) / 1.0 + 12 * cutoff_f(
        math.sqrt(2), 1.0, 0.5
    ) / math.sqrt(2)
    assert value == pytest.approx(expected, rel=1e-15)


def test_short_sum_odd_degree_zero():
    assert short_sum(parse_poly("x^3"), 3.0, 0.5) == 0.0


def test_long_sum_small_case_direct():
    # direct weighted enumeration oracle
    p = parse_poly("1")
    r, h = 2.0, 0.25
    expected = 0.0
    for n in range(1, 6):
        reps = len(representations(n))
        if reps:
            root = math.sqrt(n)
            expected += reps * cutoff_f(root, r, h) / root
    expected += 1.0  # origin for degree 0
    assert long_sum_physical(p, r, h) == pytest.approx(expected, rel=1e-14)


def test_long_minus_short_is_interior_ball(quartic):
    # with R^2 irrational the interior is exactly the floor(R^2) ball
    r, h = 3.5, 0.25  # R^2 = 12.25
    lng = long_sum_physical(quartic, r, h)
    sht = short_sum(quartic, r, h)
    interior = ball_sum(quartic, 12)
    assert lng - sht == pytest.approx(float(interior), rel=1e-12, abs=1e-9)


def test_difference_identity_integer_radius(quartic):
    # headline sum = long - short + boundary shell, when R^2 is an integer
    # (both weighted sums already include the n = R^2 shell with weight 1)
    for p in (parse_poly("1"), quartic):
        r, h = 4.0, 0.5
        headline = ball_sum(p, 16)
        lng = long_sum_physical(p, r, h)
        sht = short_sum(p, r, h)
        boundary = coeff_series(p, 16).a(16)
        assert lng - sht + float(boundary) == pytest.approx(
            float(headline), rel=1e-12, abs=1e-9
        )


def test_sum_reports_count_points(quartic):
    rep = ball_sum_report(parse_poly("1"), 1)
    assert rep.term_count == 7 and rep.value == 7

    rep = short_sum_report(quartic, 1.0, 0.5)
    # window [1, 2.25]: shells 1 and 2 hold 6 + 12 points
    assert rep.term_count == 18

    rep = long_sum_report(parse_poly("1"), 2.0, 0.25)
    # shells 1..5 hold 6+12+8+6+24 = 56 points, plus the origin
    assert rep.term_count == 57
    assert rep.value == pytest.approx(long_sum_physical(parse_poly("1"), 2.0, 0.25))


def test_series_consistency_constant_origin():
    # ball sum includes P(0) on top of the shell coefficients
    p = parse_poly("2")
    series = coeff_series(p, 200)
    running = F(2)
    for n in range(1, 201):
        running += series.a(n)
        assert ball_sum(p, n) == running


# -- main term -------------------------------------------------------------------------


def test_main_term_zero_mean(quartic):
    assert main_term(quartic, 10, F(1, 2)) == 0


def test_main_term_constant_closed_form():
    r, h = F(7), F(1, 3)
    expected = 4 * r**3 / 3 + 2 * h * r**2 + 2 * h**2 * r / 3
    assert main_term(parse_poly("1"), r, h) == expected


@pytest.mark.parametrize("expr", ["x^2", "(x^2+y^2+z^2)^2", "x^2*y^2"])
def test_main_term_against_quadrature(expr):
    p = parse_poly(expr)
    r, h = 3.0, 0.5
    nu = p.degree

    def radial(t):
        return cutoff_f(t, r, h) * t ** (nu + 1)

    integral, _ = integrate.quad(radial, 0, r + h, points=[r, r + h])
    oracle = 4 * math.pi * float(sphere_average(p)) * integral
    ours = float(main_term(p, F(3), F(1, 2))) * math.pi
    assert ours == pytest.approx(oracle, rel=1e-9)


# -- two-adic part and coefficient bounds ------------------------------------------------


def test_two_adic_part():
    assert two_adic_part(12) == 4
    assert two_adic_part(7) == 1
    assert two_adic_part(96) == 32  # 96 = 2^5 * 3
    with pytest.raises(ValueError):
        two_adic_part(0)


def test_bound_report_rejects_nonharmonic():
    series = coeff_series(parse_poly("x^2"), 10)
    with pytest.raises(ValueError):
        coefficient_bound_report(series)
    series0 = coeff_series(parse_poly("1"), 10)
    with pytest.raises(ValueError):
        coefficient_bound_report(series0)


def test_bound_report_odd_degree_zero_series():
    series = coeff_series(parse_poly("x"), 64)
    report = coefficient_bound_report(series)
    assert report.max_ratio == 0.0
    assert report.fit is None


def test_bound_report_quartic_small(quartic):
    # Sarnak ratios at n <= 3: 12/1, 24/2^2.5, 96/3^2.5; the max is 12
    series = coeff_series(quartic, 3)
    report = coefficient_bound_report(series)
    assert report.exponent == F(5, 2)
    assert report.max_ratio == pytest.approx(12.0)
    assert report.argmax_n == 1


def test_bound_report_blomer_harcos_mode(quartic):
    series = coeff_series(quartic, 64)
    report = coefficient_bound_report(series, use_gcd=True)
    assert report.mode == "blomer-harcos"
    assert report.exponent == F(11, 4) - F(5, 16)
    expected = max(
        abs(float(series.a(n)))
        / (n ** float(report.exponent) * two_adic_part(n) ** 0.625)
        for n in range(1, 65)
        if series.a(n)
    )
    assert report.max_ratio == pytest.approx(expected)
