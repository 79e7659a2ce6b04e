import random
from fractions import Fraction as F

import pytest

from conftest import CONDITION_P, SYMMETRIC_CENTER
from pwlcycles import bound_from_canonical, dispatch_bound, to_canonical
from pwlcycles.bound_engine import (
    CONVEXITY_TWO,
    ELLIPSE,
    EMPTY,
    FOCUS_K_PLUS_2,
    FOCUS_ONE,
    HYPERBOLA,
    INCONCLUSIVE,
    LINES,
    NO_CYCLES,
    NO_SLIDING_ONE,
    PARABOLA,
    POINT,
    ConicF,
    build_F,
    build_G,
    classify_conic,
    count_noncompact_in_H,
    resultant_R,
)
from pwlcycles.canonical import CanonicalForm, PWLSystem
from pwlcycles.polynomials import BiPoly, UniPoly


def direct_conic(m, y0, y1):
    """Quadratic contact polynomial evaluated straight from its symmetric
    monomial expansion (independent of the (Y0, Y1) assembly)."""
    m0, m1, m2, m3, m4, m5 = m
    return (
        m0
        + m1 * (y0 + y1)
        + m2 * y0 * y1
        + m3 * (y0**2 + y1**2)
        + m4 * (y0 * y1**2 + y0**2 * y1)
        + m5 * y0**2 * y1**2
    )


def direct_cubic(n, y0, y1):
    n1, n2, n3, n4, n5, n6, n7, n8, n9 = n
    return (
        n1 * (y0 + y1)
        + n2 * y0 * y1
        + n3 * (y0**2 + y1**2)
        + n4 * (y0**2 * y1 + y0 * y1**2)
        + n5 * (y0**3 + y1**3)
        + n6 * y0**2 * y1**2
        + n7 * (y0**3 * y1 + y0 * y1**3)
        + n8 * (y0**3 * y1**2 + y0**2 * y1**3)
        + n9 * y0**3 * y1**3
    )


def random_focus_cf(rng):
    """Random focus-focus canonical form with nonzero offsets."""
    def frac():
        return F(rng.randint(-8, 8), rng.randint(1, 5))

    while True:
        TL, TR = frac(), frac()
        DL = TL * TL / 4 + F(rng.randint(1, 9), rng.randint(1, 4))
        DR = TR * TR / 4 + F(rng.randint(1, 9), rng.randint(1, 4))
        aL, aR, b = frac(), frac(), frac()
        if aL == 0 or aR == 0 or b == 0:
            continue
        return CanonicalForm(T_L=TL, D_L=DL, a_L=aL, T_R=TR, D_R=DR, a_R=aR, b_star=b)


def conic_from_quadric(m3, m4, m5, m1, c1, m0):
    """ConicF from the plain quadric m3 Y0^2 + m4 Y0 Y1 + m5 Y1^2 + m1 Y0 + c1 Y1 + m0."""
    m = (F(m0), F(m1), F(c1) + 2 * F(m3), F(m3), F(m4), F(m5))
    poly = BiPoly(
        {
            (0, 0): m[0],
            (1, 0): m[1],
            (0, 1): m[2] - 2 * m[3],
            (2, 0): m[3],
            (1, 1): m[4],
            (0, 2): m[5],
        }
    )
    return ConicF(m=m, poly=poly, delta=F(0), b=F(1))


def test_pullback_identity_exact():
    rng = random.Random(7)
    for _ in range(200):
        cf = random_focus_cf(rng)
        b = F(rng.randint(-6, 6), rng.randint(1, 4))
        Fc = build_F(cf, b)
        Gc = build_G(cf, b)
        for _ in range(5):
            y0 = F(rng.randint(1, 40), rng.randint(1, 7))
            y1 = -F(rng.randint(1, 40), rng.randint(1, 7))
            assert Fc.poly(y0 + y1, y0 * y1) == direct_conic(Fc.m, y0, y1)
            assert Gc.poly(y0 + y1, y0 * y1) == direct_cubic(Gc.n, y0, y1)


def test_known_point_annihilates_everything():
    rng = random.Random(5)
    for _ in range(120):
        cf = random_focus_cf(rng)
        Fc = build_F(cf, cf.b_star)
        Gc = build_G(cf, cf.b_star)
        Y0 = cf.a_L * cf.T_L / cf.D_L
        Y1 = cf.a_L**2 / cf.D_L
        assert Fc.poly(Y0, Y1) == 0
        assert Gc.poly(Y0, Y1) == 0
        R = resultant_R(Fc, Gc)
        if not R.is_zero:
            assert R(Y1) == 0


def test_resultant_normalization():
    rng = random.Random(3)
    for _ in range(30):
        cf = random_focus_cf(rng)
        R = resultant_R(build_F(cf, cf.b_star), build_G(cf, cf.b_star))
        if R.is_zero:
            continue
        assert R.leading > 0
        # content-free: integer coefficients with gcd 1
        from math import gcd

        nums = [c.numerator for c in R.coeffs if c != 0]
        assert all(c.denominator == 1 for c in R.coeffs)
        g = 0
        for c in nums:
            g = gcd(g, abs(c))
        assert g == 1


@pytest.mark.parametrize(
    "quadric, expected",
    [
        ((1, 0, 1, 0, 0, -1), ELLIPSE),  # Y0^2 + Y1^2 = 1
        ((1, 0, -1, 0, 0, -1), HYPERBOLA),  # Y0^2 - Y1^2 = 1
        ((1, 0, 0, 0, -1, 0), PARABOLA),  # Y1 = Y0^2
        ((1, 0, -1, 0, 0, 0), LINES),  # Y0^2 = Y1^2
        ((1, 0, 1, 0, 0, 0), POINT),  # Y0^2 + Y1^2 = 0
        ((1, 0, 1, 0, 0, 1), EMPTY),  # Y0^2 + Y1^2 = -1
        ((0, 0, 0, 1, 1, 1), LINES),  # affine line
        ((1, 0, 0, 0, 0, -4), LINES),  # Y0^2 = 4, parallel lines
        ((1, 0, 0, 0, 0, 4), EMPTY),  # Y0^2 = -4
    ],
)
def test_classify_conic_cases(quadric, expected):
    assert classify_conic(conic_from_quadric(*quadric)) == expected


def test_bundled_examples_bound_three(three_cycle_systems):
    for name, sys in three_cycle_systems.items():
        report = dispatch_bound(sys)
        assert report.upper_bound == 3, name
        assert report.theorem_used == FOCUS_K_PLUS_2, name
        assert report.k == 1 and report.ell == 5, name
        assert report.N == 1, name
        assert report.conic_class == HYPERBOLA, name


def test_first_example_resultant_factorization(three_cycle_systems):
    cf = to_canonical(three_cycle_systems["three_cycles_a"])
    R = resultant_R(build_F(cf, cf.b_star), build_G(cf, cf.b_star))
    assert R.degree == 6
    factor = UniPoly.from_coeffs([F(-117), F(200)])  # 200 Y1 - 117 = 0 at a_L^2/D_L
    quot, rem = R.divmod(factor)
    assert rem.is_zero
    quintic = UniPoly.from_coeffs(
        [
            F(2258133778849572),
            F(-7126051666209372),
            F(3572696139179193),
            F(-6284181440066400),
            F(6760062816990000),
            F(1601361472000000),
        ]
    )
    assert quot == quintic


def test_third_example_resultant_divisibility(three_cycle_systems):
    cf = to_canonical(three_cycle_systems["three_cycles_c"])
    R = resultant_R(build_F(cf, cf.b_star), build_G(cf, cf.b_star))
    factor = UniPoly.from_coeffs([F(-31213), F(31250)])
    _, rem = R.divmod(factor)
    assert rem.is_zero


def test_noncompact_component_counts(three_cycle_systems):
    for name, sys in three_cycle_systems.items():
        cf = to_canonical(sys)
        Fc = build_F(cf, cf.b_star)
        assert classify_conic(Fc) == HYPERBOLA
        assert count_noncompact_in_H(Fc, cf) == 1, name


def test_condition_p_single_cycle():
    report = bound_from_canonical(CONDITION_P)
    assert report.theorem_used == FOCUS_ONE
    assert report.upper_bound == 1


def test_center_no_sliding_rule():
    report = bound_from_canonical(SYMMETRIC_CENTER)
    assert report.theorem_used == NO_SLIDING_ONE
    assert report.upper_bound == 1


def test_tangent_separation_gives_zero():
    sys = PWLSystem.from_rows(
        [[F(1), F(0)], [F(1), F(1)]], [F(0), F(0)],
        [[F(1), F(1)], [F(0), F(1)]], [F(0), F(0)],
    )
    report = dispatch_bound(sys)
    assert report.theorem_used == NO_CYCLES
    assert report.upper_bound == 0


def test_hypothesis_failure_gives_zero():
    cf = CanonicalForm(
        T_L=F(3), D_L=F(1), a_L=F(-1),
        T_R=F(0), D_R=F(1), a_R=F(-1), b_star=F(1),
    )
    report = bound_from_canonical(cf)
    assert report.theorem_used == NO_CYCLES
    assert report.upper_bound == 0


def test_degenerate_offset_convexity_rule():
    cf = CanonicalForm(
        T_L=F(0), D_L=F(1), a_L=F(0),
        T_R=F(0), D_R=F(1), a_R=F(1), b_star=F(1),
    )
    report = bound_from_canonical(cf)
    assert report.theorem_used == CONVEXITY_TWO
    assert report.upper_bound == 2


def test_nonfocus_route_is_inconclusive():
    # left zone is a virtual node (a_L > 0, real eigenvalues)
    cf = CanonicalForm(
        T_L=F(3), D_L=F(1), a_L=F(1),
        T_R=F(0), D_R=F(1), a_R=F(-1), b_star=F(1),
    )
    report = bound_from_canonical(cf)
    assert report.theorem_used == INCONCLUSIVE
    assert report.upper_bound is None
    assert not report.conclusive


def test_randomized_focus_bounds_capped():
    rng = random.Random(2024)
    fired_one = 0
    for _ in range(200):
        cf = random_focus_cf(rng)
        report = bound_from_canonical(cf)
        assert report.conclusive
        assert 1 <= report.upper_bound <= 7
        if report.theorem_used == FOCUS_ONE:
            fired_one += 1
            Fc = build_F(cf, cf.b_star)
            assert Fc.delta <= 0
            assert report.upper_bound == 1
    assert fired_one > 0
