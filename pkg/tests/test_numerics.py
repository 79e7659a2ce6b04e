import math
from fractions import Fraction as F

import pytest

from conftest import SYMMETRIC_CENTER
from pwlcycles import to_canonical
from pwlcycles.bound_engine import build_F
from pwlcycles.canonical import CanonicalForm
from pwlcycles.halfmaps import (
    default_y0_max,
    displacement_scan,
    find_cycles,
    find_lambda,
    halfmap_eval,
    halfmap_eval_via_cubic,
    resolve_domain,
    sign_consistency_check,
)


@pytest.fixture(scope="module")
def hy_cf(three_cycle_systems):
    return to_canonical(three_cycle_systems["three_cycles_a"])


@pytest.fixture(scope="module")
def ga_cf(three_cycle_systems):
    return to_canonical(three_cycle_systems["three_cycles_c"])


def test_center_halfmaps_are_reflections():
    for y0 in (0.5, 1.0, 3.0, 10.0):
        assert halfmap_eval(SYMMETRIC_CENTER, "left", y0) == pytest.approx(-y0, rel=1e-10)
        assert halfmap_eval(SYMMETRIC_CENTER, "right", y0) == pytest.approx(-y0, rel=1e-10)


def test_halfmap_boundary_values(three_cycle_systems, hy_cf):
    # a_R < 0: the right half-map starts at 0 with value 0
    assert halfmap_eval(hy_cf, "right", 0.0) == 0.0
    # a_L > 0: the left half-map starts at 0 with value 0
    fr_cf = to_canonical(three_cycle_systems["three_cycles_b"])
    assert halfmap_eval(fr_cf, "left", 0.0) == 0.0


def test_tangency_ordinate_first_example(hy_cf):
    lam = find_lambda(hy_cf, "left")
    assert lam == pytest.approx(2.0415915583350652, rel=1e-10)
    # the half-map vanishes at its left endpoint
    assert abs(halfmap_eval(hy_cf, "left", lam)) < 1e-9


def test_resolved_domain_consistency(hy_cf):
    dom = resolve_domain(hy_cf, "left")
    assert dom.side == "left"
    assert dom.lam > 0
    assert dom.mu == math.inf and dom.mu1 == -math.inf
    assert dom.y_at_lam == pytest.approx(0.0, abs=1e-9)


def test_cubic_oracle_agrees_with_integration(hy_cf, ga_cf):
    for cf in (hy_cf, ga_cf):
        dom = resolve_domain(cf, "left")
        for off in (0.1, 0.7, 2.0, 5.0):
            y0 = dom.lam + off
            ode = halfmap_eval(cf, "left", y0)
            alg = halfmap_eval_via_cubic(cf, "left", y0)
            assert alg == pytest.approx(ode, rel=1e-10, abs=1e-10)


def test_halfmap_convexity_signs(hy_cf, ga_cf):
    # the second difference of y_L has the sign of -T_L, of y_R the sign of +T_R
    for cf in (hy_cf, ga_cf):
        for side, sign in (("left", -float(cf.T_L)), ("right", float(cf.T_R))):
            dom = resolve_domain(cf, side)
            base = dom.lam + 1.0
            h = 0.25
            vals = [halfmap_eval(cf, side, base + i * h) for i in (-1, 0, 1)]
            second = vals[0] - 2 * vals[1] + vals[2]
            assert second * sign > 0, (side, second, sign)


def test_first_example_three_cycles(hy_cf):
    scan = displacement_scan(hy_cf, hy_cf.b_star, samples=192)
    cycles = find_cycles(hy_cf, hy_cf.b_star, scan)
    assert cycles.count == 3
    assert not cycles.continuum
    roots = [z[0] for z in cycles.zeros]
    assert roots == pytest.approx([2.0943, 3.8290, 7.4060], abs=2e-3)
    stabilities = [z[2] for z in cycles.zeros]
    assert stabilities == ["repelling", "attracting", "repelling"]
    assert all(z[1] == "simple" for z in cycles.zeros)
    Fc = build_F(hy_cf, hy_cf.b_star)
    assert sign_consistency_check(hy_cf, hy_cf.b_star, cycles, Fc)


def test_displacement_monotone_in_boundary_shift(hy_cf):
    # between the outer cycles the displacement moves monotonically with b
    y0 = 5.0
    h = 1e-3
    b = float(hy_cf.b_star)
    deltas = []
    for bb in (b - h, b, b + h):
        yl = halfmap_eval(hy_cf, "left", y0)
        yr = halfmap_eval(hy_cf, "right", y0 - bb)
        deltas.append(yr + bb - yl)
    assert (deltas[1] - deltas[0]) * (deltas[2] - deltas[1]) > 0


def test_center_continuum_detected():
    scan = displacement_scan(SYMMETRIC_CENTER, 0.0, y0_max=5.0, samples=64)
    assert scan
    assert all(abs(s.delta) < 1e-9 for s in scan if s.inside_domain)
    cycles = find_cycles(SYMMETRIC_CENTER, 0.0, scan)
    assert cycles.continuum
    assert cycles.count == 0


def test_default_scan_ceiling_scales_with_parameters(hy_cf):
    assert default_y0_max(hy_cf) >= 10.0
    # near-cancelling half-map multipliers widen the window substantially
    wide = CanonicalForm(
        T_L=F(-1, 4), D_L=F(65, 64), a_L=F(65, 64),
        T_R=F(1, 4), D_R=F(65, 64), a_R=F(1), b_star=F(1),
    )
    assert default_y0_max(wide) > 100.0


def test_empty_scan_yields_no_cycles(hy_cf):
    cycles = find_cycles(hy_cf, hy_cf.b_star, [])
    assert cycles.count == 0 and not cycles.continuum
