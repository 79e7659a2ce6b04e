"""Numerical Poincaré half-maps and the displacement function.

The primary evaluator integrates the planar linear subsystems with event
detection on the section x = 0 (left subsystem forward in time, right
subsystem backward).  An independent cross-check integrates the cubic
graph ODE dy1/dy0 = y0 W(y1) / (y1 W(y0)) instead.  The displacement
function delta_b(y0) = y_R(y0 - b) + b - y_L(y0) is scanned on a log
grid and its simple zeros are the observed crossing limit cycles.

Stability convention: delta' < 0 at a root means the cycle is attracting
(the return map contracts toward it from above).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .canonical import CanonicalForm, halfmap_domains

RTOL_FLOOR = 2.3e-14  # scipy clamps rtol below 100 * machine epsilon


class NoReturn(RuntimeError):
    """The trajectory failed to re-cross the section within the horizon."""


class ToleranceFailure(RuntimeError):
    """Richardson re-runs kept disagreeing beyond the acceptance margin."""


class SingularCrossing(RuntimeError):
    """The graph-ODE path ran into y1 = 0 or a root of W."""


@dataclass(frozen=True)
class ResolvedDomain:
    """Numeric interval data of one half-map: I = [lam, mu), image (mu1, y_at_lam]."""

    side: str
    lam: float
    mu: float  # math.inf when W has no positive root
    mu1: float  # -math.inf when W has no negative root
    y_at_lam: float


@dataclass(frozen=True)
class DisplacementSample:
    y0: float
    delta: float
    delta_prime: float
    inside_domain: bool


@dataclass(frozen=True)
class CycleSet:
    zeros: tuple[tuple[float, str, str], ...]  # (y0_root, multiplicity_flag, stability)
    count: int
    continuum: bool = False


def _params(cf: CanonicalForm, side: str) -> tuple[float, float, float]:
    T, D, a = cf.side(side)
    return float(T), float(D), float(a)


def _integrate_to_section(f, z0, direction, t_max, rtol, atol):
    """Integrate until x crosses 0 in the given direction.

    Near-tangential returns enclose a tiny far-side lobe that can fit
    inside one adaptive step, hiding the sign change from the section
    event.  A second terminal event on x-extrema catches that: stopping
    at an extremum on the far side means the crossing happened within
    the last step, where dense output recovers it.
    """

    def section(t, z):
        return z[0]

    section.terminal = True
    section.direction = direction

    def xextreme(t, z):
        return f(t, z)[0]

    xextreme.terminal = True
    xextreme.direction = -direction

    t0, z = 0.0, tuple(z0)
    for _ in range(400):
        sol = solve_ivp(
            f,
            (t0, t_max),
            z,
            method="DOP853",
            rtol=rtol,
            atol=atol,
            events=(section, xextreme),
            dense_output=True,
        )
        if sol.t_events[0].size:
            return float(sol.y_events[0][0][1])
        if sol.t_events[1].size == 0:
            raise NoReturn(f"no section return within t_max={t_max}")
        te = float(sol.t_events[1][0])
        ze = sol.y_events[1][0]
        if direction * ze[0] > 0:
            # extremum beyond the section: the crossing hid inside the last
            # step; redo that stretch with steps small enough to expose it
            idx = np.nonzero(direction * sol.y[0] < 0)[0]
            if idx.size == 0:
                raise NoReturn("section crossing lost inside the first step")
            t_lo = float(sol.t[idx[-1]])
            z_lo = sol.y[:, idx[-1]]
            span = te - t_lo
            sub = solve_ivp(
                f,
                (t_lo, te + span),
                z_lo,
                method="DOP853",
                rtol=rtol,
                atol=atol,
                events=section,
                max_step=span / 64,
            )
            if sub.t_events[0].size == 0:
                raise NoReturn("grazing section crossing could not be pinned down")
            return float(sub.y_events[0][0][1])
        # extremum on the near side: nudge past it and keep integrating
        h = 1e-9 * max(1.0, abs(te))
        fz = f(te, ze)
        t0 = te + h
        z = (ze[0] + h * fz[0], ze[1] + h * fz[1])
    raise NoReturn("too many section-free turns")


def _richardson(run, tol):
    """Accept run(tol) only if run(tol/20) agrees within 10*tol (relative)."""
    for t1, t2 in ((tol, tol / 20), (tol / 10, tol / 200)):
        t1 = max(t1, RTOL_FLOOR)
        t2 = max(t2, RTOL_FLOOR)
        v1 = run(t1)
        v2 = run(t2)
        if abs(v1 - v2) <= 10 * tol * max(1.0, abs(v2)):
            return v2
        if t2 <= RTOL_FLOOR:
            break
    raise ToleranceFailure(f"half-map integrations disagree: {v1!r} vs {v2!r}")


def _tangent_offset(T, D, a, t0, sgn):
    """Third-order orbit expansion from a tangency at the origin.

    Expansion of the field sgn * (T x - y, D x - a) at time t0 > 0; the
    time-reversed case (sgn = -1) is the forward expansion of the field
    (-T, D, a) with the ordinate negated.
    """
    if sgn < 0:
        T = -T
    x = a * t0**2 / 2 + T * a * t0**3 / 6
    y = -a * t0 + D * a * t0**3 / 6
    return (x, y) if sgn > 0 else (x, -y)


def halfmap_eval(cf: CanonicalForm, side: str, y0: float, tol: float = 1e-12, t_max: float = 1e4) -> float:
    """First-return ordinate of the forward left / backward right half-map."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    T, D, a = _params(cf, side)
    y0 = float(y0)
    sgn = 1.0 if side == "left" else -1.0  # right map runs the flow backward

    def field(t, z):
        return (sgn * (T * z[0] - z[1]), sgn * (D * z[0] - a))

    # the return crossing re-enters the section from the working zone:
    # from x < 0 for the left map (x increasing), from x > 0 for the right
    direction = 1.0 if side == "left" else -1.0

    if y0 == 0.0:
        enters = a < 0 if side == "left" else a > 0
        if not enters:
            # the orbit leaves through the other zone; the half-map is the
            # identity at its boundary point
            return 0.0

        def run(rtol):
            t0 = min(1e-3, (rtol / max(1.0, abs(a))) ** 0.25)
            z0 = _tangent_offset(T, D, a, t0, sgn)
            return _integrate_to_section(field, z0, direction, t_max, rtol, rtol * 1e-2)

        return _richardson(run, tol)

    def run(rtol):
        return _integrate_to_section(field, (0.0, y0), direction, t_max, rtol, rtol * 1e-2)

    try:
        return _richardson(run, tol)
    except NoReturn:
        # the interval endpoint maps to 0 through a tangential return that
        # event detection cannot see; recognise it and answer exactly
        dl, dr = halfmap_domains(cf)
        dom = dl if side == "left" else dr
        if dom.lambda_positive:
            lam = find_lambda(cf, side, tol)
            if abs(y0 - lam) <= 1e-7 * max(1.0, lam):
                return 0.0
        raise


def find_lambda(cf: CanonicalForm, side: str, tol: float = 1e-12, t_max: float = 1e4) -> float:
    """Left endpoint of the half-map interval (0 unless the lam > 0 flag is set).

    When positive, lam is found by running the opposite flow from the
    tangency at the origin until it re-crosses the section.
    """
    dl, dr = halfmap_domains(cf)
    dom = dl if side == "left" else dr
    if not dom.lambda_positive:
        return 0.0
    T, D, a = _params(cf, side)
    # the half-map orbit runs origin-ward; retrace it in the opposite sense
    sgn = -1.0 if side == "left" else 1.0

    def field(t, z):
        return (sgn * (T * z[0] - z[1]), sgn * (D * z[0] - a))

    direction = 1.0 if side == "left" else -1.0

    def run(rtol):
        t0 = min(1e-3, (rtol / max(1.0, abs(a))) ** 0.25)
        z0 = _tangent_offset(T, D, a, t0, sgn)
        return _integrate_to_section(field, z0, direction, t_max, rtol, rtol * 1e-2)

    return _richardson(run, tol)


def resolve_domain(cf: CanonicalForm, side: str, tol: float = 1e-12) -> ResolvedDomain:
    """Numeric half-map interval data (exact roots of W refined to floats)."""
    dl, dr = halfmap_domains(cf)
    dom = dl if side == "left" else dr
    lam = find_lambda(cf, side, tol)
    mu = float(dom.mu) if dom.mu is not None else math.inf
    mu1 = float(dom.mu1) if dom.mu1 is not None else -math.inf
    y_at_lam = halfmap_eval(cf, side, 0.0, tol) if dom.y_at_lambda_negative else 0.0
    return ResolvedDomain(side=side, lam=lam, mu=mu, mu1=mu1, y_at_lam=y_at_lam)


def halfmap_eval_via_cubic(cf: CanonicalForm, side: str, y0: float, tol: float = 1e-12) -> float:
    """Cross-check evaluation along the cubic graph field -(y1 W(y0), y0 W(y1)).

    The path is anchored at the domain boundary with a local series and
    integrated (normalized to unit speed) until it reaches the target
    abscissa.  Singular boundary points are the reason for the series:
    the graph ODE degenerates at y1 = 0 and at roots of W.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    T, D, a = _params(cf, side)
    y0 = float(y0)
    if y0 < 0:
        raise SingularCrossing("target abscissa outside the closed domain")

    def W(y):
        return D * y * y - a * T * y + a * a

    dl, dr = halfmap_domains(cf)
    dom = dl if side == "left" else dr

    if dom.lambda_positive:
        lam = find_lambda(cf, side, tol)
        if y0 <= lam:
            if abs(y0 - lam) <= 1e-9 * max(1.0, lam):
                return 0.0
            raise SingularCrossing(f"target {y0} below the interval endpoint {lam}")
        # near (lam, 0): y1^2 = 2 a^2 lam (y0 - lam) / W(lam) + O((y0-lam)^2)
        dy = min(1e-8 * max(1.0, lam), (y0 - lam) / 2)
        anchor = (lam + dy, -math.sqrt(2 * a * a * lam * dy / W(lam)))
    elif dom.y_at_lambda_negative:
        # boundary point (0, y(0)) with y(0) < 0; seed it from the flow once
        anchor = (0.0, halfmap_eval(cf, side, 0.0, tol))
        if y0 == 0.0:
            return anchor[1]
    else:
        # the graph passes through the origin: y1 = -y0 - (2T/(3a)) y0^2 + ...
        if y0 == 0.0:
            return 0.0
        h = min(1e-4 * max(1.0, y0), y0 / 2)
        curv = -(2 * T / (3 * a)) if a != 0 else 0.0
        anchor = (h, -h + curv * h * h)

    if W(y0) <= 0:
        raise SingularCrossing("W vanishes on the target abscissa")

    def field(t, z):
        vx = -z[1] * W(z[0])
        vy = -z[0] * W(z[1])
        norm = math.hypot(vx, vy)
        if norm == 0.0:
            raise SingularCrossing("stationary point of the graph field")
        return (vx / norm, vy / norm)

    def target(t, z):
        return z[0] - y0

    target.terminal = True
    target.direction = 1.0
    t_max = 100.0 * (1.0 + y0 + abs(anchor[1]))

    def run(rtol):
        sol = solve_ivp(
            field, (0.0, t_max), anchor, method="DOP853", rtol=rtol, atol=rtol * 1e-2, events=target
        )
        if sol.t_events[0].size == 0:
            raise SingularCrossing("graph path never reached the target abscissa")
        return float(sol.y_events[0][0][1])

    return _richardson(run, tol)


def default_y0_max(cf: CanonicalForm) -> float:
    """Scan ceiling: ten eigenvalue-scaled offsets, widened when the two
    half-maps nearly cancel.

    |a|/sqrt(D) is the natural amplitude unit of each focus (the offset
    measured in units of the rotation rate).  For large y0 the composed
    return map is linear with slope ratio exp(pi T_L / w_L) against
    exp(-pi T_R / w_R) (w = sqrt(4D - T^2)); when these multipliers
    nearly agree the displacement flattens and cycles can sit far out,
    so the ceiling grows inversely with the multiplier gap.
    """
    scales = [1.0, abs(float(cf.b_star))]
    for side in ("left", "right"):
        T, D, a = _params(cf, side)
        if D > 0:
            scales.append(abs(a) / math.sqrt(D))
        else:
            scales.append(abs(a))
    gap = 1.0
    if cf.is_focus("left") and cf.is_focus("right"):
        TL, DL, _ = _params(cf, "left")
        TR, DR, _ = _params(cf, "right")
        s_l = math.exp(math.pi * TL / math.sqrt(4 * DL - TL * TL))
        s_r = math.exp(-math.pi * TR / math.sqrt(4 * DR - TR * TR))
        gap = min(max(abs(s_l - s_r), 1e-3), 1.0)
    return 10.0 * max(scales) / gap


def _delta_fn(cf: CanonicalForm, b: float, tol: float):
    def delta(y0):
        yl = halfmap_eval(cf, "left", y0, tol)
        yr = halfmap_eval(cf, "right", y0 - b, tol)
        return yr + b - yl

    return delta


def displacement_scan(
    cf: CanonicalForm,
    b: Fraction | float,
    y0_max: float | None = None,
    samples: int = 256,
    tol: float = 1e-12,
) -> list[DisplacementSample]:
    """delta_b on a log-spaced grid over the interior of I_b, capped at y0_max."""
    if samples < 2:
        raise ValueError("need at least two samples")
    b = float(b)
    if y0_max is None:
        y0_max = default_y0_max(cf)
    dom_l = resolve_domain(cf, "left", tol)
    dom_r = resolve_domain(cf, "right", tol)
    lo = max(dom_l.lam, dom_r.lam + b, 0.0)
    # always look at least a decade past the interval's left endpoint, even
    # when the requested ceiling sits below it
    cap = max(y0_max, 10.0 * lo + 10.0)
    hi = min(dom_l.mu, dom_r.mu + b, cap)
    if not hi > lo:
        return []
    span = hi - lo
    offsets = np.geomspace(span * 1e-6, span, samples)
    delta = _delta_fn(cf, b, tol)
    out: list[tuple[float, float, bool]] = []
    for off in offsets:
        y0 = lo + float(off)
        try:
            out.append((y0, delta(y0), True))
        except (NoReturn, ToleranceFailure):
            out.append((y0, math.nan, False))
    result = []
    for i, (y0, d, ok) in enumerate(out):
        dprime = math.nan
        if ok:
            # central grid difference where neighbours are usable
            lo_i = i - 1 if i > 0 and out[i - 1][2] else i
            hi_i = i + 1 if i + 1 < len(out) and out[i + 1][2] else i
            if hi_i > lo_i:
                dprime = (out[hi_i][1] - out[lo_i][1]) / (out[hi_i][0] - out[lo_i][0])
        result.append(DisplacementSample(y0=y0, delta=d, delta_prime=dprime, inside_domain=ok))
    return result


def find_cycles(
    cf: CanonicalForm,
    b: Fraction | float,
    scan: list[DisplacementSample],
    tol: float = 1e-12,
) -> CycleSet:
    """Bracket and refine the sign changes of the scanned displacement."""
    b = float(b)
    valid = [s for s in scan if s.inside_domain]
    if not valid:
        return CycleSet(zeros=(), count=0)
    y_scale = max(abs(s.y0) for s in valid)
    amp = max(abs(s.delta) for s in valid)
    # a continuum of periodic orbits leaves only integrator noise behind
    flat = sum(1 for s in valid if abs(s.delta) < 1e-10 * max(1.0, y_scale))
    if flat >= 0.9 * len(valid):
        return CycleSet(zeros=(), count=0, continuum=True)

    delta = _delta_fn(cf, float(b), tol)
    roots: list[float] = []
    for s0, s1 in zip(valid, valid[1:]):
        if s0.delta == 0.0:
            roots.append(s0.y0)
            continue
        if s0.delta * s1.delta < 0:
            r = brentq(delta, s0.y0, s1.y0, xtol=1e-13, rtol=8.9e-16)
            roots.append(float(r))
    if valid[-1].delta == 0.0:
        roots.append(valid[-1].y0)

    roots.sort()
    merge_eps = 1e-6 * max(1.0, y_scale)
    zeros: list[tuple[float, str, str]] = []
    i = 0
    while i < len(roots):
        cluster = [roots[i]]
        while i + 1 < len(roots) and roots[i + 1] - cluster[-1] < merge_eps:
            i += 1
            cluster.append(roots[i])
        i += 1
        r = sum(cluster) / len(cluster)
        h = 1e-4 * max(1.0, abs(r))
        try:
            dp = (delta(r + h) - delta(r - h)) / (2 * h)
        except (NoReturn, ToleranceFailure):
            dp = math.nan
        dp_thresh = max(1e-6 * amp / max(1.0, y_scale), 1e-10)
        if len(cluster) > 1 or not math.isfinite(dp) or abs(dp) < dp_thresh:
            flag = "suspected-nonsimple"
            stability = "undetermined"
        else:
            flag = "simple"
            stability = "attracting" if dp < 0 else "repelling"
        zeros.append((r, flag, stability))
    return CycleSet(zeros=tuple(zeros), count=len(zeros))


def sign_consistency_check(cf: CanonicalForm, b: Fraction | float, cycles: CycleSet, F) -> bool:
    """At each simple zero: sign(delta') must equal sign(F_b(y0*, y1*)).

    F is the contact conic in the symmetric coordinates; it is evaluated
    at (y0 + y1, y0 y1), which equals the original F_b at (y0, y1).
    """
    bf = float(b)
    for y0r, flag, stability in cycles.zeros:
        if flag != "simple":
            continue
        y1r = halfmap_eval(cf, "left", y0r, 1e-12)
        val = F.poly(y0r + y1r, y0r * y1r)
        want = "attracting" if val < 0 else "repelling"
        if val == 0 or stability != want:
            return False
    return True
