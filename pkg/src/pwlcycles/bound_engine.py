"""Certified upper bounds on the number of crossing limit cycles.

The pipeline builds the contact conic F and the contact cubic G in the
symmetric-function coordinates (Y0, Y1) = (y0 + y1, y0 * y1), eliminates Y0
by an exact resultant, counts the resultant roots across the nonpositive
axis, classifies the conic via its discriminant, and dispatches the
applicable focus-focus criterion.  All certificates are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import CanonicalForm, HypothesisReport, HypothesisViolation, PWLSystem, check_hypotheses, halfmap_domains, to_canonical
from .polynomials import (
    BiPoly,
    RootCount,
    UniPoly,
    count_roots_with_multiplicity,
    format_rational,
    resultant,
)


class DegenerateElimination(ValueError):
    """The conic has degree 0 in Y0; the resultant route is unavailable."""


class InconclusiveAnalysis(RuntimeError):
    """A step of the analysis cannot be certified for this configuration."""


# conic classes
HYPERBOLA = "hyperbola"
ELLIPSE = "ellipse"
PARABOLA = "parabola"
LINES = "lines"
POINT = "point"
EMPTY = "empty"

# theorem tags for BoundReport.theorem_used
FOCUS_GENERAL = "FocusGeneral_8_minus_ell"
FOCUS_K_PLUS_2 = "FocusCase_k_plus_2"
FOCUS_ONE = "FocusCase2_one"
COROLLARY_SEVEN = "Corollary_seven"
NO_SLIDING_ONE = "NoSlidingOne"
CONVEXITY_TWO = "Convexity_two"
NO_CYCLES = "NoCycles_zero"
GENERAL_NK1 = "General_N_plus_k_plus_1"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ConicF:
    """The contact conic: coefficients m0..m5, assembled polynomial, discriminant."""

    m: tuple[Fraction, ...]
    poly: BiPoly
    delta: Fraction
    b: Fraction


@dataclass(frozen=True)
class CubicG:
    """The contact cubic: coefficients n1..n9 and assembled polynomial."""

    n: tuple[Fraction, ...]
    poly: BiPoly


@dataclass(frozen=True)
class BoundReport:
    theorem_used: str
    upper_bound: int | None
    ell: int | None = None
    k: int | None = None
    N: int | None = None
    conic_class: str | None = None
    certificates: tuple[tuple[str, str], ...] = ()

    @property
    def conclusive(self) -> bool:
        return self.upper_bound is not None


def build_F(cf: CanonicalForm, b: Fraction) -> ConicF:
    """Conic coefficients m0..m5 and the assembled quadratic in (Y0, Y1)."""
    b = Fraction(b)
    aL, aR = cf.a_L, cf.a_R
    TL, TR = cf.T_L, cf.T_R
    DL, DR = cf.D_L, cf.D_R
    m0 = aL**2 * (aR**2 * b + b**3 * DR + aR * b**2 * TR)
    m1 = -(aL**2) * b * (2 * b * DR + aR * TR)
    m2 = (
        -(aR**2) * (b * DL + aL * TL)
        + b * DR * (3 * aL**2 - b**2 * DL + aL * b * TL)
        + aR * (aL**2 - b**2 * DL) * TR
    )
    m3 = aL**2 * b * DR
    m4 = aR**2 * DL - DR * (aL**2 - b**2 * DL + aL * b * TL) + aR * b * DL * TR
    m5 = aL * DR * TL - aR * DL * TR - b * DL * DR
    poly = BiPoly(
        {
            (0, 0): m0,
            (1, 0): m1,
            (0, 1): m2 - 2 * m3,
            (2, 0): m3,
            (1, 1): m4,
            (0, 2): m5,
        }
    )
    delta = (DR * (aL**2 - aL * b * TL + b**2 * DL) + aR**2 * DL + aR * b * DL * TR) ** 2 - 4 * aL**2 * aR**2 * DL * DR
    return ConicF(m=(m0, m1, m2, m3, m4, m5), poly=poly, delta=delta, b=b)


def build_G(cf: CanonicalForm, b: Fraction) -> CubicG:
    """Cubic coefficients n1..n9 and the assembled cubic in (Y0, Y1)."""
    b = Fraction(b)
    aL, aR = cf.a_L, cf.a_R
    TL, TR = cf.T_L, cf.T_R
    DL, DR = cf.D_L, cf.D_R
    n1 = aL**4 * b * (2 * b * DR + aR * TR)
    n2 = -2 * aL**3 * b * (2 * aL * DR + 2 * b * DR * TL + aR * TL * TR)
    n3 = aL**2 * (
        aR**2 * (b * DL + aL * TL)
        + b * DR * (-3 * aL**2 + b**2 * DL - aL * b * TL)
        + aR * (-(aL**2) * TR + b**2 * DL * TR)
    )
    n4 = aL * (
        2 * aL**3 * DR
        + aL**2 * TL * (7 * b * DR + aR * TR)
        - b * DL * TL * (aR**2 + b**2 * DR + aR * b * TR)
        - aL * (-(b**2) * DR * TL**2 + aR**2 * (2 * DL + TL**2) + aR * b * DL * TR)
    )
    n5 = aL**2 * (-(aR**2) * DL + DR * (aL**2 - b**2 * DL + aL * b * TL) - aR * b * DL * TR)
    n6 = 2 * (
        aR**2 * DL * (b * DL + 3 * aL * TL)
        + DR * (b**3 * DL**2 - 2 * aL**3 * TL + aL * b**2 * DL * TL - aL**2 * b * (3 * DL + 2 * TL**2))
        + aR * DL * (-(aL**2) + b**2 * DL + 2 * aL * b * TL) * TR
    )
    n7 = aL * (
        aR**2 * DL * TL
        + DR * TL * (-3 * aL**2 + b**2 * DL - aL * b * TL)
        + aR * DL * (2 * aL + b * TL) * TR
    )
    n8 = (
        -3 * aR**2 * DL**2
        + DR * (-3 * b**2 * DL**2 + aL * b * DL * TL + aL**2 * (3 * DL + 2 * TL**2))
        - aR * DL * (3 * b * DL + 2 * aL * TL) * TR
    )
    n9 = 4 * DL * (b * DL * DR - aL * DR * TL + aR * DL * TR)
    poly = BiPoly(
        {
            (1, 0): n1,
            (0, 1): n2 - 2 * n3,
            (2, 0): n3,
            (1, 1): n4 - 3 * n5,
            (0, 2): n6 - 2 * n7,
            (3, 0): n5,
            (2, 1): n7,
            (1, 2): n8,
            (0, 3): n9,
        }
    )
    return CubicG(n=(n1, n2, n3, n4, n5, n6, n7, n8, n9), poly=poly)


def resultant_R(F: ConicF, G: CubicG) -> UniPoly:
    """Eliminant of the conic and cubic wrt Y0, content-stripped and with
    positive leading coefficient."""
    if F.poly.degree_in(0) <= 0:
        raise DegenerateElimination("conic has degree 0 in Y0")
    res = resultant(F.poly, G.poly, eliminate=0)
    if res.is_zero:
        return res
    res = res.primitive()
    if res.leading < 0:
        res = -res
    return res


def _det3(F: ConicF) -> Fraction:
    """Determinant of the full 3x3 quadratic-form matrix of the conic."""
    m0, m1, _, m3, m4, m5 = F.m
    c1 = F.m[2] - 2 * F.m[3]
    h = Fraction(1, 2)
    a, b_, d = m3, h * m4, m5
    e, f_, g = h * m1, h * c1, m0
    return a * (d * g - f_ * f_) - b_ * (b_ * g - f_ * e) + e * (b_ * f_ - d * e)


def classify_conic(F: ConicF) -> str:
    """Conic class of the zero set of the contact quadratic."""
    m0, m1, _, m3, m4, m5 = F.m
    c1 = F.m[2] - 2 * F.m[3]
    if m3 == 0 and m4 == 0 and m5 == 0:
        if m1 == 0 and c1 == 0:
            return EMPTY if m0 != 0 else LINES
        return LINES
    delta = m4 * m4 - 4 * m3 * m5
    det3 = _det3(F)
    if delta > 0:
        return HYPERBOLA if det3 != 0 else LINES
    if delta < 0:
        if det3 == 0:
            return POINT
        # definite quadratic part: real ellipse iff the extremal value has the
        # opposite sign of the definiteness
        den = 4 * m3 * m5 - m4 * m4
        y0c = (-2 * m5 * m1 + m4 * c1) / den
        y1c = (m4 * m1 - 2 * m3 * c1) / den
        val = F.poly(y0c, y1c)
        return ELLIPSE if (val > 0) != (m3 > 0) else EMPTY
    # delta == 0 with a nonzero quadratic part
    if det3 != 0:
        return PARABOLA
    # rank-one quadratic part: restrict to a transverse line and count roots
    if m3 != 0:
        qa, qb, qc = m3, m1, m0
    else:  # then m4 == 0 and m5 != 0
        qa, qb, qc = m5, c1, m0
    disc = qb * qb - 4 * qa * qc
    return LINES if disc >= 0 else EMPTY


def _axis_crossings(F: ConicF) -> int:
    """Number of real solutions of F(Y0, 0) = 0 (the Y1 = 0 axis)."""
    m0, m1, _, m3, _, _ = F.m
    q = UniPoly.from_coeffs([m0, m1, m3])
    if q.is_zero:
        raise InconclusiveAnalysis("the conic contains the Y1 = 0 axis")
    if q.degree == 0:
        return 0
    if q.degree == 1:
        return 1
    disc = m1 * m1 - 4 * m3 * m0
    return 2 if disc > 0 else (1 if disc == 0 else 0)


def count_noncompact_in_H(F: ConicF, cf: CanonicalForm) -> int:
    """Upper bound on noncompact connected components of the conic inside the
    open half-plane Y1 < 0."""
    cls = classify_conic(F)
    if cls in (ELLIPSE, POINT, EMPTY):
        return 0
    if cf.D_R == 0:
        raise InconclusiveAnalysis("D_R = 0: the axis-intersection analysis is unavailable")
    crossings = _axis_crossings(F)
    # a_L != 0 and D_L > 0 pin a known curve point at Y1 = a_L^2 / D_L > 0
    pinned_above = cf.a_L != 0 and cf.D_L > 0
    if cls == PARABOLA:
        if crossings > 0:
            return 1
        return 0 if pinned_above else 1
    if cls == HYPERBOLA:
        if crossings == 0 and pinned_above:
            return 1
        return 2
    # degenerate line configurations: safe upper bound
    if crossings == 0 and pinned_above:
        return 1
    return 2


def _root_counts(R: UniPoly) -> RootCount:
    return count_roots_with_multiplicity(R)


def _condition_p(cf: CanonicalForm, F: ConicF) -> tuple[bool, list[tuple[str, str]]]:
    certs: list[tuple[str, str]] = []
    if F.delta < 0:
        certs.append(("discriminant_negative_at_b_star", format_rational(F.delta)))
        return True, certs
    if F.delta == 0 and cf.D_L != 0 and cf.D_R != 0:
        critical_b = (cf.a_L * cf.D_R * cf.T_L - cf.a_R * cf.D_L * cf.T_R) / (2 * cf.D_L * cf.D_R)
        if cf.b_star == critical_b and cf.a_L * cf.a_R < 0:
            certs.append(("discriminant_zero_at_critical_b", format_rational(critical_b)))
            certs.append(
                ("second_derivative_sign_negative", format_rational(8 * cf.a_L * cf.a_R))
            )
            return True, certs
    return False, certs


def apply_focus_criteria(cf: CanonicalForm, R: UniPoly, F: ConicF, N: int | None) -> BoundReport:
    """Dispatch the focus-focus criteria; returns the minimum applicable bound."""
    if not (cf.is_focus("left") and cf.is_focus("right")):
        raise HypothesisViolation("focus criteria need T^2 - 4D < 0 on both sides")
    conic_class = classify_conic(F)
    certs: list[tuple[str, str]] = [
        ("discriminant_at_b_star", format_rational(F.delta)),
        ("conic_class", conic_class),
    ]

    p_holds, p_certs = _condition_p(cf, F)
    if p_holds:
        certs.extend(p_certs)
        certs.append(("condition_P", "single-cycle criterion fired"))
        return BoundReport(
            theorem_used=FOCUS_ONE,
            upper_bound=1,
            N=N,
            conic_class=conic_class,
            certificates=tuple(certs),
        )

    candidates: list[tuple[int, str]] = [(7, COROLLARY_SEVEN)]
    ell = None
    k = None
    if not R.is_zero:
        rc = _root_counts(R)
        k = rc.negative + rc.zero
        ell = rc.positive + rc.nonreal
        certs.append(
            (
                "resultant_root_counts",
                f"negative={rc.negative} zero={rc.zero} positive={rc.positive} nonreal={rc.nonreal}",
            )
        )
        certs.append(("resultant", str(R)))
        candidates.append((8 - ell, FOCUS_GENERAL))
        if R.degree == 6:
            candidates.append((k + 2, FOCUS_K_PLUS_2))
            certs.append(("resultant_degree_six_leading", format_rational(R.leading)))
    else:
        certs.append(("resultant_identically_zero", "shared factor between conic and cubic"))

    # prefer the most specific tag on ties
    priority = {FOCUS_K_PLUS_2: 0, FOCUS_GENERAL: 1, COROLLARY_SEVEN: 2}
    bound, tag = min(candidates, key=lambda c: (c[0], priority[c[1]]))
    certs.append(("fired_criteria", "; ".join(f"{t}->{b}" for b, t in sorted(candidates))))
    return BoundReport(
        theorem_used=tag,
        upper_bound=bound,
        ell=ell,
        k=k,
        N=N,
        conic_class=conic_class,
        certificates=tuple(certs),
    )


def bound_from_canonical(cf: CanonicalForm, report: HypothesisReport | None = None) -> BoundReport:
    """Run the bounding pipeline from the canonical parameters."""
    if report is None:
        report = check_hypotheses(cf)
    if not report.ok:
        reason = "transversality fails" if not report.transversality_ok else "half-map existence fails"
        return BoundReport(
            theorem_used=NO_CYCLES,
            upper_bound=0,
            certificates=(("no_limit_cycles", reason),),
        )
    if cf.b_star == 0:
        return BoundReport(
            theorem_used=NO_SLIDING_ONE,
            upper_bound=1,
            certificates=(("b_star_zero", "no sliding set: at most one limit cycle"),),
        )
    focus_focus = cf.is_focus("left") and cf.is_focus("right")
    if focus_focus:
        if cf.a_L * cf.a_R == 0:
            return BoundReport(
                theorem_used=CONVEXITY_TWO,
                upper_bound=2,
                certificates=(
                    ("degenerate_offset", f"a_L={format_rational(cf.a_L)} a_R={format_rational(cf.a_R)}"),
                    ("convex_half_maps", "one half-map affine: at most two intersections"),
                ),
            )
        F = build_F(cf, cf.b_star)
        G = build_G(cf, cf.b_star)
        try:
            R = resultant_R(F, G)
        except DegenerateElimination as exc:
            return BoundReport(
                theorem_used=INCONCLUSIVE,
                upper_bound=None,
                certificates=(("degenerate_elimination", str(exc)),),
            )
        try:
            N = count_noncompact_in_H(F, cf)
        except InconclusiveAnalysis:
            N = None
        return apply_focus_criteria(cf, R, F, N)
    return _general_branch(cf)


def _general_branch(cf: CanonicalForm) -> BoundReport:
    """Non-focus route: only fires on machine-checkable premises (rootless
    boundary quadratics and the unbounded-interval flag pattern)."""
    dl, dr = halfmap_domains(cf)
    rootless_left = cf.a_L != 0 and cf.T_L**2 - 4 * cf.D_L < 0
    rootless_right = cf.a_R != 0 and cf.T_R**2 - 4 * cf.D_R < 0
    pattern = not dl.y_at_lambda_negative and not dr.y_at_lambda_negative
    if not (rootless_left and rootless_right and pattern):
        return BoundReport(
            theorem_used=INCONCLUSIVE,
            upper_bound=None,
            certificates=(
                (
                    "separating_solution_unverified",
                    "a bespoke domain construction would be required for this configuration",
                ),
            ),
        )
    F = build_F(cf, cf.b_star)
    G = build_G(cf, cf.b_star)
    try:
        R = resultant_R(F, G)
        N = count_noncompact_in_H(F, cf)
    except (DegenerateElimination, InconclusiveAnalysis) as exc:
        return BoundReport(
            theorem_used=INCONCLUSIVE,
            upper_bound=None,
            certificates=(("degenerate_general_route", str(exc)),),
        )
    if R.is_zero or R.degree != 6:
        return BoundReport(
            theorem_used=INCONCLUSIVE,
            upper_bound=None,
            certificates=(("resultant_degree_drop", str(R)),),
        )
    rc = _root_counts(R)
    k = rc.negative + rc.zero
    return BoundReport(
        theorem_used=GENERAL_NK1,
        upper_bound=N + k + 1,
        k=k,
        N=N,
        conic_class=classify_conic(F),
        certificates=(
            ("persistence", "certified under simple-root persistence"),
            ("resultant", str(R)),
        ),
    )


def dispatch_bound(sys: PWLSystem) -> BoundReport:
    """Full pipeline from the raw two-zone system."""
    try:
        cf = to_canonical(sys)
    except TangentSeparationLine:
        return BoundReport(
            theorem_used=NO_CYCLES,
            upper_bound=0,
            certificates=(("no_limit_cycles", "no transversal crossing of the separation line"),),
        )
    return bound_from_canonical(cf, check_hypotheses(cf, sys))


from .canonical import TangentSeparationLine  # noqa: E402  (dispatch_bound dependency)
