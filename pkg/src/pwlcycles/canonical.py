"""Canonical Liénard parameters of a two-zone piecewise linear system.

The raw system is two affine planar vector fields glued along the vertical
line x = 0.  Everything limit-cycle-relevant reduces to seven rational
parameters: the traces and determinants of the two matrices, the two offset
parameters a_L, a_R, and the boundary offset b_star.  This module computes
those parameters exactly, checks the standing hypotheses, and derives the
exact interval data of the two Poincaré half-maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polynomials import UniPoly, isolate_real_roots, refine_interval

Mat2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
Vec2 = tuple[Fraction, Fraction]


class TangentSeparationLine(ValueError):
    """a12_L * a12_R <= 0: no transversal crossing, hence no limit cycles."""


class HypothesisViolation(ValueError):
    """An operation was called outside its validity regime."""


@dataclass(frozen=True)
class PWLSystem:
    """Raw two-zone system: left/right matrices and offset vectors."""

    A_L: Mat2
    b_L: Vec2
    A_R: Mat2
    b_R: Vec2

    @staticmethod
    def from_rows(A_L, b_L, A_R, b_R) -> "PWLSystem":
        def mat(rows) -> Mat2:
            return tuple(tuple(Fraction(v) for v in row) for row in rows)  # type: ignore[return-value]

        def vec(vals) -> Vec2:
            return tuple(Fraction(v) for v in vals)  # type: ignore[return-value]

        return PWLSystem(mat(A_L), vec(b_L), mat(A_R), vec(b_R))


@dataclass(frozen=True)
class CanonicalForm:
    """Liénard parameters: traces, determinants, offsets, boundary shift."""

    T_L: Fraction
    D_L: Fraction
    a_L: Fraction
    T_R: Fraction
    D_R: Fraction
    a_R: Fraction
    b_star: Fraction

    def side(self, side: str) -> tuple[Fraction, Fraction, Fraction]:
        """(trace, determinant, offset) for "left" or "right"."""
        if side == "left":
            return self.T_L, self.D_L, self.a_L
        if side == "right":
            return self.T_R, self.D_R, self.a_R
        raise ValueError(f"unknown side {side!r}")

    def is_focus(self, side: str) -> bool:
        T, D, _ = self.side(side)
        return T * T - 4 * D < 0


@dataclass(frozen=True)
class HypothesisReport:
    """Exact verdicts on transversality and the half-map existence conditions."""

    transversality_ok: bool
    left_ok: bool
    right_ok: bool
    left_kind: str  # "focus" | "nonfocus"
    right_kind: str

    @property
    def ok(self) -> bool:
        return self.transversality_ok and self.left_ok and self.right_ok


def to_canonical(sys: PWLSystem) -> CanonicalForm:
    """Exact Liénard parameters; requires a transversal separation line."""
    a12_L = sys.A_L[0][1]
    a12_R = sys.A_R[0][1]
    if a12_L * a12_R <= 0:
        raise TangentSeparationLine(
            "a12_L * a12_R <= 0: no transversal crossing periodic orbits exist"
        )
    a22_L = sys.A_L[1][1]
    a22_R = sys.A_R[1][1]
    return CanonicalForm(
        T_L=sys.A_L[0][0] + sys.A_L[1][1],
        D_L=sys.A_L[0][0] * sys.A_L[1][1] - sys.A_L[0][1] * sys.A_L[1][0],
        a_L=a12_L * sys.b_L[1] - a22_L * sys.b_L[0],
        T_R=sys.A_R[0][0] + sys.A_R[1][1],
        D_R=sys.A_R[0][0] * sys.A_R[1][1] - sys.A_R[0][1] * sys.A_R[1][0],
        a_R=(a12_L / a12_R) * (a12_R * sys.b_R[1] - a22_R * sys.b_R[0]),
        b_star=a12_L * sys.b_R[0] / a12_R - sys.b_L[0],
    )


def check_hypotheses(cf: CanonicalForm, sys: PWLSystem | None = None) -> HypothesisReport:
    """Evaluate transversality and the half-map existence disjunctions exactly.

    With no raw system (canonical override input) transversality is taken as
    granted, since the canonical form only exists on that premise.
    """
    if sys is None:
        transversal = True
    else:
        transversal = sys.A_L[0][1] * sys.A_R[0][1] > 0
    left_ok = (cf.a_L <= 0 and 4 * cf.D_L - cf.T_L**2 > 0) or cf.a_L > 0
    right_ok = (cf.a_R >= 0 and 4 * cf.D_R - cf.T_R**2 > 0) or cf.a_R < 0
    return HypothesisReport(
        transversality_ok=transversal,
        left_ok=left_ok,
        right_ok=right_ok,
        left_kind="focus" if cf.is_focus("left") else "nonfocus",
        right_kind="focus" if cf.is_focus("right") else "nonfocus",
    )


@dataclass(frozen=True)
class AlgebraicRoot:
    """A real root of a rational polynomial pinned by an isolating interval."""

    poly: UniPoly
    lo: Fraction
    hi: Fraction

    def refined(self, width: Fraction) -> "AlgebraicRoot":
        lo, hi = refine_interval(self.poly, self.lo, self.hi, width)
        return AlgebraicRoot(self.poly, lo, hi)

    def __float__(self) -> float:
        r = self.refined(Fraction(1, 10**17))
        return float((r.lo + r.hi) / 2)


@dataclass(frozen=True)
class HalfMapDomain:
    """Exact interval data of one Poincaré half-map.

    mu is the right endpoint of the definition interval (None = +inf), mu1
    the left endpoint of the image interval (None = -inf); both are roots of
    the quadratic wpoly.  The two flags say whether the left endpoint of the
    definition interval is strictly positive, and whether the image of that
    endpoint is strictly negative; they are mutually exclusive.
    """

    side: str
    wpoly: UniPoly
    mu: AlgebraicRoot | None
    mu1: AlgebraicRoot | None
    lambda_positive: bool
    y_at_lambda_negative: bool


def w_polynomial(T: Fraction, D: Fraction, a: Fraction) -> UniPoly:
    """W(y) = D y^2 - a T y + a^2."""
    return UniPoly.from_coeffs([a * a, -a * T, D])


def _signed_roots(w: UniPoly) -> tuple[AlgebraicRoot | None, AlgebraicRoot | None]:
    """(smallest strictly positive root, largest strictly negative root)."""
    if w.is_zero or w.degree <= 0:
        return None, None
    sf = w.squarefree_part()
    roots = []
    for lo, hi in isolate_real_roots(sf):
        lo, hi = refine_interval(sf, lo, hi, Fraction(1, 1024))
        # shrink until the interval has a definite sign (the root y=0 only
        # occurs for a == 0, where W = D y^2 and 0 is its sole root)
        while lo < 0 < hi:
            lo, hi = refine_interval(sf, lo, hi, (hi - lo) / 4)
            if lo == hi:
                break
        roots.append(AlgebraicRoot(sf, lo, hi))
    positive = [r for r in roots if r.lo > 0 or (r.lo == r.hi and r.lo > 0)]
    negative = [r for r in roots if r.hi < 0 or (r.lo == r.hi and r.lo < 0)]
    mu = positive[0] if positive else None
    mu1 = negative[-1] if negative else None
    return mu, mu1


def halfmap_domains(cf: CanonicalForm, report: HypothesisReport | None = None) -> tuple[HalfMapDomain, HalfMapDomain]:
    """Exact half-map interval data for both sides; needs the hypotheses."""
    if report is None:
        report = check_hypotheses(cf)
    if not report.ok:
        raise HypothesisViolation("half-maps are not defined: hypotheses fail")
    out = []
    for side in ("left", "right"):
        T, D, a = cf.side(side)
        w = w_polynomial(T, D, a)
        mu, mu1 = _signed_roots(w)
        focusy = 4 * D - T * T > 0
        if side == "left":
            lam_pos = a < 0 and focusy and T < 0
            y_lam_neg = a < 0 and focusy and T > 0
        else:
            lam_pos = a > 0 and focusy and T > 0
            y_lam_neg = a > 0 and focusy and T < 0
        out.append(
            HalfMapDomain(
                side=side,
                wpoly=w,
                mu=mu,
                mu1=mu1,
                lambda_positive=lam_pos,
                y_at_lambda_negative=y_lam_neg,
            )
        )
    return out[0], out[1]
