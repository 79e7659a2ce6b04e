"""Exact univariate / bivariate polynomial algebra over the rationals.

Everything here is pure and exact: coefficients are ``fractions.Fraction``,
no floating point enters any computation.  The module provides the root
counting machinery (Sturm chains, Descartes bounds, square-free
decomposition, Descartes-bisection root isolation) and bivariate
resultants via fraction-free elimination on the Sylvester matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]
Endpoint = Union[int, float, Fraction]  # float only as +-inf sentinel

NEG_INF = float("-inf")
POS_INF = float("inf")


class ZeroPolynomial(ValueError):
    """Raised when an operation needs a nonzero polynomial."""


class NotSquareFree(ValueError):
    """Raised when a square-free polynomial is required."""


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", "p" or an exact decimal literal ("0.038" -> 19/500)."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def from_coeffs(coeffs: Iterable[Scalar]) -> "UniPoly":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return UniPoly(tuple(cs))

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly(())

    @staticmethod
    def constant(c: Scalar) -> "UniPoly":
        return UniPoly.from_coeffs([c])

    @staticmethod
    def x() -> "UniPoly":
        return UniPoly.from_coeffs([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return UniPoly.from_coeffs(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero or other.is_zero:
            return UniPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly.from_coeffs(out)

    def scale(self, c: Scalar) -> "UniPoly":
        c = Fraction(c)
        if c == 0:
            return UniPoly.zero()
        return UniPoly(tuple(a * c for a in self.coeffs))

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x**k."""
        if self.is_zero:
            return self
        return UniPoly((Fraction(0),) * k + self.coeffs)

    def derivative(self) -> "UniPoly":
        return UniPoly.from_coeffs(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        lc = other.leading
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            factor = rem[-1] / lc
            q[k] = factor
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= factor * c
            rem.pop()
        return UniPoly.from_coeffs(q), UniPoly.from_coeffs(rem)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ValueError("exact division has nonzero remainder")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        if a.is_zero:
            return a
        return a.monic()

    def primitive(self) -> "UniPoly":
        """Divide by the gcd of the coefficients, keeping the sign."""
        if self.is_zero:
            return self
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = math.lcm(den, c.denominator)
        return self.scale(Fraction(den, num))

    def squarefree_part(self) -> "UniPoly":
        if self.is_zero:
            raise ZeroPolynomial("square-free part of the zero polynomial")
        g = self.gcd(self.derivative())
        if g.degree <= 0:
            return self
        return self.exact_div(g)

    def squarefree_decomposition(self) -> list[tuple["UniPoly", int]]:
        """Yun's algorithm: returns [(q_i, i)] with self == lc * prod q_i**i."""
        if self.is_zero:
            raise ZeroPolynomial("decomposition of the zero polynomial")
        p = self.monic()
        if p.degree == 0:
            return []
        out: list[tuple[UniPoly, int]] = []
        dp = p.derivative()
        a = p.gcd(dp)
        b = p.exact_div(a)
        c = dp.exact_div(a)
        d = c - b.derivative()
        i = 1
        while b.degree > 0:
            a = b.gcd(d)
            if a.degree > 0:
                out.append((a, i))
            b = b.exact_div(a)
            c = d.exact_div(a)
            d = c - b.derivative()
            i += 1
        return out

    def compose_neg(self) -> "UniPoly":
        """p(-x)."""
        return UniPoly(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def cauchy_bound(self) -> Fraction:
        """All real roots lie in (-B, B)."""
        if self.is_zero:
            raise ZeroPolynomial("root bound of the zero polynomial")
        lc = abs(self.leading)
        mx = max((abs(c) for c in self.coeffs[:-1]), default=Fraction(0))
        return 1 + mx / lc

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = format_rational(c)
            if i == 1:
                term += "*x"
            elif i > 1:
                term += f"*x^{i}"
            parts.append(term)
        return " + ".join(parts)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_at(p: UniPoly, x: Endpoint) -> int:
    if p.is_zero:
        return 0
    if x == POS_INF:
        return _sign(p.leading)
    if x == NEG_INF:
        return _sign(p.leading) * (-1 if p.degree % 2 else 1)
    return _sign(p(Fraction(x)))


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a * b < 0)


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    """Canonical Sturm chain of a square-free p, with content removal."""
    chain = [p.primitive(), p.derivative().primitive()]
    while not chain[-1].is_zero:
        rem = chain[-2].divmod(chain[-1])[1]
        if rem.is_zero:
            break
        chain.append((-rem).primitive())
    return chain


def sturm_count(p: UniPoly, lo: Endpoint = NEG_INF, hi: Endpoint = POS_INF) -> int:
    """Distinct real roots of p in the half-open interval (lo, hi]."""
    if p.is_zero:
        raise ZeroPolynomial("Sturm count of the zero polynomial")
    if not _endpoint_lt(lo, hi):
        raise ValueError("need lo < hi")
    sf = p.squarefree_part()
    if sf.degree <= 0:
        return 0
    chain = sturm_chain(sf)
    v_lo = _variations([_sign_at(q, lo) for q in chain])
    v_hi = _variations([_sign_at(q, hi) for q in chain])
    return v_lo - v_hi


def _endpoint_lt(lo: Endpoint, hi: Endpoint) -> bool:
    if lo == NEG_INF:
        return hi != NEG_INF
    if hi == POS_INF:
        return lo != POS_INF
    return Fraction(lo) < Fraction(hi)


def descartes_positive_bound(p: UniPoly) -> int:
    """Sign changes in the coefficient sequence: an upper bound, with matching
    parity, on the number of positive real roots counted with multiplicity."""
    if p.is_zero:
        raise ZeroPolynomial("Descartes bound of the zero polynomial")
    return _variations([_sign(c) for c in p.coeffs])


@dataclass(frozen=True)
class RootCount:
    """Real/nonreal root counts of a polynomial, with multiplicity."""

    negative: int
    zero: int
    positive: int
    nonreal: int

    @property
    def total(self) -> int:
        return self.negative + self.zero + self.positive + self.nonreal


def count_roots_with_multiplicity(p: UniPoly) -> RootCount:
    """Multiplicity-aware counts over the sign regions of the real axis.

    The zero-root multiplicity is read off the trailing zero coefficients;
    the remaining factor is split square-free and each factor Sturm-counted.
    """
    if p.is_zero:
        raise ZeroPolynomial("root count of the zero polynomial")
    coeffs = list(p.coeffs)
    zero_mult = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zero_mult += 1
    core = UniPoly.from_coeffs(coeffs)
    neg = pos = 0
    for factor, mult in core.squarefree_decomposition():
        neg += mult * sturm_count(factor, NEG_INF, 0)
        pos += mult * sturm_count(factor, 0, POS_INF)
    return RootCount(
        negative=neg,
        zero=zero_mult,
        positive=pos,
        nonreal=p.degree - neg - zero_mult - pos,
    )


# ---------------------------------------------------------------------------
# Descartes-bisection root isolation (independent of the Sturm machinery)
# ---------------------------------------------------------------------------


def _variations_on_interval(p: UniPoly, a: Fraction, b: Fraction) -> int:
    """Descartes variation bound on the roots of p in the open interval (a, b)."""
    # q(x) = p(a + (b-a) x) maps (0,1) onto (a,b); the Moebius reversal
    # x -> 1/(1+x) then maps (0,inf) onto (0,1).
    n = p.degree
    q = _dilate(_taylor_shift(p, a), b - a)
    rev = UniPoly.from_coeffs(list(q.coeffs[::-1]) + [Fraction(0)] * (n + 1 - len(q.coeffs)))
    return descartes_positive_bound(_taylor_shift(rev, Fraction(1)))


def _dilate(p: UniPoly, s: Fraction) -> UniPoly:
    """p(s*x)."""
    return UniPoly.from_coeffs(c * s**i for i, c in enumerate(p.coeffs))


def _taylor_shift(p: UniPoly, h: Fraction) -> UniPoly:
    """p(x + h) by repeated synthetic division."""
    if h == 0 or p.is_zero:
        return p
    return UniPoly.from_coeffs(_shift_coeffs(list(p.coeffs), h))


def _shift_coeffs(coeffs: list[Fraction], h: Fraction) -> list[Fraction]:
    out = list(coeffs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += out[j + 1] * h
    return out


def isolate_real_roots(p: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint ordered closed intervals, each holding exactly one real root.

    Requires a square-free input (raises NotSquareFree otherwise).  Exact
    rational roots found along the way come back as zero-width intervals.
    """
    if p.is_zero:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    if p.gcd(p.derivative()).degree > 0:
        raise NotSquareFree("input has repeated roots")
    if p.degree == 0:
        return []
    bound = p.cauchy_bound()
    out: list[tuple[Fraction, Fraction]] = []
    # Stack entries carry their own polynomial: exact rational roots hit at a
    # bisection point are recorded as zero-width intervals and deflated out,
    # so endpoints passed down are never roots.
    stack = [(p, -bound, bound)]
    while stack:
        q, a, b = stack.pop()
        v = _variations_on_interval(q, a, b)
        if v == 0:
            continue
        if v == 1:
            out.append(_shrink_off_roots(p, q, a, b))
            continue
        m = (a + b) / 2
        if q(m) == 0:
            out.append((m, m))
            q = q.exact_div(UniPoly.from_coeffs([-m, 1]))
        stack.append((q, a, m))
        stack.append((q, m, b))
    out.sort(key=lambda iv: iv[0])
    return out


def _shrink_off_roots(p: UniPoly, q: UniPoly, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating bracket of q until no endpoint is a root of p.

    Deflated exact roots sit at bisection points, so a fresh bracket may have
    one of them as an endpoint; shrinking keeps the tracked root interior.
    """
    sa = _sign(q(a))
    while p(a) == 0 or p(b) == 0:
        m = (a + b) / 2
        sm = _sign(q(m))
        if sm == 0:
            return m, m
        if sm == sa:
            a = m
        else:
            b = m
    return a, b


def refine_interval(p: UniPoly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of p until it is narrower than width."""
    if lo == hi:
        return lo, hi
    slo = _sign(p(lo))
    shi = _sign(p(hi))
    if slo == 0 or shi == 0 or slo == shi:
        raise ValueError("not a sign-change bracket")
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = _sign(p(mid))
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


# ---------------------------------------------------------------------------
# bivariate polynomials
# ---------------------------------------------------------------------------


class BiPoly:
    """Sparse bivariate polynomial; keys are (deg_x, deg_y)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction]):
        self.terms = {k: Fraction(v) for k, v in terms.items() if v != 0}

    @staticmethod
    def zero() -> "BiPoly":
        return BiPoly({})

    @staticmethod
    def constant(c: Scalar) -> "BiPoly":
        return BiPoly({(0, 0): Fraction(c)})

    @staticmethod
    def var(index: int) -> "BiPoly":
        return BiPoly({(1, 0) if index == 0 else (0, 1): Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                key = (i + k, j + l)
                out[key] = out.get(key, Fraction(0)) + a * b
        return BiPoly(out)

    def scale(self, c: Scalar) -> "BiPoly":
        c = Fraction(c)
        return BiPoly({k: v * c for k, v in self.terms.items()})

    def __call__(self, x, y):
        acc = 0
        for (i, j), c in self.terms.items():
            if isinstance(x, float) or isinstance(y, float):
                acc += float(c) * x**i * y**j
            else:
                acc += c * x**i * y**j
        return acc

    def degree_in(self, var: int) -> int:
        if self.is_zero:
            return -1
        return max(k[var] for k in self.terms)

    @property
    def total_degree(self) -> int:
        if self.is_zero:
            return -1
        return max(i + j for i, j in self.terms)

    def partial(self, var: int) -> "BiPoly":
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self.terms.items():
            e = (i, j)[var]
            if e == 0:
                continue
            key = (i - 1, j) if var == 0 else (i, j - 1)
            out[key] = out.get(key, Fraction(0)) + e * c
        return BiPoly(out)

    def coeffs_in(self, var: int) -> list[UniPoly]:
        """Coefficients wrt var, lowest degree first, as UniPoly in the other var."""
        d = self.degree_in(var)
        if d < 0:
            return []
        buckets: list[dict[int, Fraction]] = [dict() for _ in range(d + 1)]
        for (i, j), c in self.terms.items():
            main, other = (i, j) if var == 0 else (j, i)
            buckets[main][other] = buckets[main].get(other, Fraction(0)) + c
        out = []
        for bucket in buckets:
            n = max(bucket, default=-1) + 1
            cs = [Fraction(0)] * n
            for e, c in bucket.items():
                cs[e] = c
            out.append(UniPoly.from_coeffs(cs))
        return out

    def substitute_uni(self, x_poly: UniPoly, y_poly: UniPoly) -> UniPoly:
        """Evaluate at univariate polynomial arguments."""
        acc = UniPoly.zero()
        for (i, j), c in self.terms.items():
            term = UniPoly.constant(c)
            for _ in range(i):
                term = term * x_poly
            for _ in range(j):
                term = term * y_poly
            acc = acc + term
        return acc

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms):
            c = self.terms[(i, j)]
            mono = "".join(
                [f"*x^{i}" if i > 1 else ("*x" if i == 1 else ""),
                 f"*y^{j}" if j > 1 else ("*y" if j == 1 else "")])
            parts.append(format_rational(c) + mono)
        return " + ".join(parts)


def sylvester_matrix(f: BiPoly, g: BiPoly, eliminate: int) -> list[list[UniPoly]]:
    fc = f.coeffs_in(eliminate)[::-1]  # highest degree first
    gc = g.coeffs_in(eliminate)[::-1]
    m = len(fc) - 1
    n = len(gc) - 1
    size = m + n
    zero = UniPoly.zero()
    rows: list[list[UniPoly]] = []
    for k in range(n):
        rows.append([zero] * k + fc + [zero] * (size - m - 1 - k))
    for k in range(m):
        rows.append([zero] * k + gc + [zero] * (size - n - 1 - k))
    return rows


def _bareiss_det(matrix: list[list[UniPoly]]) -> UniPoly:
    """Fraction-free (Bareiss) determinant of a matrix with UniPoly entries."""
    m = [row[:] for row in matrix]
    n = len(m)
    sign = 1
    prev = UniPoly.constant(1)
    for i in range(n - 1):
        if m[i][i].is_zero:
            pivot_row = next((r for r in range(i + 1, n) if not m[r][i].is_zero), None)
            if pivot_row is None:
                return UniPoly.zero()
            m[i], m[pivot_row] = m[pivot_row], m[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                num = m[i][i] * m[r][c] - m[r][i] * m[i][c]
                m[r][c] = num.exact_div(prev)
            m[r][i] = UniPoly.zero()
        prev = m[i][i]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant(f: BiPoly, g: BiPoly, eliminate: int) -> UniPoly:
    """Exact resultant wrt one variable, as a UniPoly in the other.

    Computed by fraction-free elimination on the Sylvester matrix, which
    keeps every intermediate value a polynomial (no rational-function
    arithmetic) and matches the Sylvester determinant sign convention.
    """
    if f.is_zero or g.is_zero:
        raise ZeroPolynomial("resultant of the zero polynomial")
    if f.degree_in(eliminate) <= 0 or g.degree_in(eliminate) <= 0:
        raise ValueError("both inputs need positive degree in the eliminated variable")
    return _bareiss_det(sylvester_matrix(f, g, eliminate))
