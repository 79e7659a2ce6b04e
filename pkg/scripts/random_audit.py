#!/usr/bin/env python3
"""Randomized self-audit of the algebraic pipeline.

Draws random focus-focus canonical forms and checks, exactly:
  - the contact conic and cubic vanish at the known curve point,
  - the eliminant vanishes at the known ordinate,
  - every certified bound lies in [1, 7],
  - a negative discriminant always yields the single-cycle bound.

Usage: python3 scripts/random_audit.py [--draws N] [--seed S]
"""

import argparse
import random
import sys
from fractions import Fraction as F

from pwlcycles import bound_from_canonical
from pwlcycles.bound_engine import FOCUS_ONE, build_F, build_G, resultant_R
from pwlcycles.canonical import CanonicalForm


def random_focus_cf(rng: random.Random) -> CanonicalForm:
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


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    failures = 0
    single = 0
    for i in range(args.draws):
        cf = random_focus_cf(rng)
        Fc = build_F(cf, cf.b_star)
        Gc = build_G(cf, cf.b_star)
        Y0 = cf.a_L * cf.T_L / cf.D_L
        Y1 = cf.a_L**2 / cf.D_L
        if Fc.poly(Y0, Y1) != 0 or Gc.poly(Y0, Y1) != 0:
            print(f"draw {i}: known-point identity failed for {cf}")
            failures += 1
            continue
        R = resultant_R(Fc, Gc)
        if not R.is_zero and R(Y1) != 0:
            print(f"draw {i}: eliminant misses the known ordinate for {cf}")
            failures += 1
            continue
        report = bound_from_canonical(cf)
        if not report.conclusive or not 1 <= report.upper_bound <= 7:
            print(f"draw {i}: bound {report.upper_bound} out of range for {cf}")
            failures += 1
            continue
        if Fc.delta < 0:
            single += 1
            if report.theorem_used != FOCUS_ONE or report.upper_bound != 1:
                print(f"draw {i}: negative discriminant without single-cycle bound for {cf}")
                failures += 1
    print(f"{args.draws} draws, {failures} failures, {single} single-cycle certificates")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
