#!/usr/bin/env python3
"""Analyze every descriptor in systems/: certified bound plus numerical count.

Usage: python3 scripts/run_examples.py [--skip-numerics] [systems_dir]
"""

import argparse
import sys
import time
from pathlib import Path

from pwlcycles.bound_engine import build_F
from pwlcycles.canonical import check_hypotheses
from pwlcycles.cli import analyze, load_descriptor
from pwlcycles.halfmaps import displacement_scan, find_cycles, sign_consistency_check


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("systems_dir", nargs="?", default=Path(__file__).resolve().parent.parent / "systems", type=Path)
    ap.add_argument("--skip-numerics", action="store_true")
    ap.add_argument("--samples", type=int, default=192)
    args = ap.parse_args()

    for path in sorted(args.systems_dir.glob("*.json")):
        desc = load_descriptor(path)
        t0 = time.perf_counter()
        cf, report, bound, code = analyze(desc)
        line = f"{desc.name}: "
        b = report["bound"]
        if b["upper_bound"] is None:
            line += f"inconclusive ({b['theorem_used']})"
        else:
            line += f"bound {b['upper_bound']} via {b['theorem_used']}"
        if cf is not None and not args.skip_numerics and check_hypotheses(cf).ok:
            scan = displacement_scan(cf, cf.b_star, samples=args.samples)
            cycles = find_cycles(cf, cf.b_star, scan)
            line += f"; observed {cycles.count}"
            if cycles.continuum:
                line += " (continuum)"
            if cycles.count and cf.a_L * cf.a_R != 0:
                consistent = sign_consistency_check(cf, cf.b_star, cycles, build_F(cf, cf.b_star))
                line += f"; stability signs {'consistent' if consistent else 'INCONSISTENT'}"
        line += f"  [{time.perf_counter() - t0:.1f}s]"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
