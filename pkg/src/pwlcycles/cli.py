"""Command line interface: certified bounds, numerical verification, dumps.

Input is a JSON descriptor holding either the raw matrices or a canonical
override (exactly one of the two).  All certificate output is exact
rational strings; floats appear only in numeric-verification fields and
are printed with 17 significant digits.

Exit codes: 0 conclusive, 1 malformed input, 2 hypothesis violation,
3 inconclusive bound, 4 observed cycles exceed the certified bound.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bound_engine import BoundReport, bound_from_canonical, build_F, build_G, resultant_R
from .canonical import (
    CanonicalForm,
    HypothesisViolation,
    PWLSystem,
    TangentSeparationLine,
    check_hypotheses,
    to_canonical,
)
from .halfmaps import (
    CycleSet,
    default_y0_max,
    displacement_scan,
    find_cycles,
    sign_consistency_check,
)
from .polynomials import format_rational, parse_rational

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_HYPOTHESIS = 2
EXIT_INCONCLUSIVE = 3
EXIT_COUNT_MISMATCH = 4

CANONICAL_KEYS = ("T_L", "D_L", "a_L", "T_R", "D_R", "a_R", "b_star")


class MalformedDescriptor(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class SystemDescriptor:
    name: str
    system: PWLSystem | None
    canonical: CanonicalForm | None
    raw: dict


def _fmt_float(x: float) -> str:
    return "%.17g" % x


def load_descriptor(path: Path) -> SystemDescriptor:
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedDescriptor(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedDescriptor(f"{path}: descriptor must be a JSON object")
    name = raw.get("name", path.stem)
    has_matrices = any(k in raw for k in ("A_L", "A_R", "b_L", "b_R"))
    has_canonical = "canonical" in raw
    if has_matrices == has_canonical:
        raise MalformedDescriptor(
            f"{path}: exactly one of the matrix block and the canonical override is required"
        )
    try:
        if has_matrices:
            mats = {}
            for key, shape in (("A_L", 2), ("A_R", 2), ("b_L", 1), ("b_R", 1)):
                val = raw[key]
                if shape == 2:
                    mats[key] = [[parse_rational(v) for v in row] for row in val]
                    if len(mats[key]) != 2 or any(len(r) != 2 for r in mats[key]):
                        raise MalformedDescriptor(f"{path}: {key} must be 2x2")
                else:
                    mats[key] = [parse_rational(v) for v in val]
                    if len(mats[key]) != 2:
                        raise MalformedDescriptor(f"{path}: {key} must have length 2")
            system = PWLSystem.from_rows(mats["A_L"], mats["b_L"], mats["A_R"], mats["b_R"])
            return SystemDescriptor(name=name, system=system, canonical=None, raw=raw)
        can = raw["canonical"]
        missing = [k for k in CANONICAL_KEYS if k not in can]
        if missing:
            raise MalformedDescriptor(f"{path}: canonical override lacks {missing}")
        cf = CanonicalForm(**{k: parse_rational(can[k]) for k in CANONICAL_KEYS})
        return SystemDescriptor(name=name, system=None, canonical=cf, raw=raw)
    except MalformedDescriptor:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise MalformedDescriptor(f"{path}: {exc}") from exc


def _canonical_json(cf: CanonicalForm) -> dict:
    return {k: format_rational(getattr(cf, k)) for k in CANONICAL_KEYS}


def _bound_json(rep: BoundReport) -> dict:
    return {
        "theorem_used": rep.theorem_used,
        "upper_bound": rep.upper_bound,
        "ell": rep.ell,
        "k": rep.k,
        "N": rep.N,
        "conic_class": rep.conic_class,
        "certificates": [list(c) for c in rep.certificates],
    }


def _cycles_json(cycles: CycleSet) -> dict:
    return {
        "count": cycles.count,
        "continuum": cycles.continuum,
        "zeros": [
            {"y0_root": _fmt_float(y0), "multiplicity_flag": flag, "stability": stab}
            for y0, flag, stab in cycles.zeros
        ],
        "stability_convention": "delta' < 0 at a root means attracting",
    }


def analyze(desc: SystemDescriptor) -> tuple[CanonicalForm | None, dict, BoundReport | None, int]:
    """Canonical form, report skeleton, bound report, exit code."""
    t0 = time.perf_counter()
    report: dict = {"name": desc.name, "tool_version": __version__, "descriptor": desc.raw}
    if desc.system is not None:
        try:
            cf = to_canonical(desc.system)
        except TangentSeparationLine as exc:
            report["canonical_form"] = None
            report["hypotheses"] = {"transversality_ok": False, "detail": str(exc)}
            report["bound"] = _bound_json(
                BoundReport(
                    theorem_used="NoCycles_zero",
                    upper_bound=0,
                    certificates=(("no_limit_cycles", str(exc)),),
                )
            )
            report["timing_seconds"] = _fmt_float(time.perf_counter() - t0)
            return None, report, None, EXIT_OK
        hyp = check_hypotheses(cf, desc.system)
    else:
        cf = desc.canonical
        hyp = check_hypotheses(cf)
    bound = bound_from_canonical(cf, hyp)
    report["canonical_form"] = _canonical_json(cf)
    report["hypotheses"] = {
        "transversality_ok": hyp.transversality_ok,
        "left_ok": hyp.left_ok,
        "right_ok": hyp.right_ok,
        "left_kind": hyp.left_kind,
        "right_kind": hyp.right_kind,
    }
    report["bound"] = _bound_json(bound)
    report["timing_seconds"] = _fmt_float(time.perf_counter() - t0)
    code = EXIT_OK if bound.conclusive else EXIT_INCONCLUSIVE
    return cf, report, bound, code


def _print_bound_summary(name: str, report: dict) -> None:
    b = report["bound"]
    if b["upper_bound"] is None:
        print(f"{name}: inconclusive ({b['theorem_used']})")
        return
    extras = []
    if b["k"] is not None:
        extras.append(f"k={b['k']}")
    if b["ell"] is not None:
        extras.append(f"ell={b['ell']}")
    if b["N"] is not None:
        extras.append(f"N={b['N']}")
    tail = f" ({', '.join(extras)})" if extras else ""
    print(f"{name}: upper bound {b['upper_bound']} via {b['theorem_used']}{tail}")


def _write_json(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def cmd_bound(path: Path, json_path: str | None) -> int:
    desc = load_descriptor(path)
    cf, report, bound, code = analyze(desc)
    _print_bound_summary(desc.name, report)
    if json_path:
        _write_json(report, json_path)
    return code


def cmd_verify(path: Path, json_path: str | None, y0_max, tol, samples) -> int:
    desc = load_descriptor(path)
    cf, report, bound, code = analyze(desc)
    if cf is None:
        # no transversal crossing: nothing to verify, certified zero stands
        report["verification"] = {"observed_count": 0, "certified_bound": 0, "exact": True}
        _print_bound_summary(desc.name, report)
        print(f"{desc.name}: observed 0, certified 0 (exact count established)")
        if json_path:
            _write_json(report, json_path)
        return code
    hyp = check_hypotheses(cf, desc.system)
    if not hyp.ok:
        report["verification"] = {"observed_count": 0, "certified_bound": 0, "exact": True}
        _print_bound_summary(desc.name, report)
        print(f"{desc.name}: half-maps undefined, certified 0 (exact count established)")
        if json_path:
            _write_json(report, json_path)
        return code
    if y0_max is None:
        y0_max = default_y0_max(cf)
    t0 = time.perf_counter()
    scan = displacement_scan(cf, cf.b_star, y0_max=y0_max, samples=samples, tol=tol)
    cycles = find_cycles(cf, cf.b_star, scan, tol=tol)
    consistent = True
    if cycles.count and cf.a_L * cf.a_R != 0:
        consistent = sign_consistency_check(cf, cf.b_star, cycles, build_F(cf, cf.b_star))
    certified = bound.upper_bound
    exact = certified is not None and cycles.count == certified
    report["verification"] = {
        "observed_count": cycles.count,
        "certified_bound": certified,
        "exact": exact,
        "sign_consistency": consistent,
        "cycles": _cycles_json(cycles),
        "y0_max": _fmt_float(float(y0_max)),
        "samples": samples,
        "tol": _fmt_float(tol),
        "timing_seconds": _fmt_float(time.perf_counter() - t0),
    }
    _print_bound_summary(desc.name, report)
    label = " (exact count established)" if exact else ""
    cont = " [continuum of periodic orbits]" if cycles.continuum else ""
    print(f"{desc.name}: observed {cycles.count}, certified {certified}{label}{cont}")
    if json_path:
        _write_json(report, json_path)
    if certified is not None and cycles.count > certified:
        print(f"{desc.name}: ERROR observed count exceeds the certified bound", file=sys.stderr)
        return EXIT_COUNT_MISMATCH
    return code


def _bipoly_coeff_strings(poly) -> dict:
    return {f"Y0^{i} Y1^{j}": format_rational(c) for (i, j), c in sorted(poly.terms.items())}


def cmd_emit(path: Path, csv_path: str | None, json_path: str | None, y0_max, tol, samples) -> int:
    desc = load_descriptor(path)
    cf, report, bound, code = analyze(desc)
    if cf is None:
        print(f"{desc.name}: no transversal crossing, nothing to emit")
        return code
    F = build_F(cf, cf.b_star)
    G = build_G(cf, cf.b_star)
    R = resultant_R(F, G)
    dump = {
        "F_coefficients": _bipoly_coeff_strings(F.poly),
        "G_coefficients": _bipoly_coeff_strings(G.poly),
        "resultant_coefficients": [format_rational(c) for c in R.coeffs],
        "discriminant": format_rational(F.delta),
    }
    report["algebraic_dump"] = dump
    if csv_path:
        hyp = check_hypotheses(cf, desc.system)
        if not hyp.ok:
            print(f"{desc.name}: half-maps undefined, no scan emitted", file=sys.stderr)
        else:
            if y0_max is None:
                y0_max = default_y0_max(cf)
            scan = displacement_scan(cf, cf.b_star, y0_max=y0_max, samples=samples, tol=tol)
            try:
                with open(csv_path, "w", newline="") as fh:
                    w = csv.writer(fh, lineterminator="\n")
                    w.writerow(["y0", "delta", "delta_prime", "inside_domain"])
                    for s in scan:
                        w.writerow(
                            [
                                _fmt_float(s.y0),
                                _fmt_float(s.delta),
                                _fmt_float(s.delta_prime),
                                str(s.inside_domain).lower(),
                            ]
                        )
            except OSError as exc:
                print(f"cannot write {csv_path}: {exc}", file=sys.stderr)
                return EXIT_MALFORMED
    try:
        _write_json(report, json_path)
    except OSError as exc:
        print(f"cannot write {json_path}: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    return code


def _iter_paths(target: Path):
    if target.is_dir():
        yield from sorted(target.glob("*.json"))
    else:
        yield target


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="pwlcycles",
        description="Certified limit-cycle bounds for two-zone piecewise linear systems",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", type=Path, help="descriptor file or directory of descriptors")
    common.add_argument("--json", dest="json_path", default=None, help="write the JSON report here")

    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--y0-max", dest="y0_max", type=float, default=None)
    numeric.add_argument("--tol", type=float, default=1e-12)
    numeric.add_argument("--samples", type=int, default=192)

    sub.add_parser("bound", parents=[common], help="compute the certified upper bound")
    sub.add_parser("verify", parents=[common, numeric], help="bound plus numerical cycle count")
    emit_p = sub.add_parser("emit", parents=[common, numeric], help="emit scan CSV and exact dumps")
    emit_p.add_argument("--csv", dest="csv_path", default=None, help="write the displacement CSV here")

    args = ap.parse_args(argv)
    worst = EXIT_OK
    try:
        for path in _iter_paths(args.path):
            if args.command == "bound":
                code = cmd_bound(path, args.json_path)
            elif args.command == "verify":
                code = cmd_verify(path, args.json_path, args.y0_max, args.tol, args.samples)
            else:
                code = cmd_emit(path, args.csv_path, args.json_path, args.y0_max, args.tol, args.samples)
            worst = max(worst, code)
    except MalformedDescriptor as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MALFORMED
    except HypothesisViolation as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_HYPOTHESIS
    return worst


if __name__ == "__main__":
    sys.exit(main())
