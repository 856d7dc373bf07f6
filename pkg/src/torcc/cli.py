"""Command-line front end: validation, skeleton export, hom tables, verification.

Inputs are stacky-fan JSON files (or fixture names resolved through
``TORCC_FIXTURES``).  Reports are canonical JSON with rationals rendered
as reduced "p/q" strings; tables go to stdout as tab-separated rows.
Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .coherent import DivisorData, GenObject, hom_basis, line_bundle_cohomology
from .fans import StackyFan, build_skeleton
from .fixtures import fixture_dir
from .verify import SUITE_CHECK_NAMES, kappa_generator, run_suite
from .sheafops import torus_hom


def _load_input(ref: str) -> tuple[StackyFan, str]:
    path = Path(ref)
    if not path.exists():
        candidate = fixture_dir() / (ref + ".json")
        if candidate.exists():
            path = candidate
        else:
            raise FileNotFoundError("no such input file or fixture: %s" % ref)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(
            "parse error in %s at line %d column %d: %s"
            % (path, exc.lineno, exc.colno, exc.msg)
        ) from exc
    return StackyFan.from_json_dict(data), path.stem


def _emit_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _frac_str(x) -> str:
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def cmd_validate(args) -> int:
    sf, _name = _load_input(args.input)
    report = sf.validate_condition()
    _emit_json(report.to_dict(), args.out)
    if report.valid:
        print("valid stacky fan", file=sys.stderr)
        return 0
    issue = report.first_issue()
    print("invalid: [%s] %s" % (issue.clause, issue.detail), file=sys.stderr)
    return 1


def cmd_skeleton(args) -> int:
    sf, _name = _load_input(args.input)
    report = sf.validate_condition()
    if not report.valid:
        issue = report.first_issue()
        print("invalid input: [%s] %s" % (issue.clause, issue.detail), file=sys.stderr)
        return 1
    sk = build_skeleton(sf)
    if args.svg:
        if sk.n > 2:
            print(
                "svg export refused: skeleton figures need rank <= 2",
                file=sys.stderr,
            )
        else:
            from .figures import render_skeleton_svg

            render_skeleton_svg(sk, args.svg)
    _emit_json(sk.to_dict(), args.out)
    return 0


def _generators(sf: StackyFan):
    gens = []
    for sigma in sf.fan.cones:
        data = sf.m_sigma(sigma)
        for coset in data.group.elements():
            gens.append(GenObject(sf, sigma, coset))
    return gens


def cmd_homs(args) -> int:
    sf, _name = _load_input(args.input)
    gens = _generators(sf)
    if args.pairs:
        pairs = []
        for pair_ref in args.pairs:
            try:
                i, j = (int(x) for x in pair_ref.split(","))
                pairs.append((gens[i], gens[j]))
            except (ValueError, IndexError):
                print("unknown pair id %r (have %d generators)" % (pair_ref, len(gens)),
                      file=sys.stderr)
                return 2
    else:
        pairs = [
            (a, b) for a in gens for b in gens if b.sigma.is_face_of(a.sigma)
        ]
    window = args.window
    out_radius = window + 2
    rows = []
    table_json = {}
    all_match = True
    for a, b in pairs:
        delta = tuple(Fraction(x) - Fraction(y) for x, y in zip(b.chi, a.chi))
        coherent = set(hom_basis(a, b, window + 1).basis)
        f = kappa_generator(a, out_radius + window)
        g = kappa_generator(b, out_radius)
        table = torus_hom(f, g, box_radius=window, out_radius=out_radius)
        key = "g%d->g%d" % (gens.index(a), gens.index(b))
        entry = {}
        for m in _m_box(sf.n_rank, window):
            q = tuple(Fraction(x) - d for x, d in zip(m, delta))
            coh = 1 if q in coherent else 0
            con = table.get(m, {}).get(0, 0)
            match = coh == con
            all_match = all_match and match
            rows.append(
                (
                    key,
                    ",".join(str(x) for x in m),
                    str(coh),
                    str(con),
                    "ok" if match else "MISMATCH",
                )
            )
            if coh or con:
                entry[",".join(str(x) for x in m)] = {"0": con}
        table_json[key] = entry
    sys.stdout.write("pair\tm\tcoherent\tconstructible\tmatch\n")
    for r in rows:
        sys.stdout.write("\t".join(r) + "\n")
    if args.out:
        _emit_json(
            {
                "window": window,
                "generators": [
                    {"rays": [list(r) for r in g.sigma.rays], "coset": list(g.coset)}
                    for g in gens
                ],
                "tables": table_json,
                "all_match": all_match,
            },
            args.out,
        )
    return 0 if all_match else 1


def _m_box(n, radius):
    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(-radius, radius + 1):
            yield from rec(prefix + [v])

    yield from rec([])


def cmd_cohomology(args) -> int:
    sf, _name = _load_input(args.input)
    try:
        coeffs = tuple(int(x) for x in args.divisor.split(","))
        divisor = DivisorData(sf, coeffs)
    except ValueError as exc:
        print("bad divisor: %s" % exc, file=sys.stderr)
        return 2
    coh = line_bundle_cohomology(sf, divisor, window=args.window)
    totals: dict = {}
    sys.stdout.write("m\tdegree\tdim\n")
    for m in sorted(coh):
        for k in sorted(coh[m]):
            sys.stdout.write(
                "%s\t%d\t%d\n" % (",".join(str(x) for x in m), k, coh[m][k])
            )
            totals[k] = totals.get(k, 0) + coh[m][k]
    sys.stdout.write(
        "total\t-\t%s\n"
        % " ".join("h%d=%d" % (k, totals[k]) for k in sorted(totals))
    )
    if args.out:
        _emit_json(
            {
                "divisor": list(coeffs),
                "window": args.window,
                "table": {
                    ",".join(str(x) for x in m): {str(k): v for k, v in d.items()}
                    for m, d in coh.items()
                },
                "totals": {str(k): v for k, v in sorted(totals.items())},
            },
            args.out,
        )
    return 0


def cmd_verify(args) -> int:
    sf, name = _load_input(args.input)
    report = sf.validate_condition()
    if not report.valid:
        issue = report.first_issue()
        print("invalid input: [%s] %s" % (issue.clause, issue.detail), file=sys.stderr)
        return 1
    if args.suite:
        names = [s for group in args.suite for s in group.split(",") if s]
    else:
        names = None
    try:
        result = run_suite(
            sf, names=names, window=args.window, jobs=args.jobs, suite_name=name
        )
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    for check_id in sorted(result.checks):
        check = result.checks[check_id]
        print("%s %s" % ("PASS" if check.ok else "FAIL", check_id))
    _emit_json(result.to_dict(), args.out)
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        from .figures import render_report_figure

        render_report_figure(
            result.to_dict(), os.path.join(args.figures, "verify-%s.svg" % name)
        )
        sk = build_skeleton(sf)
        if sk.n <= 2:
            from .figures import render_skeleton_svg

            render_skeleton_svg(sk, os.path.join(args.figures, "skeleton-%s.svg" % name))
    return 0 if result.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="torcc",
        description="exact workbench for toric-stack lattice data and the dual "
        "polyhedral sheaf calculus",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the combinatorial isomorphism condition")
    v.add_argument("input")
    v.add_argument("--out", default=None, help="write the JSON report here")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("skeleton", help="emit the conic skeleton cells")
    s.add_argument("input")
    s.add_argument("--svg", default=None, help="render the rank<=2 figure to this path")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_skeleton)

    h = sub.add_parser("homs", help="two-sided generator hom tables")
    h.add_argument("input")
    h.add_argument("--pairs", action="append", default=None, metavar="I,J")
    h.add_argument("--window", type=int, default=3)
    h.add_argument("--out", default=None)
    h.set_defaults(func=cmd_homs)

    c = sub.add_parser("cohomology", help="chart cohomology of an invariant divisor")
    c.add_argument("input")
    c.add_argument("--divisor", required=True, metavar="A0,A1,...")
    c.add_argument("--window", type=int, default=5)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_cohomology)

    w = sub.add_parser("verify", help="run the cross-side verification suite")
    w.add_argument("input")
    w.add_argument(
        "--suite",
        action="append",
        default=None,
        help="comma-separated check names (default: all); known: %s"
        % ", ".join(SUITE_CHECK_NAMES),
    )
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--window", type=int, default=3)
    w.add_argument("--out", default=None)
    w.add_argument("--figures", default=None, help="directory for figure export")
    w.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
