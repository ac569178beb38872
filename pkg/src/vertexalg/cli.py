"""Batch front end: validate algebra files, reconstruct tables, verify
the results, and export the built-in demonstration models.

Exit codes: 0 all checks pass; 1 a conclusive check failed;
2 a reconstruction hypothesis or uniqueness violation; 3 usage or
format error; 4 nothing failed but some checks were inconclusive at
the cutoff.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import chiral as ch
from . import conformal as cf
from . import models as md
from . import polyharm as ph
from . import reconstruct as rc
from . import serialize as io
from .errors import (ContractError, FormatError, HypothesisViolation,
                     StructureError, UniquenessViolation)
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, ReportSet
from .scalar import ONE, ZERO

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_HYPOTHESIS = 2
EXIT_USAGE = 3
EXIT_INCONCLUSIVE = 4


def _emit(doc, out):
    text = io.canonical_dumps(doc) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fail_usage(message):
    sys.stderr.write(json.dumps({"error": message}) + "\n")
    return EXIT_USAGE


def _load_spec(path):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return doc, io.spec_from_json(doc)


def _exit_for(reports: ReportSet) -> int:
    if reports.any_fail:
        return EXIT_FAIL
    if reports.any_inconclusive:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def cmd_validate(args) -> int:
    try:
        doc, (dim, space, rep, table) = _load_spec(args.path)
    except FormatError as exc:
        return _fail_usage(str(exc))
    reports = cf.validate_rep(rep)
    reports.extend(ch.check_translation(table))
    reports.extend(ch.check_c1d_action(table, rep))
    _emit(io.report_to_json(reports), args.out)
    return _exit_for(reports)


def cmd_reconstruct(args) -> int:
    if args.dim % 2 or args.dim < 2:
        return _fail_usage("the reconstruction dimension must be a positive even integer")
    try:
        doc, (dim, space, rep, table) = _load_spec(args.path)
    except FormatError as exc:
        return _fail_usage(str(exc))
    if dim != args.dim:
        return _fail_usage(f"file declares dimension {dim}, requested {args.dim}")
    if args.cutoff is not None:
        dim, space, rep, table = io.truncate_model(dim, space, rep, table, 2 * args.cutoff)
    if not args.force:
        reports = cf.validate_rep(rep)
        if reports.any_fail:
            _emit(io.report_to_json(reports), None)
            return EXIT_HYPOTHESIS
    try:
        if args.solver == "projection" or (args.solver == "auto" and dim == 2):
            mud = rc.reconstruct_d2(table, rep)
        else:
            mud = rc.reconstruct_general(table, rep, dim, jobs=args.jobs)
    except (HypothesisViolation, UniquenessViolation) as exc:
        sys.stderr.write(json.dumps({"error": str(exc),
                                     "reason": type(exc).__name__}) + "\n")
        return EXIT_HYPOTHESIS
    _emit(io.mud_to_json(mud, io.sha256_of(doc)), args.out)
    return EXIT_PASS


SUITES = ("restriction", "parity", "poles", "covariance", "locality", "all")


def run_suites(mud, table, rep, suites, dsum_max=None):
    reports = ReportSet()
    space = mud.space
    if "parity" in suites:
        reports.add(rc.check_parity(mud))
        reports.add(rc.check_degree_law(mud))
    if "restriction" in suites:
        reports.add(rc.check_restriction(mud, table))
    if "poles" in suites:
        reports.add(rc.check_pole_bounds(mud, rep))
    if "covariance" in suites:
        reports.extend(rc.check_covariance_D(mud, rep))
    if "locality" in suites:
        bound2 = dsum_max if dsum_max is not None else mud.cutoff2 // 2
        for d2a in space.grades():
            for i in range(space.dim(d2a)):
                for d2b in space.grades():
                    if (d2a + d2b) // 2 > bound2:
                        continue
                    for j in range(space.dim(d2b)):
                        avec = [ONE if t == i else ZERO
                                for t in range(space.dim(d2a))]
                        bvec = [ONE if t == j else ZERO
                                for t in range(space.dim(d2b))]
                        n = rc.pole_bound(rep, d2a, avec, d2b, bvec)
                        rep_loc = rc.check_locality_D(mud, d2a, avec, d2b, bvec, n)
                        rep_loc.name = f"locality_{d2a}.{i}_{d2b}.{j}"
                        reports.add(rep_loc)
    return reports


def cmd_check(args) -> int:
    try:
        spec_doc, (dim, space, rep, table) = _load_spec(args.spec)
        table_doc = json.loads(Path(args.table).read_text())
        mud = io.mud_from_json(space, table_doc)
    except (FormatError, OSError, json.JSONDecodeError) as exc:
        return _fail_usage(str(exc))
    want = mud.meta.get("input_sha256", "")
    if want and want != io.sha256_of(spec_doc):
        return _fail_usage("table was built from a different algebra file (hash mismatch)")
    suites = set(SUITES[:-1]) if args.suite == "all" else {args.suite}
    reports = run_suites(mud, table, rep, suites, args.dsum_max)
    _emit(io.report_to_json(reports), args.out)
    return _exit_for(reports)


def _demo_tensor2d(cutoff, outdir, jobs):
    model = md.build_tensor_2d(cutoff)
    doc = io.spec_to_json(2, model.space, model.rep, model.table, "tensor2d")
    _emit(doc, outdir / "spec.json")
    reports = cf.validate_rep(model.rep)
    reports.extend(ch.check_translation(model.table))
    reports.extend(ch.check_c1d_action(model.table, model.rep))
    mud = rc.reconstruct_d2(model.table, model.rep)
    _emit(io.mud_to_json(mud, io.sha256_of(doc)), outdir / "mud.json")
    reports.extend(run_suites(mud, model.table, model.rep,
                              {"parity", "restriction", "poles", "covariance"}))
    return reports, [outdir / "spec.json", outdir / "mud.json"]


def _demo_heisenberg(cutoff, outdir, jobs):
    model = md.build_heisenberg(cutoff)
    doc = io.spec_to_json(1, model.space, model.rep, model.table, "heisenberg")
    _emit(doc, outdir / "spec.json")
    reports = ch.check_translation(model.table)
    reports.extend(ch.check_c1d_action(model.table, model.rep))
    d2a, alpha = model.state_vector((1,))
    rep_loc, n = ch.check_locality_1d(model.table, d2a, alpha, d2a, alpha)
    reports.add(rep_loc)
    return reports, [outdir / "spec.json"]


def _demo_gegenbauer4(cutoff, outdir, jobs):
    mmax = max(1, cutoff)
    table, rep, expected = md.build_gegenbauer4(mmax)
    doc = io.spec_to_json(4, rep.space, rep, table, "gegenbauer4")
    _emit(doc, outdir / "spec.json")
    mud = rc.reconstruct_general(table, rep, 4, jobs=jobs)
    _emit(io.mud_to_json(mud, io.sha256_of(doc)), outdir / "mud.json")
    reports = ReportSet()
    reports.add(rc.check_parity(mud))
    reports.add(rc.check_restriction(mud, table))
    bad = []
    for (m, sigma), want in expected.items():
        got = mud.mu_matrix(0, 0, m, m, sigma)
        if got != want:
            bad.append((m, sigma))
    reports.add(CheckReport(
        "evaluation_family",
        FAIL if bad else PASS,
        window=f"degrees 1..{mmax}",
        witnesses=bad[:5],
        details="solver output equals the tautological evaluation family",
    ))
    bad = []
    for m in range(0, mmax + 1):
        if ph.equivariant_line_extension(4, m) != ph.gegenbauer_h(4, m):
            bad.append(m)
    reports.add(CheckReport(
        "line_extension_gegenbauer",
        FAIL if bad else PASS,
        window=f"degrees 0..{mmax}",
        witnesses=bad,
        details="the equivariant extension of the line data is the "
                "distinguished invariant harmonic",
    ))
    for m in range(1, min(mmax, 3) + 1):
        reports.add(rc.isotypic_crosscheck(table, rep, mud, 0, 0, m))
    return reports, [outdir / "spec.json", outdir / "mud.json"]


DEMOS = {
    "heisenberg": _demo_heisenberg,
    "tensor2d": _demo_tensor2d,
    "gegenbauer4": _demo_gegenbauer4,
}


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        return _fail_usage(f"unknown demo {args.name!r}; choices: {sorted(DEMOS)}")
    outdir = Path(args.out or args.name)
    outdir.mkdir(parents=True, exist_ok=True)
    reports, files = DEMOS[args.name](args.cutoff, outdir, args.jobs)
    _emit(io.report_to_json(reports), outdir / "report.json")
    sys.stdout.write(json.dumps({
        "files": [str(f) for f in files + [outdir / 'report.json']],
        "summary": reports.to_dict()["summary"],
    }, sort_keys=True) + "\n")
    return _exit_for(reports)


def cmd_export(args) -> int:
    if args.name == "heisenberg":
        model = md.build_heisenberg(args.cutoff)
        doc = io.spec_to_json(1, model.space, model.rep, model.table, "heisenberg")
    elif args.name == "tensor2d":
        model = md.build_tensor_2d(args.cutoff)
        doc = io.spec_to_json(2, model.space, model.rep, model.table, "tensor2d")
    elif args.name == "gegenbauer4":
        table, rep, _ = md.build_gegenbauer4(max(1, args.cutoff))
        doc = io.spec_to_json(4, rep.space, rep, table, "gegenbauer4")
    else:
        return _fail_usage(f"unknown model {args.name!r}")
    _emit(doc, args.out)
    return EXIT_PASS


def build_parser():
    p = argparse.ArgumentParser(
        prog="vertexalg",
        description="exact vertex-algebra reconstruction and verification",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check every reconstruction hypothesis")
    v.add_argument("path")
    v.add_argument("--out")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("reconstruct", help="build the D-dimensional table")
    r.add_argument("path")
    r.add_argument("--dim", type=int, required=True)
    r.add_argument("--cutoff", type=int)
    r.add_argument("--out")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--solver", choices=("auto", "projection", "general"), default="auto")
    r.add_argument("--force", action="store_true",
                   help="reconstruct even if hypothesis validation fails")
    r.set_defaults(func=cmd_reconstruct)

    c = sub.add_parser("check", help="verify a reconstructed table")
    c.add_argument("table")
    c.add_argument("spec")
    c.add_argument("--suite", choices=SUITES, default="all")
    c.add_argument("--dsum-max", type=int, dest="dsum_max")
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("demo", help="build a named model and verify everything")
    d.add_argument("name")
    d.add_argument("--cutoff", type=int, default=2)
    d.add_argument("--out")
    d.add_argument("--jobs", type=int, default=1)
    d.set_defaults(func=cmd_demo)

    e = sub.add_parser("export", help="write a built-in model as an algebra file")
    e.add_argument("name")
    e.add_argument("--cutoff", type=int, default=2)
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ContractError, StructureError) as exc:
        return _fail_usage(str(exc))
    except (HypothesisViolation, UniquenessViolation) as exc:
        sys.stderr.write(json.dumps({"error": str(exc),
                                     "reason": type(exc).__name__}) + "\n")
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
