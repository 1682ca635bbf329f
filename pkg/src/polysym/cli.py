"""Command line pipeline: ``python -m polysym <command> ...``.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 guard exceeded.
"""
from __future__ import annotations

import argparse
import csv
import glob
import io
import logging
import statistics
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from .binpack import TABLE1, benchmark, build_model, load_instance, save_instance, size_boundaries
from .breakers import PROFILES, Template, attach, load_family, make_family, save_family
from .lpwriter import export_lp
from .manifest import RunManifest, run_manifest
from .perm import generators
from .solver import compare, write_stats_csv
from .verify import (
    DEFAULT_ORBIT_GUARD,
    DEFAULT_POINT_GUARD,
    GuardExceeded,
    VerificationReport,
    check_fundamental_region,
    check_symmetry,
    theorem1_witness,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_GUARD = 0, 1, 2, 3

log = logging.getLogger("polysym")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bench(args) -> int:
    items = args.items or TABLE1[args.classes][0]
    inst = benchmark(args.classes, args.seed, args.capacity, items)
    save_instance(inst, args.out)
    log.info("wrote %s (%d items, sizes %d..%d)", args.out, inst.m, inst.sizes[0], inst.sizes[-1])
    return EXIT_OK


def cmd_breakers(args) -> int:
    inst = load_instance(args.instance)
    profile = PROFILES[args.profile]
    if args.perms is not None:
        profile = profile.scaled(perm_count=args.perms)
    if args.vars is not None:
        profile = profile.scaled(target_vars=args.vars)
    if args.product_length is not None:
        profile = profile.scaled(generator_product_length=args.product_length)
    fam = make_family(inst, Template(args.template), profile, args.seed)
    side = save_family(fam, args.out)
    log.info("kept %d of %d breakers -> %s, %s", fam.kept, fam.drawn, args.out, side)
    return EXIT_OK


def cmd_emit(args) -> int:
    model = build_model(load_instance(args.instance))
    if args.family:
        model = attach(model, load_family(args.family))
    export_lp(model, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    model = build_model(inst)
    report = VerificationReport({"points": args.guard, "orbit": args.orbit_guard})
    iid = inst.instance_id
    guard_hit = False
    gens = generators(inst.layout, size_boundaries(inst))
    try:
        for t, g in enumerate(gens):
            report.add(f"symmetry[{t}]", check_symmetry(g, model, args.guard), iid)
    except GuardExceeded as exc:
        report.add("symmetry", "guard_exceeded", iid, detail=str(exc))
        guard_hit = True
    fam = load_family(args.family) if args.family else None
    if fam is not None:
        try:
            w = theorem1_witness(model, fam, args.guard)
            report.add("theorem1", w is not None or not fam.breakers, iid, fam.seed, witness=w)
        except GuardExceeded as exc:
            report.add("theorem1", "guard_exceeded", iid, fam.seed, detail=str(exc))
            guard_hit = True
    if args.fundamental:
        h = fam.base if fam is not None and len(fam.base) else None
        if h is None:
            raise UsageError("--fundamental needs a family with a stored base polynomial")
        try:
            rep = check_fundamental_region(gens or [], h, args.samples, np.random.default_rng(args.seed), args.orbit_guard)
            report.add("fundamental_region", rep.passed, iid, args.seed, **rep.to_dict())
        except (GuardExceeded, ValueError) as exc:
            report.add("fundamental_region", "guard_exceeded", iid, args.seed, detail=str(exc))
            guard_hit = True
    _emit_text(report.to_json(), args.out)
    if report.failed:
        return EXIT_VERIFY
    return EXIT_GUARD if guard_hit else EXIT_OK


def cmd_solve(args) -> int:
    model = build_model(load_instance(args.instance))
    fams = [load_family(f) for f in args.family or []]
    rows = compare(model, fams, args.node_limit)
    _emit_text(write_stats_csv(rows), args.out)
    return EXIT_OK


def aggregate(paths) -> str:
    """Relative node counts per template x profile, one summary row each."""
    groups: dict[tuple[str, str], list[float]] = defaultdict(list)
    for path in paths:
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                groups[(row["template"], row["profile"])].append(float(row["relative_nodes_pct"]))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["template", "profile", "runs", "mean_pct", "median_pct", "min_pct", "max_pct"])
    for (t, p), vals in sorted(groups.items()):
        w.writerow([t, p, len(vals), f"{statistics.fmean(vals):.2f}", f"{statistics.median(vals):.2f}", f"{min(vals):.2f}", f"{max(vals):.2f}"])
    return buf.getvalue()


def cmd_report(args) -> int:
    paths = sorted(glob.glob(args.glob))
    if not paths:
        raise UsageError(f"no files match {args.glob!r}")
    _emit_text(aggregate(paths), args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    manifest = RunManifest.read(args.manifest)
    written = run_manifest(manifest, args.out_dir)
    for k, v in written.items():
        log.info("%s: %s", k, v)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polysym", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bench", help="generate a near half-capacity instance")
    b.add_argument("--classes", type=int, choices=sorted(TABLE1), required=True)
    b.add_argument("--items", type=int)
    b.add_argument("--capacity", type=int, default=100)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bench)

    k = sub.add_parser("breakers", help="generate a breaker family")
    k.add_argument("--instance", required=True)
    k.add_argument("--template", choices=[t.value for t in Template], required=True)
    k.add_argument("--profile", choices=sorted(PROFILES), required=True)
    k.add_argument("--seed", type=int, required=True)
    k.add_argument("--perms", type=int, help="override the profile's permutation count")
    k.add_argument("--vars", type=int, help="override the profile's target variable count")
    k.add_argument("--product-length", type=int)
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_breakers)

    e = sub.add_parser("emit", help="write the model (plus breakers) as an LP file")
    e.add_argument("--instance", required=True)
    e.add_argument("--family")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_emit)

    v = sub.add_parser("verify", help="brute-force symmetry / breaker checks")
    v.add_argument("--instance", required=True)
    v.add_argument("--family")
    v.add_argument("--fundamental", action="store_true")
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--guard", type=int, default=DEFAULT_POINT_GUARD)
    v.add_argument("--orbit-guard", type=int, default=DEFAULT_ORBIT_GUARD)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="branch and bound with and without breakers")
    s.add_argument("--instance", required=True)
    s.add_argument("--family", action="append")
    s.add_argument("--node-limit", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("report", help="aggregate stats CSVs per template and profile")
    r.add_argument("--glob", required=True)
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)

    m = sub.add_parser("run", help="replay a run manifest")
    m.add_argument("--manifest", required=True)
    m.add_argument("--out-dir", required=True)
    m.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"polysym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, ValueError) as exc:
        print(f"polysym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
