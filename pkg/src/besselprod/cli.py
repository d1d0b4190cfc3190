"""Command-line front end: ``bpk <subcommand> ...``.

Exit codes: 0 success, 1 computational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import coeff_db, fourier_bessel, validation
from .asymptotics import calibrate_prefactor, sig4
from .bessel_core import GeneralSolution, bessel_zeros, z_derivative, z_eval
from .coeff_db import BinaryIndex, Database, compute_record, reproduce_table1, worker_count
from .errors import BesselProdError, NotFoundError
from .table1 import ROWS as TABLE1_ROWS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(v):
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return n


def _nonneg(v):
    n = int(v)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return n


def _dump(obj, out):
    json.dump(obj, out, indent=1, sort_keys=True)
    out.write("\n")


# -- subcommands -------------------------------------------------------------

def cmd_eval(args, out):
    sol = GeneralSolution(args.a, args.b)
    f = z_derivative if args.derivative else z_eval
    for x in args.x:
        print(f"{x!r} {f(sol, args.n, args.scale, x)!r}", file=out)
    return EXIT_OK


def cmd_zeros(args, out):
    for p, z in enumerate(bessel_zeros(args.q, args.count), start=1):
        print(f"{p} {float(z)!r}", file=out)
    return EXIT_OK


def cmd_validate(args, out):
    reports = validation.run_suite(args.scope, args.draws, args.seed, worker_count())
    summary = validation.summarize(reports)
    if args.format == "json":
        _dump([r.to_dict() for r in reports], out)
    else:
        for r in summary.failed:
            print(f"FAIL {r.identity_id} draw={r.draw} lhs={r.lhs!r} rhs={r.rhs!r} "
                  f"abs={r.abs_residual:.3e} rel={r.rel_residual:.3e} {r.warning}".rstrip(), file=out)
        for r in summary.warnings:
            print(f"WARN {r.identity_id} draw={r.draw} rel={r.rel_residual:.3e} {r.warning}",
                  file=out)
        worst = {}
        for r in reports:
            if r.passed and r.rel_residual == r.rel_residual:
                worst[r.identity_id] = max(worst.get(r.identity_id, 0.0), r.rel_residual)
        for ident in sorted(worst):
            print(f"{ident:<10} worst rel residual {worst[ident]:.3e}", file=out)
        print(f"{args.scope}: {summary.total} reports, {len(summary.failed)} failed, "
              f"{len(summary.warnings)} warnings (seed {args.seed}, {args.draws} draws)", file=out)
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_table1(args, out):
    rows = reproduce_table1(prefactor=args.prefactor)
    cal = calibrate_prefactor((r.m, r.n, r.p, r.rhs) for r in TABLE1_ROWS)
    ok = all(r.lhs_ok and r.rhs_ok for r in rows) and cal.agrees and not cal.inconsistent
    if args.format == "json":
        _dump({
            "rows": [{"m": r.m, "n": r.n, "p": r.p, "printed_lhs": r.printed_lhs,
                      "printed_rhs": r.printed_rhs, "lhs": r.lhs, "lhs_err": r.lhs_err,
                      "rhs": r.rhs, "method": r.method, "lhs_ok": r.lhs_ok,
                      "rhs_ok": r.rhs_ok, "error": r.error} for r in rows],
            "calibration": {"constant": cal.constant, "lower": cal.lower, "upper": cal.upper,
                            "derived": cal.derived, "agrees": cal.agrees,
                            "inconsistent": [list(k) for k in cal.inconsistent]},
            "ok": ok,
        }, out)
    else:
        print(f"{'m':>4} {'n':>4} {'p':>4}  {'LHS':>10} {'RHS':>10}   "
              f"{'LHS(pr)':>10} {'RHS(pr)':>10}  {'dRHS':>10} {'rel':>6}  flags", file=out)
        for r in rows:
            flags = []
            if not r.lhs_ok:
                flags.append("LHS")
            if not r.rhs_ok:
                flags.append("RHS")
            if r.triangle_violating:
                flags.append("tri")
            if r.error:
                flags.append("conv")
            print(f"{r.m:>4} {r.n:>4} {r.p:>4}  {sig4(r.lhs):>10} {sig4(r.rhs):>10}   "
                  f"{sig4(r.printed_lhs):>10} {sig4(r.printed_rhs):>10}  "
                  f"{r.rhs - r.printed_rhs:>10.2e} {r.rel_error:>6.3f}  {','.join(flags)}",
                  file=out)
        print(cal.report(), file=out)
        print("all bands met" if ok else "some bands not met", file=out)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["m", "n", "p", "lhs", "rhs"])
            for r in rows:
                w.writerow([r.m, r.n, r.p, f"{r.lhs:.17g}", f"{r.rhs:.17g}"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dbgen(args, out):
    db = coeff_db.generate(args.max_mode, q=args.q, threshold=args.threshold,
                           extended_from=args.extended_from, workers=worker_count())
    db.export_csv(args.out)
    if args.index:
        db.write_index(args.index)
    bad = db.audit()
    print(f"wrote {len(db)} records to {args.out}", file=out)
    if db.fallbacks:
        print(f"{len(db.fallbacks)} records fell back to the asymptotic form", file=out)
    if bad:
        print(f"audit: {len(bad)} records violate the derived relations", file=out)
        return EXIT_FAIL
    return EXIT_OK


def _format_record(r):
    return (f"q={r.q} m={r.m} n={r.n} p={r.p} c000={r.c000!r} c110={r.c110!r} "
            f"d111={r.d111!r} abs_err={r.abs_err:.3e} method={r.method}")


def cmd_dbquery(args, out):
    if args.db is None:
        rec, _ = compute_record(args.q, args.m, args.n, args.p)
        rec = rec.oriented(args.m, args.n, args.p)
    else:
        path = Path(args.db)
        src = Database.import_csv(path) if path.suffix.lower() == ".csv" else BinaryIndex(path)
        try:
            rec = src.lookup(args.q, args.m, args.n, args.p)
        except NotFoundError as exc:
            print(f"not found: {exc.key} ({exc.reason})", file=sys.stderr)
            return EXIT_FAIL
    print(_format_record(rec), file=out)
    return EXIT_OK


def cmd_expand(args, out):
    series = fourier_bessel.build_series(args.i, args.j, args.k, args.m, args.n, args.N)
    if args.out:
        fourier_bessel.export_csv(series, args.out)
    else:
        out.write(fourier_bessel.to_csv(series))
    if args.N == 0:
        return EXIT_OK
    rms = fourier_bessel.rms_error(series)
    norm = fourier_bessel.product_norm(series)
    gap = (norm - fourier_bessel.parseval_sum(series)) / norm if norm else 0.0
    print(f"N={args.N} rms={rms:.3e} parseval_gap={gap:.3e}", file=sys.stderr)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser():
    p = _Parser(prog="bpk", description="Bessel function product integrals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate Z_n(scale x) = a J_n + b Y_n")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--a", type=float, default=1.0)
    e.add_argument("--b", type=float, default=0.0)
    e.add_argument("--scale", type=float, default=1.0)
    e.add_argument("--derivative", action="store_true", help="d/dx instead of the value")
    e.add_argument("x", type=float, nargs="+")
    e.set_defaults(func=cmd_eval)

    z = sub.add_parser("zeros", help="positive zeros of J_q")
    z.add_argument("--q", type=int, choices=(0, 1), default=1)
    z.add_argument("--count", type=_positive, default=10)
    z.set_defaults(func=cmd_zeros)

    v = sub.add_parser("validate", help="seeded identity suites")
    v.add_argument("scope", choices=(*validation.SCOPES, "all"))
    v.add_argument("--draws", type=_positive, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_validate)

    t = sub.add_parser("table1", help="published comparison table")
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.add_argument("--csv", help="write (lhs, rhs) scatter pairs here")
    t.add_argument("--prefactor", choices=("table", "derived"), default="table")
    t.set_defaults(func=cmd_table1)

    g = sub.add_parser("dbgen", help="generate the coefficient database")
    g.add_argument("--max-mode", type=_positive, required=True)
    g.add_argument("--q", type=int, choices=(0, 1), default=1)
    g.add_argument("--threshold", type=_positive, default=coeff_db.DEFAULT_THRESHOLD)
    g.add_argument("--extended-from", type=_positive, default=coeff_db.DEFAULT_EXTENDED_FROM)
    g.add_argument("--out", default="coeffs.csv")
    g.add_argument("--index", help="also write a BPK1 binary index")
    g.set_defaults(func=cmd_dbgen)

    d = sub.add_parser("dbquery", help="look up one coefficient record")
    d.add_argument("q", type=int, choices=(0, 1))
    d.add_argument("m", type=_positive)
    d.add_argument("n", type=_positive)
    d.add_argument("p", type=_positive)
    d.add_argument("--db", help="CSV or BPK1 file; computed directly when omitted")
    d.set_defaults(func=cmd_dbquery)

    x = sub.add_parser("expand", help="Fourier-Bessel coefficients of a product")
    for name in ("i", "j", "k"):
        x.add_argument(f"--{name}", type=int, choices=(0, 1), required=True)
    x.add_argument("--m", type=_positive, required=True)
    x.add_argument("--n", type=_positive, required=True)
    x.add_argument("--N", type=_nonneg, default=64)
    x.add_argument("--out", help="CSV path; stdout when omitted")
    x.set_defaults(func=cmd_expand)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (BesselProdError, ValueError, OSError) as exc:
        print(f"bpk {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
