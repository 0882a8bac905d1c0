"""Command line front end: pw-extend, curvature, verify, kostant, report."""

import argparse
import logging
import sys

from . import verify as V
from .structfile import StructFileError, load_struct


def _add_source(p):
    p.add_argument("file", nargs="?", help="structure file (omit to use --n/--seed)")
    p.add_argument("--n", type=int, help="dimension of a generated structure")
    p.add_argument("--seed", type=int, help="seed of a random structure (flat if omitted)")
    p.add_argument("--max-degree", type=int, default=2, help="degree of random coefficients")


def _load(args):
    if args.file:
        spec = load_struct(args.file)
        meta = {"source": args.file}
        if spec.notes:
            meta["notes"] = spec.notes
        return V.FeffermanData(spec.structure, spec.perturbation or None, spec.conformal_factor,
                               meta)
    if args.n is None:
        raise SystemExit("error: give a structure file or --n")
    if args.seed is None:
        return V.FeffermanData(V.flat_projective(args.n), meta={"source": "flat"})
    P = V.random_projective(args.n, args.seed, args.max_degree)
    return V.FeffermanData(P, meta={"source": "random", "seed": args.seed,
                                    "max_degree": args.max_degree})


def _emit(report, args):
    text = report.to_json() if args.json else report.render()
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    return 0 if report.passed else 1


def _print_tensor(label, T, names):
    print("%s:" % label)
    if T.is_zero():
        print("  0")
        return
    for key, v in sorted(T.comps.items()):
        print("  [%s] = %s" % (",".join(names[i] for i in key), v.to_str(names)))


def cmd_pw_extend(args):
    data = _load(args)
    for line in data.pw.describe():
        print(line)
    return 0


def cmd_curvature(args):
    from .projective import proj_cotton, proj_schouten, proj_weyl
    data = _load(args)
    D = data.structure.representative
    names = D.chart.names
    P = proj_schouten(D)
    _print_tensor("projective Schouten P_AB", P, names)
    _print_tensor("projective Weyl W_AB^C_D", proj_weyl(D, None, P), names)
    _print_tensor("projective Cotton Y_CAB", proj_cotton(D, P), names)
    conf = data.conf
    big = data.pw.chart.names
    _print_tensor("conformal Schouten P_ab", conf.P, big)
    _print_tensor("conformal Weyl W_ab^c_d", conf.W, big)
    _print_tensor("conformal Cotton Y_cab", conf.Y, big)
    return 0


def cmd_verify(args):
    data = _load(args)
    suites = tuple(args.suite) if args.suite else V.VERIFY_SUITES
    return _emit(V.verify_structure(data, suites), args)


def cmd_kostant(args):
    if args.n is None:
        raise SystemExit("error: kostant needs --n")
    return _emit(V.verify_kostant(args.n, args.seed or 0), args)


def cmd_report(args):
    with open(args.path, encoding="utf-8") as fh:
        report = V.VerificationReport.from_json(fh.read())
    args.out = None
    return _emit(report, args)


def build_parser():
    ap = argparse.ArgumentParser(prog="fefferman-lab",
                                 description="Exact checks for Patterson-Walker metrics.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("pw-extend", help="print the Walker metric of a structure")
    _add_source(p)
    p.set_defaults(func=cmd_pw_extend)
    p = sub.add_parser("curvature", help="print Schouten, Weyl and Cotton tensors")
    _add_source(p)
    p.set_defaults(func=cmd_curvature)
    p = sub.add_parser("verify", help="run the verification suites")
    _add_source(p)
    p.add_argument("--suite", action="append", choices=sorted(V.SUITES),
                   help="suite to run (repeatable; default: %s)" % ", ".join(V.VERIFY_SUITES))
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.add_argument("--out", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("kostant", help="run the Lie-algebra suites")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_kostant)
    p = sub.add_parser("report", help="render a saved JSON report")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", help="re-emit the JSON instead of the table")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except StructFileError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
