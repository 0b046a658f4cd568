"""Command-line front end.

Exit codes: 0 success, 1 a property was falsified, 2 invalid input,
3 the window cannot certify the requested answer.
"""

from __future__ import annotations

import argparse
import sys

from .degree import encode
from .filtered import (InvariantViolation, complex_window_demand, filtered_complex,
                       fit_polynomial)
from .harness import PROPERTIES, FuzzConfig, run_checks, run_fuzz, window_demand
from .homology import invariant_report
from .io import InputError, dumps, load_presentation, report, to_csv
from .modules import WindowError, compile_presentation

EXIT_OK, EXIT_FALSIFIED, EXIT_INPUT, EXIT_WINDOW = 0, 1, 2, 3


def _load(path):
    P = load_presentation(path)
    if P.window is None:
        raise InputError(f"{path}: missing field 'window'")
    return P


def _analyse(P, smax, allow_uncertified=False):
    V = compile_presentation(P)
    return V, invariant_report(V, smax, bounds=P.bounds, allow_uncertified=allow_uncertified)


def _homology_csv(V, rep):
    smax = len(rep.hd) - 1
    header = ["n", "dim"] + [f"H{s}" for s in range(smax + 1)]
    rows = []
    for n in range(V.window + 1):
        row = [n, V.dims[n]]
        for s in range(smax + 1):
            dims = rep.homology_dims.get(s, [])
            row.append(dims[n] if n < len(dims) else "")
        rows.append(row)
    return to_csv(header, rows)


def cmd_invariants(args):
    P = _load(args.input)
    V, rep = _analyse(P, args.smax, args.allow_uncertified)
    if args.format == "csv":
        return _homology_csv(V, rep)
    return dumps(report(module=P.to_json(), invariants=rep.to_json(), dims=V.dims))


def cmd_complex(args):
    P = _load(args.input)
    V, rep = _analyse(P, 1)
    rel = max(rep.hd[1].value, rep.gd.value)
    need = complex_window_demand(rep.gd.value, rep.td.value, rel)
    if V.window < need:
        raise WindowError(f"the filtered complex needs window >= {need}, file has {V.window}",
                          required=need, available=V.window)
    cx = filtered_complex(V, gd_value=rep.gd, td_value=rep.td, rel=rel)
    if args.format == "csv":
        rows = []
        for j, lv in enumerate(cx.levels):
            rows.append([-1 - j, "" if lv.shift is None else lv.shift,
                         ";".join(map(str, lv.term.dims)) if lv.term is not None else "",
                         encode(lv.td.value), ";".join(map(str, lv.torsion.dims))])
        return to_csv(["index", "shift", "term_dims", "homology_td", "homology_dims"], rows)
    return dumps(report(module=P.to_json(), invariants=rep.to_json(), complex=cx.to_json()))


def cmd_growth(args):
    P = _load(args.input)
    V, rep = _analyse(P, 1)
    gr = fit_polynomial(V, rep.gd, rep.td)
    if args.format == "csv":
        rows = [[n, V.dims[n], str(gr(n)), int(n >= gr.stable_from)] for n in range(V.window + 1)]
        return to_csv(["n", "dim", "poly", "stable"], rows)
    return dumps(report(module=P.to_json(), invariants=rep.to_json(), growth=gr.to_json()))


def _verdict_csv(verdicts):
    rows = [[v["name"], v["passed"], v["failed"], v["skipped"]] for v in verdicts]
    return to_csv(["property", "passed", "failed", "skipped"], rows)


def _checks(text):
    return tuple(c.strip() for c in text.split(",") if c.strip()) if text else PROPERTIES


def cmd_fuzz(args):
    try:
        cfg = FuzzConfig(seed=args.seed, trials=args.trials, field=args.field,
                         group_order=args.group_order, gmax=args.gmax, genmax=args.genmax,
                         rmax=args.rmax, relmax=args.relmax, smax=args.smax,
                         checks=_checks(args.checks))
        cfg.to_json()
    except ValueError as e:
        raise InputError(str(e)) from None
    need = window_demand(cfg)
    print(f"window demand: {need}", file=sys.stderr)
    if need > args.max_window:
        raise WindowError(f"window demand {need} exceeds --max-window {args.max_window}",
                          required=need, available=args.max_window)
    rep = run_fuzz(cfg)
    body = rep.to_json()
    for v in body["verdicts"]:
        if v["failed"]:
            ce = v["counterexample"]
            print(f"FALSIFIED {v['name']}: trial {ce['trial']} seed {ce['seed']}: {ce['detail']}",
                  file=sys.stderr)
    text = _verdict_csv(body["verdicts"]) if args.format == "csv" else dumps(
        report(verdicts=body["verdicts"], fuzz=body))
    return text, (EXIT_OK if rep.ok else EXIT_FALSIFIED)


def cmd_check(args):
    P = _load(args.input)
    try:
        checks = _checks(args.checks)
        unknown = [c for c in checks if c not in PROPERTIES]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
    except ValueError as e:
        raise InputError(str(e)) from None
    ctx, results = run_checks(P, args.smax, checks)
    verdicts = []
    for name in checks:
        st = results[name]["status"]
        verdicts.append({"name": name, "passed": int(st == "pass"), "failed": int(st == "fail"),
                         "skipped": int(st == "skip"), "detail": results[name]["detail"]})
        if st == "fail":
            print(f"FALSIFIED {name}: {results[name]['detail']}", file=sys.stderr)
    ok = all(v["failed"] == 0 for v in verdicts)
    text = _verdict_csv(verdicts) if args.format == "csv" else dumps(
        report(module=P.to_json(), invariants=ctx.report.to_json(), verdicts=verdicts))
    return text, (EXIT_OK if ok else EXIT_FALSIFIED)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    ap = argparse.ArgumentParser(prog="fihom", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="gd, td and hd_s of a module file")
    p.add_argument("--input", required=True)
    p.add_argument("--smax", type=int, default=3)
    p.add_argument("--allow-uncertified", action="store_true",
                   help="report values the window cannot certify, flagged as such")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("complex", parents=[common], help="complex of filtered modules")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("growth", parents=[common], help="exact Hilbert polynomial and stable range")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("fuzz", parents=[common], help="property battery on random presentations")
    d = FuzzConfig()
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--trials", type=int, default=d.trials)
    p.add_argument("--field", default=d.field, help="a prime p, or q for the rationals")
    p.add_argument("--group-order", type=int, default=d.group_order)
    p.add_argument("--gmax", type=int, default=d.gmax)
    p.add_argument("--genmax", type=int, default=d.genmax)
    p.add_argument("--rmax", type=int, default=d.rmax)
    p.add_argument("--relmax", type=int, default=d.relmax)
    p.add_argument("--smax", type=int, default=d.smax)
    p.add_argument("--checks", help="comma-separated property names (default: all)")
    p.add_argument("--max-window", type=int, default=16,
                   help="refuse configurations whose window demand exceeds this")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("check", parents=[common], help="property battery on one module file")
    p.add_argument("--input", required=True)
    p.add_argument("--smax", type=int, default=3)
    p.add_argument("--checks", help="comma-separated property names (default: all)")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
        text, code = out if isinstance(out, tuple) else (out, EXIT_OK)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except WindowError as e:
        print(f"window insufficient: {e}", file=sys.stderr)
        return EXIT_WINDOW
    except InvariantViolation as e:
        print(f"FALSIFIED: {e}", file=sys.stderr)
        return EXIT_FALSIFIED
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
