#!/usr/bin/env python3
"""Tabulate sharp constants over a (family, eta) grid.

Writes a CSV with one row per (family, eta) cell.  By default both the
closed form and the root-solved value are computed so the table doubles
as an agreement check:

    python3 scripts/sweep_constants.py --p -2:0.9:0.1 --eta 0:0.9:0.1 \
        --gini 0.5,-0.5 --out constants.csv
"""
import argparse
import sys

from hardymeans.errors import HardyMeansError
from hardymeans.formatting import fmt_real
from hardymeans.hardy import constant_closed, constant_root
from hardymeans.means import Gini, Power, canonical


def grid(text):
    parts = [float(tok) for tok in text.split(":")]
    if len(parts) == 1:
        return parts
    start, stop, step = parts
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    out, k = [], 0
    while start + k * step <= stop + 1e-12:
        out.append(start + k * step)
        k += 1
    return out


def gini_pair(text):
    p, q = (float(tok) for tok in text.split(","))
    return p, q


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=grid, default="-2:0.9:0.1",
                    help="power-order grid start:stop:step (default -2:0.9:0.1)")
    ap.add_argument("--eta", type=grid, default="0:0.9:0.1",
                    help="eta grid start:stop:step (default 0:0.9:0.1)")
    ap.add_argument("--gini", type=gini_pair, action="append", default=[],
                    metavar="P,Q", help="extra Gini family, repeatable")
    ap.add_argument("--method", choices=["closed", "both"], default="both")
    ap.add_argument("--out", help="output CSV path (default stdout)")
    args = ap.parse_args(argv)
    if isinstance(args.p, str):
        args.p = grid(args.p)
    if isinstance(args.eta, str):
        args.eta = grid(args.eta)

    specs = [Power(p) for p in args.p] + [Gini(p, q) for p, q in args.gini]
    header = "family,eta,closed"
    if args.method == "both":
        header += ",root,abs_diff"
    lines = [header]
    skipped = 0
    for spec in specs:
        for eta in args.eta:
            try:
                closed = constant_closed(spec, eta)
            except HardyMeansError as exc:
                print(f"skip {canonical(spec)} eta={eta:g}: {exc}",
                      file=sys.stderr)
                skipped += 1
                continue
            row = f"{canonical(spec)},{fmt_real(eta)},{fmt_real(closed)}"
            if args.method == "both":
                try:
                    root = constant_root(spec, eta).value
                except HardyMeansError as exc:
                    print(f"skip {canonical(spec)} eta={eta:g}: {exc}",
                          file=sys.stderr)
                    skipped += 1
                    continue
                row += f",{fmt_real(root)},{fmt_real(abs(root - closed))}"
            lines.append(row)
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {len(lines) - 1} rows to {args.out}"
              + (f" ({skipped} cells skipped)" if skipped else ""),
              file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
