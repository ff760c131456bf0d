#!/usr/bin/env python3
"""Trace the near-extremal lower-bound estimate toward the sharp constant.

Feeds the witness sequence x_n = y / Lambda_n through the prefix-mean
estimate and writes the (n, value) trace as CSV.  A summary line on
stderr compares the tail against the closed-form constant when one
exists:

    python3 scripts/witness_convergence.py --family power:p=0.5 \
        --weights ones --N 1000000 --out trace.csv
"""
import argparse
import sys

from hardymeans.empirical import est_lower_bound
from hardymeans.errors import HardyMeansError
from hardymeans.hardy import constant_closed
from hardymeans.means import parse_mean
from hardymeans.weights import parse_weights


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", required=True,
                    help="mean family, e.g. power:p=0.5 or gini:p=0.5,q=-0.5")
    ap.add_argument("--weights", default="ones",
                    help="weight rule (ones, geometric:a=2, ...)")
    ap.add_argument("--N", type=int, default=10 ** 5, help="witness depth")
    ap.add_argument("--y", type=float, default=1.0, help="witness scale")
    ap.add_argument("--grid", type=int, default=60,
                    help="number of logarithmically spaced trace points")
    ap.add_argument("--out", help="output CSV path (default stdout)")
    args = ap.parse_args(argv)

    try:
        spec = parse_mean(args.family)
        w = parse_weights(args.weights)
        trace = est_lower_bound(spec, w, args.y, args.N, grid=args.grid)
    except HardyMeansError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    trace.to_csv(args.out if args.out else sys.stdout)

    tail = trace.tail_inf()
    summary = f"tail inf over n >= {trace.ns[-1] // 2}: {tail:.9g}"
    try:
        target = constant_closed(spec, w.eta())
        summary += (f"; closed-form constant {target:.9g}"
                    f"; gap {abs(tail - target) / target:.3%}")
    except HardyMeansError:
        summary += "; no closed-form constant for this family"
    print(summary, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
