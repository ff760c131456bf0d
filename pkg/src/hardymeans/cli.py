"""Command-line interface.

Subcommands: constant, solve, verify, est, gena, sweep, homogenize.
Results print as a single JSON object (or CSV where a table is the
natural shape) on stdout; computational failures print a JSON error
object on stderr and exit 1; usage problems exit 2.  Reals carry 17
significant digits and infinities print as the literal ``inf``.

A ``--config <file>`` of ``key=value`` lines (keys are the long flag
names) is merged *under* explicit flags: a flag given on the command
line always wins.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import empirical, hardy
from .errors import HardyMeansError, UsageError, ViolationFound
from .homogenize import homogenize as _scaling_ladder
from .formatting import fmt_real, render_json
from .means import parse_mean
from .weights import parse_weights

_DEFAULTS = {
    "constant": {"eta": 0.0, "method": "closed", "tol": 1e-12},
    "solve": {"eta": 0.0, "tol": 1e-12},
    "verify": {"constant": "auto", "trials": 200, "seed": 0, "N": 50},
    "est": {"y": 1.0, "out": None},
    "gena": {},
    "sweep": {"method": "closed", "out": None},
    "homogenize": {"tol": 1e-8},
}

_REQUIRED = {
    "constant": ("family",),
    "solve": ("family",),
    "verify": ("mean", "weights"),
    "est": ("mean", "weights", "N"),
    "gena": ("p", "weights", "N"),
    "sweep": ("family", "eta"),
    "homogenize": ("mean", "x", "lam"),
}

_CONVERTERS = {
    "family": str, "mean": str, "weights": str, "method": str,
    "constant": str, "out": str, "x": str, "lam": str, "eta": str,
    "tol": float, "trials": int, "seed": int, "N": int, "y": float,
    "p": float,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardymeans",
        description="Sharp constants for weighted Hardy-type mean "
                    "inequalities, and empirical checks of them.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constant", help="closed-form or root-solved constant")
    p.add_argument("--family", help="mean specifier, e.g. power:p=0.5")
    p.add_argument("--eta", help="weight ratio limit in [0, 1)")
    p.add_argument("--method", choices=("closed", "root", "both"))
    p.add_argument("--tol", type=float)
    p.add_argument("--config")

    p = sub.add_parser("solve", help="root of the characteristic equation")
    p.add_argument("--family")
    p.add_argument("--eta")
    p.add_argument("--tol", type=float)
    p.add_argument("--config")

    p = sub.add_parser("verify", help="fuzz the inequality at a constant")
    p.add_argument("--mean")
    p.add_argument("--weights")
    p.add_argument("--constant", help="'auto' or a positive real")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--config")

    p = sub.add_parser("est", help="witness trace toward the constant")
    p.add_argument("--mean")
    p.add_argument("--weights")
    p.add_argument("--y", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--config")

    p = sub.add_parser("gena", help="weighted probe sums and their limit")
    p.add_argument("--p", type=float)
    p.add_argument("--weights")
    p.add_argument("--N", type=int)
    p.add_argument("--config")

    p = sub.add_parser("sweep", help="constants over an eta grid, as CSV")
    p.add_argument("--family")
    p.add_argument("--eta", help="grid start:stop:step")
    p.add_argument("--method", choices=("closed", "root"))
    p.add_argument("--out")
    p.add_argument("--config")

    p = sub.add_parser("homogenize", help="scaling ladder of a mean")
    p.add_argument("--mean")
    p.add_argument("--x", help="comma-separated positive samples")
    p.add_argument("--lam", help="comma-separated nonnegative weights")
    p.add_argument("--tol", type=float)
    p.add_argument("--config")
    return parser


def _merge_config(args: argparse.Namespace,
                  parser: argparse.ArgumentParser) -> None:
    path = getattr(args, "config", None)
    if path is None:
        return
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        parser.error(f"cannot read config {path!r}: {exc}")
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if not sep or not key:
            parser.error(f"malformed config line {raw.strip()!r}")
        if key not in vars(args) or key == "config":
            parser.error(f"config key {key!r} is not a flag of this command")
        if getattr(args, key) is None:
            conv = _CONVERTERS.get(key, str)
            try:
                setattr(args, key, conv(val))
            except ValueError as exc:
                parser.error(f"config value for {key!r}: {exc}")


def _finalize(args: argparse.Namespace,
              parser: argparse.ArgumentParser) -> None:
    for key, default in _DEFAULTS[args.command].items():
        if getattr(args, key, None) is None:
            setattr(args, key, default)
    for key in _REQUIRED[args.command]:
        if getattr(args, key, None) is None:
            parser.error(f"--{key} is required for '{args.command}'")


def _parse_eta(text, parser) -> float:
    try:
        eta = float(text)
    except (TypeError, ValueError):
        parser.error(f"--eta must be a real in [0, 1), got {text!r}")
    if math.isnan(eta) or not 0.0 <= eta < 1.0:
        parser.error(f"--eta must lie in [0, 1), got {text!r}")
    return eta


def _parse_eta_grid(text, parser) -> list[float]:
    parts = str(text).split(":")
    if len(parts) != 3:
        parser.error("--eta grid must be start:stop:step")
    try:
        start, stop, step = (float(t) for t in parts)
    except ValueError:
        parser.error(f"bad grid numbers in {text!r}")
    if step <= 0 or stop < start:
        parser.error("grid needs step > 0 and stop >= start")
    count = int(round((stop - start) / step)) + 1
    etas = [start + i * step for i in range(count)]
    etas = [e for e in etas if e <= stop + 1e-12 * max(1.0, abs(stop))]
    for e in etas:
        if not 0.0 <= e < 1.0:
            parser.error(f"grid value {e:g} outside [0, 1)")
    return etas


def _emit(text: str, out_path=None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_json(exc: HardyMeansError) -> str:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ViolationFound):
        payload["ratio"] = exc.ratio
        payload["trial"] = exc.trial
        payload["check"] = exc.check
        payload["sequence"] = exc.sequence
    return render_json(payload)


def _cmd_constant(args, parser) -> int:
    spec = parse_mean(args.family)
    eta = _parse_eta(args.eta, parser)
    if args.method == "closed":
        value = hardy.constant_closed(spec, eta)
        out = {"value": value, "method": "closed", "residual": 0.0,
               "eta": eta}
    elif args.method == "root":
        res = hardy.constant_root(spec, eta, tol=args.tol)
        out = {"value": res.value, "method": res.method,
               "residual": res.residual, "eta": eta}
    else:
        closed = hardy.constant_closed(spec, eta)
        res = hardy.constant_root(spec, eta, tol=args.tol)
        out = {"closed": closed, "root": res.value,
               "abs_diff": abs(closed - res.value), "eta": eta}
    _emit(render_json(out) + "\n")
    return 0


def _cmd_solve(args, parser) -> int:
    spec = parse_mean(args.family)
    eta = _parse_eta(args.eta, parser)
    res = hardy.constant_root(spec, eta, tol=args.tol)
    out = {"value": res.value, "method": res.method,
           "residual": res.residual, "eta": eta}
    _emit(render_json(out) + "\n")
    return 0


def _cmd_verify(args, parser) -> int:
    spec = parse_mean(args.mean)
    w = parse_weights(args.weights)
    eta = w.eta()
    if args.constant == "auto":
        constant = hardy.auto_constant(spec, eta)
    else:
        try:
            constant = float(args.constant)
        except ValueError:
            parser.error(f"--constant must be 'auto' or a real, got "
                         f"{args.constant!r}")
        if math.isnan(constant) or constant <= 0.0:
            parser.error("--constant must be positive")
    report = empirical.verify_inequality(spec, w, constant,
                                         trials=args.trials, seed=args.seed,
                                         N=args.N)
    _emit(render_json(report.to_dict()) + "\n")
    return 0


def _cmd_est(args, parser) -> int:
    spec = parse_mean(args.mean)
    w = parse_weights(args.weights)
    trace = empirical.est_lower_bound(spec, w, args.y, args.N)
    rows = ["n,value"]
    rows.extend(f"{int(n)},{fmt_real(v)}"
                for n, v in zip(trace.ns, trace.values))
    _emit("\n".join(rows) + "\n", args.out)
    return 0


def _cmd_gena(args, parser) -> int:
    w = parse_weights(args.weights)
    eta = w.eta()
    partial = empirical.genA_partial(empirical.PowerProbe(args.p), w, args.N)
    limit = empirical.genA_limit(args.p, eta)
    out = {"p": args.p, "weights": w.spec_text(), "n": args.N,
           "eta": eta, "partial": partial, "limit": limit,
           "abs_diff": abs(partial - limit)}
    _emit(render_json(out) + "\n")
    return 0


def _cmd_sweep(args, parser) -> int:
    spec = parse_mean(args.family)
    etas = _parse_eta_grid(args.eta, parser)
    rows = ["eta,value"]
    for eta in etas:
        if args.method == "closed":
            value = hardy.constant_closed(spec, eta)
        else:
            value = hardy.constant_root(spec, eta).value
        rows.append(f"{fmt_real(eta)},{fmt_real(value)}")
    _emit("\n".join(rows) + "\n", args.out)
    return 0


def _cmd_homogenize(args, parser) -> int:
    spec = parse_mean(args.mean)
    try:
        x = np.array([float(t) for t in str(args.x).split(",")])
        lam = np.array([float(t) for t in str(args.lam).split(",")])
    except ValueError:
        parser.error("--x and --lam must be comma-separated reals")
    est = _scaling_ladder(spec, x, lam, tol=args.tol)
    rows = ["t,value"]
    rows.extend(f"{fmt_real(t)},{fmt_real(v)}"
                for t, v in zip(est.t_values, est.ladder))
    rows.append(f"0,{fmt_real(est.value)}")
    _emit("\n".join(rows) + "\n")
    if not est.converged:
        sys.stderr.write(render_json(
            {"warning": "NoConvergence",
             "message": "ladder spread still above tolerance; the final "
                        "row extrapolates the unsettled tail",
             "spread": est.spread}) + "\n")
    return 0


_HANDLERS = {
    "constant": _cmd_constant, "solve": _cmd_solve, "verify": _cmd_verify,
    "est": _cmd_est, "gena": _cmd_gena, "sweep": _cmd_sweep,
    "homogenize": _cmd_homogenize,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _merge_config(args, parser)
        _finalize(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args, parser)
    except SystemExit as exc:  # parser.error inside a handler
        return int(exc.code or 0)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except ViolationFound as exc:
        sys.stderr.write(_error_json(exc) + "\n")
        return 1
    except HardyMeansError as exc:
        sys.stderr.write(_error_json(exc) + "\n")
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
