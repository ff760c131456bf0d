"""Generator functions and quasideviation kernels.

Two kinds of building blocks feed the mean families:

* a :class:`GeneratorFunction` is a scalar function on (0, inf), used
  either as the transform of a quasiarithmetic mean (then it must be
  strictly monotone and invertible) or as the profile of a homogeneous
  deviation mean (then it must be concave with sign f(u) = sign (u - 1));

* a :class:`QuasideviationKernel` is a two-place function E(x, y) whose
  sign matches sign(x - y), defining a mean as the root in y of
  sum(lambda_i * E(x_i, y)) = 0.

Named constructors carry analytic derivatives and inverses where they
exist, plus the declared structural properties downstream code relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

# Parameters closer to zero than this snap to the exact log branch.
P_SNAP = 1e-12


@dataclass(frozen=True)
class GeneratorFunction:
    """A function on (0, inf) with optional derivatives and inverse.

    The boolean fields are declarations, not computed facts: callers are
    trusted to set them correctly for custom generators (named
    constructors set them right).  ``recip_integrable`` declares that
    x -> fn(1/x) is integrable on (0, 1].
    """

    fn: Callable[[np.ndarray], np.ndarray]
    d1: Optional[Callable] = None
    d2: Optional[Callable] = None
    inverse: Optional[Callable] = None
    concave: bool = False
    sign_like: bool = False
    recip_integrable: bool = False
    family: str = "custom"
    label: str = "custom"

    def __call__(self, x):
        return self.fn(x)

    def __repr__(self) -> str:
        return f"GeneratorFunction({self.label})"


def dev_power(p: float) -> GeneratorFunction:
    """Normalized power profile u -> (u**p - 1)/p, with ln at p = 0.

    The homogeneous deviation mean it generates is the p-th power mean.
    Concave for p <= 1; its reciprocal profile is integrable iff p < 1.
    """
    p = float(p)
    if abs(p) < P_SNAP:
        return log_gen()

    def fn(u):
        u = np.asarray(u, dtype=float)
        return np.expm1(p * np.log(u)) / p

    def d1(u):
        u = np.asarray(u, dtype=float)
        return np.exp((p - 1.0) * np.log(u))

    def d2(u):
        u = np.asarray(u, dtype=float)
        return (p - 1.0) * np.exp((p - 2.0) * np.log(u))

    return GeneratorFunction(fn=fn, d1=d1, d2=d2, inverse=None,
                             concave=p <= 1.0, sign_like=True,
                             recip_integrable=p < 1.0,
                             family=f"power:{p:.17g}",
                             label=f"(u^{p:g} - 1)/{p:g}")


def dev_gini(p: float, q: float) -> GeneratorFunction:
    """Two-exponent profile u -> (u**p - u**q)/(p - q).

    Generates the Gini mean with exponents (p, q).  For p = q the limit
    profile u**p * ln u is used; (0, 0) is plain ln.  Declared concave on
    the band min(p,q) <= 0 <= max(p,q) <= 1, which covers the region
    where a finite sharp constant exists.
    """
    p, q = float(p), float(q)
    if abs(p - q) < P_SNAP:
        r = 0.5 * (p + q)
        if abs(r) < P_SNAP:
            return log_gen()

        def fn(u):
            u = np.asarray(u, dtype=float)
            t = np.log(u)
            return np.exp(r * t) * t

        def d1(u):
            u = np.asarray(u, dtype=float)
            t = np.log(u)
            return np.exp((r - 1.0) * t) * (r * t + 1.0)

        def d2(u):
            u = np.asarray(u, dtype=float)
            t = np.log(u)
            return np.exp((r - 2.0) * t) * (r * (r - 1.0) * t + 2.0 * r - 1.0)

        return GeneratorFunction(fn=fn, d1=d1, d2=d2, concave=False,
                                 sign_like=r == 0.0,
                                 recip_integrable=r < 1.0,
                                 family=f"gini:{r:.17g},{r:.17g}",
                                 label=f"u^{r:g} ln u")

    def fn(u):
        u = np.asarray(u, dtype=float)
        t = np.log(u)
        # e^{pt} - e^{qt} factored to avoid cancellation near u = 1
        return np.exp(q * t) * np.expm1((p - q) * t) / (p - q)

    def d1(u):
        u = np.asarray(u, dtype=float)
        t = np.log(u)
        return (p * np.exp((p - 1.0) * t) - q * np.exp((q - 1.0) * t)) / (p - q)

    def d2(u):
        u = np.asarray(u, dtype=float)
        t = np.log(u)
        return (p * (p - 1.0) * np.exp((p - 2.0) * t)
                - q * (q - 1.0) * np.exp((q - 2.0) * t)) / (p - q)

    lo, hi = min(p, q), max(p, q)
    return GeneratorFunction(fn=fn, d1=d1, d2=d2,
                             concave=lo <= 0.0 <= hi <= 1.0, sign_like=True,
                             recip_integrable=hi < 1.0,
                             family=f"gini:{p:.17g},{q:.17g}",
                             label=f"(u^{p:g} - u^{q:g})/({p:g} - {q:g})")


def log_gen() -> GeneratorFunction:
    """Natural log: invertible, concave, sign-like, both roles."""

    def fn(u):
        return np.log(np.asarray(u, dtype=float))

    def d1(u):
        return 1.0 / np.asarray(u, dtype=float)

    def d2(u):
        u = np.asarray(u, dtype=float)
        return -1.0 / (u * u)

    return GeneratorFunction(fn=fn, d1=d1, d2=d2, inverse=np.exp,
                             concave=True, sign_like=True,
                             recip_integrable=True, family="log", label="ln u")


def power_gen(p: float) -> GeneratorFunction:
    """Monotone transform x -> x**p (ln at p = 0) with analytic inverse.

    This is the quasiarithmetic role: it does not vanish at 1 for p != 0,
    so it is not a deviation profile.
    """
    p = float(p)
    if abs(p) < P_SNAP:
        return log_gen()

    def fn(x):
        return np.asarray(x, dtype=float) ** p

    def inverse(v):
        return np.asarray(v, dtype=float) ** (1.0 / p)

    def d1(x):
        return p * np.asarray(x, dtype=float) ** (p - 1.0)

    def d2(x):
        return p * (p - 1.0) * np.asarray(x, dtype=float) ** (p - 2.0)

    return GeneratorFunction(fn=fn, d1=d1, d2=d2, inverse=inverse,
                             concave=0.0 < p <= 1.0, sign_like=False,
                             recip_integrable=False,
                             family=f"pow-map:{p:.17g}", label=f"x^{p:g}")


def exp_gen() -> GeneratorFunction:
    """x -> e**x with inverse ln; quasiarithmetic role only."""

    def fn(x):
        return np.exp(np.asarray(x, dtype=float))

    return GeneratorFunction(fn=fn, d1=fn, d2=fn, inverse=np.log,
                             concave=False, sign_like=False,
                             recip_integrable=False, family="exp-map",
                             label="e^x")


@dataclass(frozen=True)
class QuasideviationKernel:
    """Two-place kernel E(x, y) on (0, inf)^2 with sign(E) = sign(x - y).

    ``d2_diag``, when supplied, is the analytic diagonal derivative
    y -> dE/dy (x, y)|_{x=y}; normalization falls back to central
    differences without it.
    """

    fn: Callable[[np.ndarray, float], np.ndarray]
    d2_diag: Optional[Callable] = None
    family: str = "custom"
    label: str = "custom"

    def __call__(self, x, y):
        return self.fn(x, y)

    def __repr__(self) -> str:
        return f"QuasideviationKernel({self.label})"


def difference_kernel() -> QuasideviationKernel:
    """E(x, y) = x - y; its mean is the weighted arithmetic mean."""
    return QuasideviationKernel(
        fn=lambda x, y: np.asarray(x, dtype=float) - y,
        d2_diag=lambda y: -np.ones_like(np.asarray(y, dtype=float)),
        family="difference", label="x - y")


def power_gap_kernel(r: float) -> QuasideviationKernel:
    """E(x, y) = x**r - y**r for r > 0; its mean is the r-th power mean."""
    r = float(r)
    if r <= 0.0:
        raise DomainError("power gap kernel needs r > 0")
    return QuasideviationKernel(
        fn=lambda x, y: np.asarray(x, dtype=float) ** r - float(y) ** r,
        d2_diag=lambda y: -r * np.asarray(y, dtype=float) ** (r - 1.0),
        family=f"power-gap:{r:.17g}", label=f"x^{r:g} - y^{r:g}")


def ratio_kernel(f: GeneratorFunction) -> QuasideviationKernel:
    """E(x, y) = f(x / y) for a sign-like profile f."""
    if not f.sign_like:
        raise DomainError("ratio kernel needs a generator with the sign "
                          "property f(u) ~ sign(u - 1)")
    d2_diag = None
    if f.d1 is not None:
        fp1 = float(np.asarray(f.d1(np.array([1.0])), dtype=float)[0])
        d2_diag = lambda y: -fp1 / np.asarray(y, dtype=float)
    return QuasideviationKernel(
        fn=lambda x, y: f.fn(np.asarray(x, dtype=float) / y),
        d2_diag=d2_diag, family=f"ratio[{f.family}]",
        label=f"f(x/y), f = {f.label}")


def scaled_ratio_kernel(f: GeneratorFunction) -> QuasideviationKernel:
    """E(x, y) = y * f(x / y), the homogeneous normalized form."""
    if not f.sign_like:
        raise DomainError("scaled ratio kernel needs a sign-like generator")
    d2_diag = None
    if f.d1 is not None:
        # d/dy [y f(x/y)] at x = y is f(1) - f'(1) = -f'(1)
        fp1 = float(np.asarray(f.d1(np.array([1.0])), dtype=float)[0])
        d2_diag = lambda y: -fp1 * np.ones_like(np.asarray(y, dtype=float))
    return QuasideviationKernel(
        fn=lambda x, y: y * f.fn(np.asarray(x, dtype=float) / y),
        d2_diag=d2_diag, family=f"scaled-ratio[{f.family}]",
        label=f"y f(x/y), f = {f.label}")


# -- declared-property diagnostics -------------------------------------

_GRID = np.geomspace(1e-3, 1e3, 64)


def validate_generator(f: GeneratorFunction) -> dict:
    """Spot-check the declared properties of f on a fixed log grid.

    Returns a report dict with boolean verdicts and the first offending
    points.  Purely diagnostic: nothing is raised.
    """
    vals = np.asarray(f.fn(_GRID), dtype=float)
    report: dict = {"sign_ok": True, "concave_ok": True, "violations": []}
    if f.sign_like:
        want = np.sign(_GRID - 1.0)
        bad = np.sign(vals) != want
        if bad.any():
            report["sign_ok"] = False
            report["violations"].append(
                ("sign", float(_GRID[bad][0]), float(vals[bad][0])))
    if f.concave:
        # midpoint concavity between adjacent grid nodes
        amid = 0.5 * (_GRID[:-1] + _GRID[1:])
        fmid = np.asarray(f.fn(amid), dtype=float)
        chord = 0.5 * (vals[:-1] + vals[1:])
        bad = fmid < chord - 1e-9 * np.maximum(1.0, np.abs(chord))
        if bad.any():
            report["concave_ok"] = False
            report["violations"].append(
                ("concavity", float(amid[bad][0]), float(fmid[bad][0])))
    return report


def validate_kernel(E: QuasideviationKernel, seed: int = 0) -> dict:
    """Sample-based diagnostic of the kernel requirements.

    Checks the sign property on a seeded grid of (x, y) pairs, scans for
    jumps in y at fixed x (continuity), and samples the two-point ratio
    monotonicity that makes the deviation comparable.  Diagnostic only;
    a clean report is evidence, not proof.
    """
    rng = np.random.default_rng(seed)
    xs = 10.0 ** rng.uniform(-3, 3, 48)
    ys = 10.0 ** rng.uniform(-3, 3, 48)
    report: dict = {"sign_ok": True, "continuity_ok": True,
                    "ratio_monotone_ok": True, "violations": []}
    for y in ys[:16]:
        v = np.asarray(E.fn(xs, float(y)), dtype=float)
        bad = np.sign(v) != np.sign(xs - y)
        if bad.any():
            report["sign_ok"] = False
            report["violations"].append(
                ("sign", float(xs[bad][0]), float(y)))
            break
    for x in xs[:8]:
        grid = np.geomspace(x * 1e-2, x * 1e2, 512)
        v = np.asarray([float(E.fn(np.array([x]), float(y))[0]) for y in grid])
        jumps = np.abs(np.diff(v))
        # a jump is a diff that dwarfs both neighboring diffs; comparing
        # against |v| would misfire at every zero crossing
        vscale = float(np.max(np.abs(v))) or 1.0
        neighbors = np.maximum(jumps[:-2], jumps[2:])
        if np.any(jumps[1:-1] > 10.0 * neighbors + 1e-9 * vscale):
            report["continuity_ok"] = False
            report["violations"].append(("continuity", float(x), 0.0))
            break
    # ratio comparability: for x1 < y < x2 fixed, E(x1,y)/E(x2,y) should
    # vary monotonically in y between consecutive sample points
    for _ in range(8):
        x1, x2 = np.sort(10.0 ** rng.uniform(-2, 2, 2))
        if x2 / x1 < 10.0:
            x2 = x1 * 10.0
        ygrid = np.geomspace(x1 * 1.01, x2 * 0.99, 128)
        e1 = np.asarray([float(E.fn(np.array([x1]), float(y))[0]) for y in ygrid])
        e2 = np.asarray([float(E.fn(np.array([x2]), float(y))[0]) for y in ygrid])
        ratio = e1 / e2
        d = np.diff(ratio)
        if not (np.all(d <= 1e-9) or np.all(d >= -1e-9)):
            report["ratio_monotone_ok"] = False
            report["violations"].append(("ratio", float(x1), float(x2)))
            break
    return report


def with_flags(f: GeneratorFunction, **flags) -> GeneratorFunction:
    """Copy of f with declaration fields replaced (for custom callers)."""
    return replace(f, **flags)
