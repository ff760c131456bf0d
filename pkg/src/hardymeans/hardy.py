"""Sharp constants for weighted Hardy-type mean inequalities.

For a mean M and weights lambda, the constant of interest is the
smallest C with

    sum_n lambda_n M(x_1..x_n)  <=  C * sum_n lambda_n x_n

over positive sequences.  When the weight ratio lambda_n / Lambda_n
converges to eta in [0, 1), the sharp constant for the power family of
order r < 1 is

    C(r, eta) = (eta / (1 - (1-eta)**(1-r))) ** (1/r)      eta > 0, r != 0
                (1-eta) ** (1 - 1/eta)                     eta > 0, r = 0
                (1-r) ** (-1/r)                            eta = 0, r != 0
                e                                          eta = 0, r = 0

with companion closed forms for the two-exponent (Gini) family.  The
same constants arise as the root c of a characteristic equation built
from the mean's generator profile f:

    integral_0^c f(1/x) dx = 0                (eta = 0)
    F(1/c, 1-eta) = 0                         (eta > 0)

where F(x, q) = sum_k q**k f(q**-k x).  This module provides both
routes: the closed forms, a rigorously tail-bounded evaluator for F,
and root solvers for the characteristic equation, plus the chi-based
limit detector that maps quasiarithmetic generators onto the power
scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, LimitNotDetected, NotIntegrableError,
                     PGeqOne, TailBoundFailure, ZeroDerivativeError,
                     DerivativeUnavailableError)
from .generators import GeneratorFunction, dev_gini, dev_power
from .means import (Deviation, Gini, HomogeneousDeviation, MeanSpec, Power,
                    QuasiArithmetic)
from .quadrature import tanh_sinh
from .rootfind import bracketed_root, expand_bracket_up

_BRACKET_CAP = 1e9
_TERM_CAP = 10 ** 6


def classical_C(p: float) -> float:
    """Sharp unweighted constant for the power mean of order p.

    1 at p = -inf, (1-p)**(-1/p) on (-inf, 0) and (0, 1), e at p = 0,
    and +inf from p = 1 on (no finite constant exists).
    """
    if math.isnan(p):
        raise DomainError("order must not be NaN")
    if p == -math.inf:
        return 1.0
    if p >= 1.0:
        return math.inf
    if p == 0.0:
        return math.e
    return math.exp(-math.log1p(-p) / p)


def C_of(r: float, eta: float) -> float:
    """Sharp weighted constant C(r, eta) for the power family, r < 1.

    Evaluated through expm1/log1p so the branch boundaries r -> 0 and
    eta -> 0 are approached without cancellation.
    """
    _check_eta(eta)
    if math.isnan(r) or r >= 1.0 or math.isinf(r):
        raise DomainError(f"closed form needs finite order r < 1, got {r!r}")
    if eta == 0.0:
        if r == 0.0:
            return math.e
        return math.exp(-math.log1p(-r) / r)
    if r == 0.0:
        return math.exp((1.0 - 1.0 / eta) * math.log1p(-eta))
    # 1 - (1-eta)**(1-r), kept accurate for small eta
    denom = -math.expm1((1.0 - r) * math.log1p(-eta))
    return math.exp((math.log(eta) - math.log(denom)) / r)


def gini_constant(p: float, q: float, eta: float) -> float:
    """Sharp weighted constant for the Gini family on its finite band.

    Requires min(p, q) <= 0 <= max(p, q) < 1; outside that band no
    finite sharp constant is available.  gini_constant(p, 0, eta)
    coincides with C_of(p, eta).
    """
    _check_eta(eta)
    for v in (p, q):
        if math.isnan(v) or math.isinf(v):
            raise DomainError("Gini exponents must be finite")
    if not (min(p, q) <= 0.0 <= max(p, q) < 1.0):
        raise DomainError(
            f"(p, q) = ({p:g}, {q:g}) outside the band min <= 0 <= max < 1")
    if p == q:
        # inside the band this forces p = q = 0
        return C_of(0.0, eta)
    if eta == 0.0:
        return math.exp((math.log1p(-q) - math.log1p(-p)) / (p - q))
    log_dp = math.log(-math.expm1((1.0 - p) * math.log1p(-eta)))
    log_dq = math.log(-math.expm1((1.0 - q) * math.log1p(-eta)))
    return math.exp((log_dq - log_dp) / (p - q))


def _check_eta(eta: float) -> None:
    if math.isnan(eta) or not 0.0 <= eta < 1.0:
        raise DomainError(f"eta must lie in [0, 1), got {eta!r}")


# -- the series F(x, q) ---------------------------------------------------


@dataclass(frozen=True)
class SeriesEval:
    """Partial sum of F(x, q) with a rigorous tail enclosure.

    The true value of F lies within [partial, partial + tail_bound]:
    once the summation index passes the sign change of the terms, the
    remaining tail is nonnegative and bounded above by the reported
    quadrature majorant.
    """

    partial: float
    terms: int
    tail_bound: float
    x: float
    q: float


def F_eval(f: GeneratorFunction, x: float, q: float, tol: float = 1e-12,
           _majorant_cache: dict | None = None) -> SeriesEval:
    """Evaluate F(x, q) = sum_{k>=0} q**k f(q**-k x) with tail control.

    Parameters
    ----------
    f : GeneratorFunction
        Nondecreasing profile with sign f(u) = sign(u - 1); integrability
        of u -> f(1/u) near 0 makes the tail bound close.
    x : float in (0, 1]
    q : float in (0, 1)
    tol : float
        Target bound on the neglected tail.

    The term count doubles until the tail majorant
    (1/(1-q)) * integral_0^{q**K} f(x/t) dt drops below `tol`; if that
    has not happened by 10**6 terms (or term evaluation leaves float
    range) TailBoundFailure is raised.  A supplied `_majorant_cache`
    replaces x by 1 in the majorant (valid for x <= 1 and f
    nondecreasing) so repeated evaluations at nearby x can share bounds.
    """
    x = float(x)
    q = float(q)
    if not 0.0 < x <= 1.0:
        raise DomainError(f"series argument x must be in (0, 1], got {x!r}")
    if not 0.0 < q < 1.0:
        raise DomainError(f"series ratio q must be in (0, 1), got {q!r}")
    if not tol > 0.0:
        raise DomainError("tol must be positive")

    log_q = math.log(q)
    # index of the first term with argument above 1 (terms positive after it)
    k_settle = max(0, math.floor(math.log(x) / log_q) + 1)
    quad_tol = 0.1 * tol * (1.0 - q)

    def tail_majorant(K: int) -> float:
        if _majorant_cache is not None:
            hit = _majorant_cache.get(K)
            if hit is not None:
                return hit
            top = 1.0
        else:
            top = x
        upper = q ** K
        if upper == 0.0:
            return 0.0
        res = tanh_sinh(lambda t: f.fn(top / t), 0.0, upper, tol=quad_tol)
        bound = (res.value + res.error) / (1.0 - q)
        if not (res.converged and math.isfinite(bound)):
            bound = math.inf
        if _majorant_cache is not None:
            _majorant_cache[K] = bound
        return bound

    partial = 0.0
    done = 0
    K = max(16, 2 * k_settle, 2)
    while True:
        K = min(K, _TERM_CAP)
        ks = np.arange(done, K, dtype=float)
        with np.errstate(all="ignore"):
            args = np.exp(math.log(x) - ks * log_q)
            terms = np.exp(ks * log_q) * np.asarray(f.fn(args), dtype=float)
        if not np.all(np.isfinite(terms)):
            raise TailBoundFailure(
                f"term evaluation left float range near k={done + int(np.argmax(~np.isfinite(terms)))}; "
                "the series has no closable tail at this tolerance")
        partial += float(terms.sum())
        done = K
        if K > k_settle:
            bound = tail_majorant(K)
            if bound <= tol:
                return SeriesEval(partial=partial, terms=done,
                                  tail_bound=bound, x=x, q=q)
        if K >= _TERM_CAP:
            raise TailBoundFailure(
                f"tail bound still above {tol:g} after {_TERM_CAP} terms")
        K = 2 * K


# -- characteristic equation ----------------------------------------------


@dataclass(frozen=True)
class HardyConstantResult:
    """A computed sharp constant with provenance.

    method is "closed" for table lookups, "root-integral" for the
    eta = 0 characteristic equation and "root-series" for eta > 0.
    residual is the characteristic function value at the root (0 for
    closed forms); bracket is the interval handed to the root finder.
    """

    value: float
    method: str
    residual: float
    bracket: tuple[float, float]
    eta: float


def solve_cef(f: GeneratorFunction, eta: float,
              tol: float = 1e-12) -> HardyConstantResult:
    """Root c of the characteristic equation for the profile f.

    eta = 0 solves integral_0^c f(1/x) dx = 0; eta > 0 solves
    F(1/c, 1-eta) = 0.  Requires f concave with the sign property and a
    declared integrable reciprocal profile (NotIntegrableError
    otherwise).  The bracket starts at (1, 2) and slides upward by
    doubling; no sign change below 1e9 raises NoBracketError.
    """
    _check_eta(eta)
    if not f.recip_integrable:
        raise NotIntegrableError(
            f"{f.label}: reciprocal profile declared non-integrable on (0, 1]")
    if not (f.sign_like and f.concave):
        raise DomainError(
            f"{f.label}: characteristic equation needs a concave profile "
            "with sign f(u) = sign(u - 1)")
    if tol <= 0.0:
        raise DomainError("tol must be positive")

    inner_tol = 0.1 * min(tol, 1e-12)
    if eta == 0.0:
        def charfun(c):
            return tanh_sinh(lambda t: f.fn(1.0 / t), 0.0, c,
                             tol=inner_tol).value

        method = "root-integral"
    else:
        q = 1.0 - eta
        cache: dict = {}

        def charfun(c):
            return F_eval(f, 1.0 / c, q, tol=inner_tol,
                          _majorant_cache=cache).partial

        method = "root-series"

    lo, hi = expand_bracket_up(charfun, 1.0, 2.0, cap=_BRACKET_CAP)
    res = bracketed_root(charfun, lo, hi, xtol=tol)
    return HardyConstantResult(value=res.root, method=method,
                               residual=abs(res.residual),
                               bracket=res.bracket, eta=eta)


# -- quasiarithmetic order detection --------------------------------------


def chi_f(f: GeneratorFunction, x: float) -> float:
    """The order indicator chi(x) = x f''(x)/f'(x) + 1.

    Constant equal to p on the power transforms x -> x**p; its limit at
    0+ is the power scale a generator lives on.  Analytic derivatives
    are used when declared, central differences (step 1e-5 x) otherwise.
    """
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"chi probe point must be positive, got {x!r}")
    if f.d1 is not None and f.d2 is not None:
        d1 = float(np.asarray(f.d1(np.array([x])), dtype=float)[0])
        d2 = float(np.asarray(f.d2(np.array([x])), dtype=float)[0])
    else:
        h = 1e-5 * x
        try:
            with np.errstate(all="ignore"):
                vals = np.asarray(
                    f.fn(np.array([x - h, x, x + h])), dtype=float)
        except Exception as exc:
            raise DerivativeUnavailableError(
                f"finite differences failed at x={x:g}: {exc}") from exc
        if not np.all(np.isfinite(vals)):
            raise DerivativeUnavailableError(
                f"finite differences hit non-finite values at x={x:g}")
        d1 = float((vals[2] - vals[0]) / (2.0 * h))
        d2 = float((vals[2] - 2.0 * vals[1] + vals[0]) / (h * h))
    if not (math.isfinite(d1) and math.isfinite(d2)):
        raise DerivativeUnavailableError(
            f"derivatives not finite at x={x:g}")
    if d1 == 0.0 or abs(d1) < 5e-300:
        raise ZeroDerivativeError(f"f'(x) vanished at x={x:g}")
    return x * d2 / d1 + 1.0


@dataclass(frozen=True)
class LimitProbe:
    """Probe schedule for chi-limit detection at 0+.

    Points are 10**-j for j in start..stop; the limit is accepted once
    `agree` successive values match within `tol`.
    """

    start: int = 1
    stop: int = 12
    agree: int = 3
    tol: float = 1e-6


def detect_order(g: GeneratorFunction,
                 probe: LimitProbe = LimitProbe()) -> float:
    """Limit of chi(x) as x -> 0+, detected over the probe ladder.

    Raises LimitNotDetected when no `agree` successive probe values
    match within the probe tolerance.
    """
    if probe.agree < 2 or probe.stop <= probe.start:
        raise DomainError("malformed probe schedule")
    chis: list[float] = []
    for j in range(probe.start, probe.stop + 1):
        chis.append(chi_f(g, 10.0 ** -j))
        if len(chis) >= probe.agree:
            window = chis[-probe.agree:]
            if all(abs(window[i + 1] - window[i]) <= probe.tol
                   for i in range(len(window) - 1)):
                return window[-1]
    raise LimitNotDetected(
        f"chi values {chis} never stabilized within {probe.tol:g}")


def qa_constant(g: GeneratorFunction, eta: float,
                probe: LimitProbe = LimitProbe()) -> HardyConstantResult:
    """Sharp constant for the quasiarithmetic mean with generator g.

    Detects p = lim chi(x) as x -> 0+ over the probe ladder and returns
    the power-family constant C(p, eta).  LimitNotDetected when the
    ladder never stabilizes; PGeqOne when the detected order is >= 1
    (the constant is then +inf, by the classical table).
    """
    _check_eta(eta)
    detected = detect_order(g, probe)
    if detected >= 1.0:
        raise PGeqOne(
            f"detected order {detected:.9g} >= 1: constant is +inf",
            p=detected)
    value = C_of(detected, eta)
    return HardyConstantResult(value=value, method="closed", residual=0.0,
                               bracket=(value, value), eta=eta)


# -- family dispatch -------------------------------------------------------


def constant_closed(spec: MeanSpec, eta: float) -> float:
    """Closed-form sharp constant for a mean family at weight limit eta.

    Power orders >= 1 (and the exp-like quasiarithmetic generators that
    detect to them) give +inf, an explicit marker rather than an
    overflow.  Deviation kernels have no direct closed form here:
    normalize and take the kernel trace first.
    """
    _check_eta(eta)
    if isinstance(spec, Power):
        p = spec.p
        if math.isnan(p):
            raise DomainError("order must not be NaN")
        if p == -math.inf:
            return 1.0
        if p >= 1.0:
            return math.inf
        return C_of(p, eta)
    if isinstance(spec, Gini):
        return gini_constant(spec.p, spec.q, eta)
    if isinstance(spec, QuasiArithmetic):
        try:
            return qa_constant(spec.g, eta).value
        except PGeqOne:
            return math.inf
    if isinstance(spec, HomogeneousDeviation):
        f = spec.f
        if f.family == "log":
            return C_of(0.0, eta)
        if f.family.startswith("power:"):
            p = float(f.family.split(":")[1])
            return math.inf if p >= 1.0 else C_of(p, eta)
        if f.family.startswith("gini:"):
            pq = f.family.split(":")[1].split(",")
            return gini_constant(float(pq[0]), float(pq[1]), eta)
        if not f.recip_integrable:
            return math.inf
        raise DomainError(
            f"no closed form for profile {f.label!r}; use the root route")
    if isinstance(spec, Deviation):
        raise DomainError(
            "no direct constant for a raw kernel: normalize_kernel, take "
            "h_of_kernel, and solve with that profile")
    raise DomainError(f"unknown mean spec {spec!r}")


def constant_root(spec: MeanSpec, eta: float,
                  tol: float = 1e-12) -> HardyConstantResult:
    """Characteristic-equation route to the same constants.

    Power and Gini families solve with their generator profiles;
    quasiarithmetic generators first detect their power order.  Used to
    cross-check the closed forms.
    """
    _check_eta(eta)
    if isinstance(spec, Power):
        return solve_cef(dev_power(spec.p), eta, tol=tol)
    if isinstance(spec, Gini):
        return solve_cef(dev_gini(spec.p, spec.q), eta, tol=tol)
    if isinstance(spec, QuasiArithmetic):
        p = detect_order(spec.g)
        if p >= 1.0:
            raise PGeqOne(
                f"detected order {p:.9g} >= 1: constant is +inf", p=p)
        return solve_cef(dev_power(p), eta, tol=tol)
    if isinstance(spec, HomogeneousDeviation):
        return solve_cef(spec.f, eta, tol=tol)
    raise DomainError(f"no root route for {spec!r}")


def auto_constant(spec: MeanSpec, eta: float) -> float:
    """Constant used when the CLI or verifier is asked for `auto`."""
    return constant_closed(spec, eta)
