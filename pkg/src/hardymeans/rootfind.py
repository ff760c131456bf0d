"""Bracketed scalar root finding.

Thin layer over SciPy's Brent implementation (bracketed bisection with
inverse-quadratic refinement) that reports the residual and the bracket
actually used, plus a slide-and-double bracket search for roots of
decreasing functions on (1, inf).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, NoBracketError

# SciPy's floor on the relative tolerance; gives near machine-relative roots.
RTOL_FLOOR = 4.0 * float(np.finfo(float).eps)


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    bracket: tuple[float, float]
    iterations: int


def bracketed_root(f, lo: float, hi: float, xtol: float = 1e-12,
                   rtol: float = RTOL_FLOOR) -> RootResult:
    """Root of f on [lo, hi], where f(lo) and f(hi) must straddle zero.

    Raises BracketError when the endpoint values share a sign.  Endpoint
    zeros are returned directly.
    """
    flo = float(f(lo))
    fhi = float(f(hi))
    if flo == 0.0:
        return RootResult(float(lo), 0.0, (float(lo), float(hi)), 0)
    if fhi == 0.0:
        return RootResult(float(hi), 0.0, (float(lo), float(hi)), 0)
    if flo * fhi > 0.0:
        raise BracketError(
            f"no sign change on [{lo:g}, {hi:g}]: f(lo)={flo:g}, f(hi)={fhi:g}")
    root, report = brentq(f, lo, hi, xtol=xtol, rtol=max(rtol, RTOL_FLOOR),
                          full_output=True)
    return RootResult(float(root), float(f(root)), (float(lo), float(hi)),
                      int(report.iterations))


def expand_bracket_up(f, lo: float = 1.0, hi: float = 2.0,
                      cap: float = 1e9) -> tuple[float, float]:
    """Slide and double [lo, hi] upward until f changes sign.

    Returns the first interval whose endpoint values straddle (or touch)
    zero.  Raises NoBracketError once hi exceeds `cap`.
    """
    flo = float(f(lo))
    if flo == 0.0:
        return float(lo), float(hi)
    while hi <= cap:
        fhi = float(f(hi))
        if flo * fhi <= 0.0:
            return float(lo), float(hi)
        lo, flo = hi, fhi
        hi = hi * 2.0
    raise NoBracketError(f"no sign change found below {cap:g}")
