"""One-dimensional convex minimization by golden-section search."""

from __future__ import annotations

import math
from dataclasses import dataclass

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ScalarMin:
    x: float
    value: float
    evals: int


def golden_section(f, lo: float, hi: float, xtol: float = 1e-12,
                   max_iter: int = 200) -> ScalarMin:
    """Minimize a convex (unimodal) function on [lo, hi].

    Returns the best point actually evaluated, so the reported value is
    always an upper bound on the true minimum.  The endpoints are
    evaluated too, which keeps boundary minima honest.
    """
    if not hi > lo:
        raise ValueError("golden_section requires lo < hi")
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    for _ in range(max_iter):
        if (b - a) <= xtol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        evals += 1
    candidates = [(fc, c), (fd, d), (f(lo), lo), (f(hi), hi)]
    evals += 2
    fbest, xbest = min(candidates)
    return ScalarMin(x=xbest, value=fbest, evals=evals)
