"""Birkhoff-James orthogonality on lp spaces.

x is orthogonal to y when ||x + t*y|| >= ||x|| for every real t; the
decision reduces to one convex minimization in t.  Also provided: the
approximate (eps) variant, the one-sided directional classes, and a
sampled probe of right additivity, which characterizes smooth points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .optim import golden_section
from .spaces import (
    FORMULA_TOL,
    NormingFunctional,
    Vector,
    duality_map,
    is_smooth_point,
    lp_norm,
    norm,
    sip,
)

# One-sided verdict tolerance: orthogonality is a closed condition, so a
# minimum within ORTH_RTOL*||x|| of ||x|| is declared orthogonal.
ORTH_RTOL = 1e-7

# Bracket margin: the minimizer satisfies |t| <= 2||x||/||y||; a 4x margin
# keeps the bracket safely interior.
_BRACKET_MARGIN = 4.0


@dataclass(frozen=True)
class OrthogonalityVerdict:
    orthogonal: bool
    min_value: float
    minimizer: float
    certificate: NormingFunctional | None = None
    sip_value: float | None = None


@dataclass(frozen=True)
class DirectionalClass:
    eps: float
    in_plus: bool
    in_minus: bool
    min_plus: float = math.nan
    min_minus: float = math.nan


@dataclass(frozen=True)
class AdditivityProbeReport:
    passes: bool
    counterexample: tuple[Vector, Vector] | None
    tested: int


def _check_pair(x: Vector, y: Vector):
    if x.space != y.space:
        raise ValueError("vectors must live in the same space")
    if x.is_zero():
        raise ValueError("the base vector x must be nonzero")


def _line_norm(x: Vector, y: Vector):
    xc, yc, p = x.coords, y.coords, x.space.p
    return lambda t: lp_norm(xc + t * yc, p)


def _bracket(x: Vector, y: Vector) -> float:
    return _BRACKET_MARGIN * 2.0 * norm(x) / norm(y)


def _annihilating_functional(x: Vector, y: Vector) -> NormingFunctional | None:
    """A norming functional of x that kills y, when one exists.

    For 1 < p < inf the canonical functional is the only candidate.  At
    the endpoints the norming set is a polytope and an annihilating
    element is found by explicit convex combination.
    """
    p = x.space.p
    tol = FORMULA_TOL * max(1.0, norm(x)) * max(1.0, norm(y))
    if not math.isinf(p) and p > 1.0:
        f = duality_map(x)
        return f if abs(f(y)) <= tol else None
    c, yc = x.coords, y.coords
    if math.isinf(p):
        # norming set = convex hull of sign(x_i) e_i over maximal i
        a = np.abs(c)
        mask = a >= a.max() * (1.0 - 1e-12)
        idx = np.flatnonzero(mask)
        vals = np.sign(c[idx]) * yc[idx]
        i_lo, i_hi = idx[np.argmin(vals)], idx[np.argmax(vals)]
        v_lo, v_hi = vals.min(), vals.max()
        if v_lo > tol or v_hi < -tol:
            return None
        coeffs = np.zeros_like(c)
        if v_hi - v_lo <= tol:
            coeffs[i_lo] = np.sign(c[i_lo])
        else:
            t = -v_lo / (v_hi - v_lo)
            coeffs[i_hi] = t * np.sign(c[i_hi])
            coeffs[i_lo] += (1.0 - t) * np.sign(c[i_lo])
        return NormingFunctional(coeffs, x.space, False)
    # p = 1: signs are pinned on the support, free in [-1, 1] off it
    a = np.abs(c)
    mask = a > a.max() * 1e-12
    pinned = float(np.sum(np.sign(c[mask]) * yc[mask]))
    free = np.flatnonzero(~mask)
    capacity = float(np.sum(np.abs(yc[free])))
    if abs(pinned) > capacity + tol:
        return None
    coeffs = np.where(mask, np.sign(c), 0.0)
    remaining = -pinned
    for j in free:
        if abs(remaining) <= tol or yc[j] == 0.0:
            continue
        take = max(-abs(yc[j]), min(abs(yc[j]), remaining * np.sign(yc[j])))
        # contribution coeff*y_j = take requires coeff = take/y_j in [-1,1]
        coeffs[j] = take / yc[j]
        remaining -= take
    return NormingFunctional(coeffs, x.space, False)


def bj_orthogonal(x: Vector, y: Vector) -> OrthogonalityVerdict:
    """Decide x perp_B y by minimizing t -> ||x + t*y|| over the reals."""
    _check_pair(x, y)
    nx = norm(x)
    if y.is_zero():
        return OrthogonalityVerdict(True, nx, 0.0, duality_map(x))
    b = _bracket(x, y)
    res = golden_section(_line_norm(x, y), -b, b, xtol=1e-12 * (1.0 + b))
    orthogonal = res.value >= nx * (1.0 - ORTH_RTOL)
    p = x.space.p
    sip_value = None
    if 1.0 < p < math.inf:
        sip_value = sip(y, x)
    certificate = _annihilating_functional(x, y) if orthogonal else None
    return OrthogonalityVerdict(orthogonal, res.value, res.x, certificate, sip_value)


def approx_bj(x: Vector, y: Vector, eps: float) -> bool:
    """Approximate orthogonality: inf_t ||x+t*y|| >= sqrt(1-eps^2)*||x||."""
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must lie in [0, 1)")
    _check_pair(x, y)
    nx = norm(x)
    if y.is_zero():
        return True
    b = _bracket(x, y)
    res = golden_section(_line_norm(x, y), -b, b, xtol=1e-12 * (1.0 + b))
    return res.value >= math.sqrt(1.0 - eps * eps) * nx - ORTH_RTOL * nx


def directional_class(x: Vector, y: Vector, eps: float) -> DirectionalClass:
    """Evaluate the one-sided memberships y in x^{+eps} and y in x^{-eps}."""
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must lie in [0, 1)")
    _check_pair(x, y)
    nx = norm(x)
    threshold = math.sqrt(1.0 - eps * eps) * nx - ORTH_RTOL * nx
    if y.is_zero():
        return DirectionalClass(eps, True, True, nx, nx)
    f = _line_norm(x, y)
    b = _bracket(x, y)
    res_plus = golden_section(f, 0.0, b, xtol=1e-12 * (1.0 + b))
    res_minus = golden_section(f, -b, 0.0, xtol=1e-12 * (1.0 + b))
    return DirectionalClass(
        eps,
        in_plus=res_plus.value >= threshold,
        in_minus=res_minus.value >= threshold,
        min_plus=res_plus.value,
        min_minus=res_minus.value,
    )


def _project_to_kernel(v: np.ndarray, x: Vector, f: NormingFunctional) -> Vector:
    """v minus its f-component along x; lands in ker(f), hence in x-perp."""
    shifted = v - (f(v) / f(x)) * x.coords
    return Vector(shifted, x.space)


def right_additivity_probe(x: Vector, sample_count: int, seed: int) -> AdditivityProbeReport:
    """Sample y, z from x-perp and test x perp_B (y+z).

    Pairs are drawn from kernels of norming functionals (two distinct
    witnesses when x is not smooth, so failures are found constructively
    rather than by luck).  The first failing pair is reported.
    """
    if x.is_zero():
        raise ValueError("probe requires a nonzero base vector")
    verdict = is_smooth_point(x)
    f = verdict.witnesses[0]
    g = verdict.witnesses[-1]
    rng = np.random.default_rng(seed)
    n = x.space.dim
    tested = 0
    for _ in range(sample_count):
        y = _project_to_kernel(rng.standard_normal(n), x, f)
        z = _project_to_kernel(rng.standard_normal(n), x, g)
        if y.is_zero() or z.is_zero():
            continue
        tested += 1
        s = Vector(y.coords + z.coords, x.space)
        if s.is_zero():
            continue
        if not bj_orthogonal(x, s).orthogonal:
            return AdditivityProbeReport(False, (y, z), tested)
    return AdditivityProbeReport(True, None, tested)
