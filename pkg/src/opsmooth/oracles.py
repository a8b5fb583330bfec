"""Brute-force grid oracles and seeded comparison batteries.

Everything here re-derives a verdict by exhaustive evaluation (lambda
grids, sphere grids, dual-sphere grids) so the fast library paths can be
audited against an independent computation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .operators import MatrixOperator, op_norm
from .orthogonality import ORTH_RTOL, bj_orthogonal, directional_class
from .spaces import NormSpec, Vector, is_smooth_point, lp_norm, norm

_CHUNK = 262_144


def _lp_rows_direct(arr: np.ndarray, p: float) -> np.ndarray:
    """Row-wise lp norms without the overflow guard (grid values are O(1))."""
    if math.isinf(p):
        return np.abs(arr).max(axis=1)
    if p == 1.0:
        return np.abs(arr).sum(axis=1)
    if p == 2.0:
        return np.sqrt((arr * arr).sum(axis=1))
    return (np.abs(arr) ** p).sum(axis=1) ** (1.0 / p)


# ---------------------------------------------------------------------------
# lambda-grid minimization


@dataclass(frozen=True)
class LineScan:
    """Dense-grid minima of t -> ||x + t*y||, two-sided and one-sided."""

    min_value: float
    minimizer: float
    min_plus: float
    min_minus: float


def line_scan(x: Vector, y: Vector, span: float = 10.0,
              count: int = 1_000_000) -> LineScan:
    """Scan ||x + t*y|| over a symmetric t-grid of half-width span*||x||/||y||.

    The grid always contains t = 0 exactly, so boundary minima at the
    base point are evaluated without discretization error.
    """
    b = span * norm(x) / norm(y)
    count |= 1  # odd count puts t = 0 on the grid
    ts = np.linspace(-b, b, count)
    best_val, best_t = math.inf, 0.0
    best_plus = best_minus = math.inf
    for start in range(0, count, _CHUNK):
        t = ts[start:start + _CHUNK]
        vals = _lp_rows_direct(x.coords[None, :] + t[:, None] * y.coords[None, :], x.space.p)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_t = float(vals[i]), float(t[i])
        plus = t >= 0.0
        if plus.any():
            best_plus = min(best_plus, float(vals[plus].min()))
        if (~plus).any():
            best_minus = min(best_minus, float(vals[~plus].min()))
    # t = 0 belongs to both half-lines
    zero_val = float(lp_norm(x.coords, x.space.p))
    best_minus = min(best_minus, zero_val)
    best_plus = min(best_plus, zero_val)
    return LineScan(best_val, best_t, best_plus, best_minus)


def line_min_grid(x: Vector, y: Vector, span: float = 10.0,
                  count: int = 1_000_000) -> tuple[float, float]:
    scan = line_scan(x, y, span=span, count=count)
    return scan.min_value, scan.minimizer


def bj_grid_verdict(x: Vector, y: Vector, count: int = 1_000_000) -> bool:
    if y.is_zero():
        return True
    val, _ = line_min_grid(x, y, count=count)
    return val >= norm(x) * (1.0 - ORTH_RTOL)


# ---------------------------------------------------------------------------
# sphere grids


@lru_cache(maxsize=32)
def sphere_grid(dim: int, p: float, count: int) -> np.ndarray:
    """Dense grid on the unit lp sphere, augmented with axis and sign vectors.

    The augmentation makes the grid exact at the polytope extreme points,
    where the l1 and linf maxima live.
    """
    if dim == 1:
        pts = np.array([[1.0], [-1.0]])
    elif dim == 2:
        t = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
        pts = np.column_stack([np.cos(t), np.sin(t)])
    elif dim == 3:
        n_theta = max(8, int(math.sqrt(count / 2.0)))
        n_phi = 2 * n_theta
        theta = np.linspace(0.0, math.pi, n_theta)
        phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        st = np.sin(tt).ravel()
        pts = np.column_stack([st * np.cos(pp).ravel(), st * np.sin(pp).ravel(),
                               np.cos(tt).ravel()])
    else:
        raise ValueError("sphere grids support dim <= 3")
    extremes = list(np.eye(dim)) + list(-np.eye(dim))
    extremes += [np.array(s, dtype=float)
                 for s in itertools.product((1.0, -1.0), repeat=dim)]
    pts = np.vstack([pts, np.stack(extremes)])
    norms = _lp_rows_direct(pts, p)
    keep = norms > 0.0
    out = pts[keep] / norms[keep][:, None]
    out.setflags(write=False)
    return out


def op_norm_grid(T: MatrixOperator, count: int = 1_000_000) -> float:
    """Max of ||Tx|| over the dense lp sphere grid."""
    grid = sphere_grid(T.domain.dim, T.domain.p, count)
    best = 0.0
    for start in range(0, grid.shape[0], _CHUNK):
        block = grid[start:start + _CHUNK]
        vals = _lp_rows_direct(block @ T.entries.T, T.codomain.p)
        best = max(best, float(vals.max()))
    return best


# ---------------------------------------------------------------------------
# dual-sphere smooth-point oracle


def _dual_sphere_directions(dim: int, step: float):
    if dim == 1:
        yield np.array([[1.0], [-1.0]])
        return
    if dim == 2:
        n = int(2.0 * math.pi / step) + 1
        t = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        yield np.column_stack([np.cos(t), np.sin(t)])
        return
    n_theta = int(math.pi / step) + 1
    n_phi = int(2.0 * math.pi / step) + 1
    thetas = np.unique(np.concatenate([
        np.linspace(0.0, math.pi, n_theta),
        [0.5 * math.pi],  # exact equator row catches coordinate-plane faces
    ]))
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    cp, sp_ = np.cos(phi), np.sin(phi)
    block = 32
    for i in range(0, thetas.size, block):
        th = thetas[i:i + block]
        st, ct = np.sin(th), np.cos(th)
        x = (st[:, None] * cp[None, :]).ravel()
        y = (st[:, None] * sp_[None, :]).ravel()
        z = np.repeat(ct, phi.size)
        yield np.column_stack([x, y, z])


def smooth_point_grid_verdict(x: Vector, step: float = 1e-3,
                              distinct_tol: float = 1e-2) -> tuple[bool, float]:
    """Smoothness by dual-sphere grid search.

    Collects the grid functionals attaining the maximal pairing with x
    (within float roundoff of the grid maximum) and measures their
    sup-metric diameter: two attaining functionals further apart than
    ``distinct_tol`` witness non-smoothness.
    """
    if x.is_zero():
        raise ValueError("smoothness oracle requires a nonzero vector")
    q = x.space.dual().p
    best = -math.inf
    blocks = []
    for dirs in _dual_sphere_directions(x.space.dim, step):
        norms = _lp_rows_direct(dirs, q)
        keep = norms > 0.0
        funcs = dirs[keep] / norms[keep][:, None]
        vals = funcs @ x.coords
        blocks.append((funcs, vals))
        best = max(best, float(vals.max()))
    slack = 1e-12 * max(1.0, abs(best))
    mins = np.full(x.space.dim, math.inf)
    maxs = np.full(x.space.dim, -math.inf)
    hits = 0
    for funcs, vals in blocks:
        sel = funcs[vals >= best - slack]
        if sel.size:
            hits += sel.shape[0]
            mins = np.minimum(mins, sel.min(axis=0))
            maxs = np.maximum(maxs, sel.max(axis=0))
    diameter = float((maxs - mins).max()) if hits else 0.0
    return diameter <= distinct_tol, diameter


# ---------------------------------------------------------------------------
# seeded comparison batteries


def random_unit(rng: np.random.Generator, dim: int, p: float) -> Vector:
    v = rng.standard_normal(dim)
    return Vector(v / lp_norm(v, p), NormSpec(p, dim))


def kernel_orthogonal_direction(rng: np.random.Generator, x: Vector) -> Vector:
    """A direction exactly orthogonal to x, via a norming-functional kernel."""
    f = is_smooth_point(x).witnesses[0]
    v = rng.standard_normal(x.space.dim)
    shifted = v - (f(v) / f(x)) * x.coords
    return Vector(shifted, x.space)


@dataclass(frozen=True)
class BatteryResult:
    instances: int
    disagreements: int
    worst: float

    @property
    def ok(self) -> bool:
        return self.disagreements == 0


def bj_battery(p: float, dim: int, count: int, grid_count: int = 1_000_000,
               seed: int = 0) -> BatteryResult:
    """Fast-path vs grid verdicts for orthogonality and directional classes.

    Half the instances are generic pairs, half are constructed orthogonal
    pairs, so both verdict branches are exercised.  Epsilon thresholds
    are kept decisively away from the one-sided minima; boundary ties
    are tolerance territory, not verdict territory.
    """
    rng = np.random.default_rng(seed)
    eps_cycle = (0.0, 0.3, 0.8)
    disagreements = 0
    done = 0
    while done < count:
        x = random_unit(rng, dim, p)
        constructed = done % 2 == 1
        if constructed:
            y = kernel_orthogonal_direction(rng, x)
            if y.is_zero():
                continue
        else:
            y = random_unit(rng, dim, p)
        eps = eps_cycle[done % len(eps_cycle)]
        nx = norm(x)
        threshold = math.sqrt(1.0 - eps * eps) * nx
        scan = line_scan(x, y, count=grid_count)
        m_plus, m_minus = scan.min_plus, scan.min_minus
        # Keep thresholds decisively away from the one-sided minima.
        # Exact ties (margin below float scale) are safe: both the grid
        # and the search evaluate the tying point itself.  The unsafe
        # band is a margin comparable to the estimation error.
        margins = [abs(m_plus - nx), abs(m_minus - nx)]
        if eps > 0.0:
            margins += [abs(m_plus - threshold), abs(m_minus - threshold)]
        if any(1e-9 * nx < m < 1e-3 * nx for m in margins):
            continue
        done += 1
        fast = bj_orthogonal(x, y)
        grid_orth = scan.min_value >= nx * (1.0 - ORTH_RTOL)
        if fast.orthogonal != grid_orth:
            disagreements += 1
        cls = directional_class(x, y, eps)
        grid_plus = m_plus >= threshold - ORTH_RTOL * nx
        grid_minus = m_minus >= threshold - ORTH_RTOL * nx
        if cls.in_plus != grid_plus or cls.in_minus != grid_minus:
            disagreements += 1
    return BatteryResult(done, disagreements, 0.0)


def op_norm_battery(p: float, r: float, dim: int, count: int,
                    grid_count: int = 1_000_000, seed: int = 0,
                    rel_tol: float = 1e-4) -> BatteryResult:
    """Relative error of op_norm against the dense sphere-grid oracle."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    bad = 0
    for _ in range(count):
        entries = rng.standard_normal((dim, dim))
        T = MatrixOperator(entries, NormSpec(p, dim), NormSpec(r, dim))
        if T.is_zero():
            continue
        fast = op_norm(T, seed=seed).value
        grid = op_norm_grid(T, count=grid_count)
        err = abs(fast - grid) / max(grid, 1e-300)
        worst = max(worst, err)
        if err > rel_tol:
            bad += 1
    return BatteryResult(count, bad, worst)


def smooth_point_battery(p: float, dim: int, count: int = 10, step: float = 1e-3,
                         seed: int = 0, corners: bool = False) -> BatteryResult:
    """Fast smooth-point verdicts vs the dual-sphere grid oracle.

    Generic instances are kept away from support/argmax boundaries; the
    crafted half plants exact zeros (p=1) or exact ties (p=inf) to force
    non-smooth points.  ``corners=True`` checks the sign-vector corners
    instead.
    """
    space = NormSpec(p, dim)
    rng = np.random.default_rng(seed)
    instances: list[Vector] = []
    if corners:
        for s in itertools.product((1.0, -1.0), repeat=dim):
            instances.append(Vector(np.array(s), space))
    else:
        while len(instances) < count:
            v = rng.standard_normal(dim)
            a = np.abs(v)
            if a.min() < 0.05 * a.max():
                continue
            second = np.partition(a, -2)[-2] if dim > 1 else 0.0
            if second > 0.95 * a.max():
                continue
            instances.append(Vector(v, space))
            if len(instances) < count and dim > 1:
                w = v.copy()
                if math.isinf(p):
                    j, k = np.argsort(a)[-2:]
                    w[j] = math.copysign(a[k], w[j])  # exact magnitude tie
                else:
                    w[int(np.argmin(a))] = 0.0
                instances.append(Vector(w, space))
    disagreements = 0
    for x in instances:
        fast = is_smooth_point(x).smooth
        oracle, _ = smooth_point_grid_verdict(x, step=step)
        if fast != oracle:
            disagreements += 1
    return BatteryResult(len(instances), disagreements, 0.0)
