"""Norms, duality maps, semi-inner-products and smooth-point tests on
finite-dimensional real lp spaces.

Everything here is a pure function of its inputs.  ``p`` is a runtime
parameter; the endpoint cases ``p = 1`` and ``p = inf`` are handled by
dedicated polyhedral branches rather than limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Default tolerances: closed-form identities are held to FORMULA_TOL,
# optimizer-produced quantities to OPTIMIZER_TOL, and maximizer clustering
# to CLUSTER_TOL.
FORMULA_TOL = 1e-9
OPTIMIZER_TOL = 1e-6
CLUSTER_TOL = 1e-3

# Relative threshold for classifying a coordinate as zero (p=1 branch) or
# as tied with the maximum (p=inf branch).
_SUPPORT_RTOL = 1e-12


def conjugate_exponent(p: float) -> float:
    """Exponent q with 1/p + 1/q = 1 (q=inf for p=1, q=1 for p=inf)."""
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class NormSpec:
    """A real lp space: exponent ``p`` in [1, inf] and dimension ``dim``.

    ``dim=None`` is the symbolic-infinite marker used by the diagonal
    operator module; vectors can only live in finite-dimensional specs.
    """

    p: float
    dim: int | None

    def __post_init__(self):
        p = float(self.p)
        if not (p >= 1.0):
            raise ValueError(f"p must satisfy p >= 1, got {self.p}")
        object.__setattr__(self, "p", p)
        if self.dim is not None:
            if int(self.dim) < 1:
                raise ValueError(f"dim must be >= 1, got {self.dim}")
            object.__setattr__(self, "dim", int(self.dim))

    @property
    def q(self) -> float:
        return conjugate_exponent(self.p)

    @property
    def is_hilbert(self) -> bool:
        return self.p == 2.0

    def dual(self) -> "NormSpec":
        return NormSpec(self.q, self.dim)


@dataclass(frozen=True)
class Vector:
    """A point of a finite-dimensional lp space."""

    coords: np.ndarray
    space: NormSpec

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim != 1:
            raise ValueError("coords must be one-dimensional")
        if self.space.dim is None:
            raise ValueError("vectors require a finite-dimensional space")
        if coords.shape[0] != self.space.dim:
            raise ValueError(
                f"dimension mismatch: {coords.shape[0]} coords in a "
                f"dim-{self.space.dim} space"
            )
        object.__setattr__(self, "coords", coords)

    def is_zero(self) -> bool:
        return bool(np.all(self.coords == 0.0))


def lp_norm(coords: np.ndarray, p: float) -> float:
    """lp norm of a coordinate array, scaled to avoid overflow."""
    a = np.abs(np.asarray(coords, dtype=float))
    if a.size == 0:
        return 0.0
    m = float(a.max())
    if m == 0.0:
        return 0.0
    if math.isinf(p):
        return m
    if p == 1.0:
        return float(a.sum())
    if p == 2.0:
        return m * float(np.sqrt(np.sum((a / m) ** 2)))
    return m * float(np.sum((a / m) ** p) ** (1.0 / p))


def norm(x: Vector) -> float:
    """Norm of ``x`` in its own space."""
    return lp_norm(x.coords, x.space.p)


@dataclass(frozen=True)
class NormingFunctional:
    """A dual-space vector f with ||f||_q = 1 and f(base) = ||base||.

    ``unique`` is True iff the base point has no other norming functional,
    i.e. iff the base point is smooth.
    """

    coeffs: np.ndarray
    space: NormSpec  # the primal space; coeffs live in its dual
    unique: bool

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))

    def __call__(self, v) -> float:
        coords = v.coords if isinstance(v, Vector) else np.asarray(v, dtype=float)
        return float(np.dot(self.coeffs, coords))

    def dual_norm(self) -> float:
        return lp_norm(self.coeffs, self.space.q)


@dataclass(frozen=True)
class SmoothnessVerdict:
    """Whether a point is smooth; if not, at least two distinct witnesses."""

    smooth: bool
    witnesses: list = field(default_factory=list)


def _support_mask(coords: np.ndarray) -> np.ndarray:
    """Coordinates considered nonzero, relative to the largest magnitude."""
    a = np.abs(coords)
    m = a.max()
    return a > m * _SUPPORT_RTOL


def _argmax_mask(coords: np.ndarray) -> np.ndarray:
    """Coordinates tied (to relative tolerance) with the max magnitude."""
    a = np.abs(coords)
    m = a.max()
    return a >= m * (1.0 - _SUPPORT_RTOL)


def duality_map(x: Vector) -> NormingFunctional:
    """The canonical norming functional of a nonzero vector.

    For 1 < p < inf this is the unique functional
    f_i = sign(x_i) |x_i|^(p-1) / ||x||^(p-1).  At the polyhedral
    endpoints a canonical selection is made: for p=inf the uniform
    average of sign functionals over all maximal coordinates, for p=1
    signs on the support with zeros elsewhere.
    """
    if x.is_zero():
        raise ValueError("duality_map requires a nonzero vector")
    p = x.space.p
    c = x.coords
    if math.isinf(p):
        mask = _argmax_mask(c)
        coeffs = np.where(mask, np.sign(c), 0.0) / mask.sum()
        unique = int(mask.sum()) == 1
    elif p == 1.0:
        mask = _support_mask(c)
        coeffs = np.where(mask, np.sign(c), 0.0)
        unique = bool(mask.all())
    else:
        nx = lp_norm(c, p)
        scaled = np.abs(c) / nx
        coeffs = np.sign(c) * scaled ** (p - 1.0)
        unique = True
    return NormingFunctional(coeffs, x.space, unique)


def sip(y: Vector, x: Vector) -> float:
    """Semi-inner-product [y, x] = ||x|| * f_x(y) with the canonical f_x.

    Linear in the first argument, compatible with the norm
    ([x, x] = ||x||^2), and homogeneous in the second argument because
    the canonical duality map is sign-symmetric and scale-invariant.
    By convention [y, 0] = 0.
    """
    if x.space != y.space:
        raise ValueError("sip requires both vectors in the same space")
    if x.is_zero():
        return 0.0
    f = duality_map(x)
    return norm(x) * f(y)


def is_smooth_point(x: Vector) -> SmoothnessVerdict:
    """Decide smoothness of a nonzero point of an lp space.

    Smooth for every 1 < p < inf; for p=1 iff every coordinate is
    nonzero; for p=inf iff the maximum magnitude is attained at exactly
    one coordinate.  When not smooth, two explicit distinct norming
    functionals are returned as witnesses.
    """
    if x.is_zero():
        raise ValueError("is_smooth_point requires a nonzero vector")
    p = x.space.p
    c = x.coords
    if math.isinf(p):
        mask = _argmax_mask(c)
        idx = np.flatnonzero(mask)
        if idx.size == 1:
            return SmoothnessVerdict(True, [duality_map(x)])
        witnesses = []
        for i in idx[:2]:
            w = np.zeros_like(c)
            w[i] = np.sign(c[i])
            witnesses.append(NormingFunctional(w, x.space, False))
        return SmoothnessVerdict(False, witnesses)
    if p == 1.0:
        mask = _support_mask(c)
        if mask.all():
            return SmoothnessVerdict(True, [duality_map(x)])
        base = np.where(mask, np.sign(c), 0.0)
        hole = int(np.flatnonzero(~mask)[0])
        w_plus = base.copy()
        w_plus[hole] = 1.0
        w_minus = base.copy()
        w_minus[hole] = -1.0
        return SmoothnessVerdict(
            False,
            [
                NormingFunctional(w_plus, x.space, False),
                NormingFunctional(w_minus, x.space, False),
            ],
        )
    return SmoothnessVerdict(True, [duality_map(x)])
