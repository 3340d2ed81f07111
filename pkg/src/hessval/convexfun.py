"""Representations of convex functions and the epigraph calculus.

Every variant is an immutable object exposing ``evaluate``, ``gradient`` and
``hessian`` for batches of points of shape ``(..., dim)``.  The value
``+inf`` (``INF``) marks points outside the effective domain and follows
IEEE arithmetic: ``INF + a == INF`` and ``min(INF, a) == a``.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (DimensionMismatch, NonConvexMin, NonpositiveScale,
                     NotDifferentiable, SingularHessian, UnboundedResult,
                     UnsupportedVariant)
from .polytope import Polytope

__all__ = [
    "INF", "ConvexFunction", "Grid", "PiecewiseAffine", "AffinePiece",
    "Quadratic", "RadialConeU", "RadialConeV", "RadialProfile",
    "IndicatorLinear", "KinkSum", "PiecewiseQuadratic1D", "Transformed",
    "evaluate", "gradient", "hessian", "inf_convolve", "epi_multiply",
    "pointwise_max", "pointwise_min", "is_convex", "convexity_violation",
    "to_grid", "translate", "rotate", "scale", "from_dict", "to_dict",
    "load", "dump",
]

INF = math.inf


def _points(x, dim):
    x = np.asarray(x, dtype=float)
    if dim == 1 and x.ndim == 0:
        x = x[None]
    if x.shape[-1] != dim:
        raise DimensionMismatch(
            f"expected points with last axis {dim}, got shape {x.shape}")
    return x


class ConvexFunction:
    """Base class; subclasses implement ``_eval`` and friends."""

    dim: int

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        return self._eval(_points(x, self.dim))

    def gradient(self, x):
        return self._grad(_points(x, self.dim))

    def hessian(self, x):
        return self._hess(_points(x, self.dim))

    def _grad(self, x):
        raise UnsupportedVariant(f"{type(self).__name__} has no gradient")

    def _hess(self, x):
        raise UnsupportedVariant(f"{type(self).__name__} has no Hessian")

    def minimizer(self):
        raise UnsupportedVariant(
            f"{type(self).__name__} has no closed-form minimiser")


# ---------------------------------------------------------------- quadratic

@dataclass(frozen=True, eq=False)
class Quadratic(ConvexFunction):
    """``u(x) = x.Q.x / 2 + b.x + c`` with ``Q`` symmetric positive semidefinite."""

    Q: np.ndarray
    b: Optional[np.ndarray] = None
    c: float = 0.0

    def __post_init__(self):
        q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        n = q.shape[0]
        if q.shape != (n, n):
            raise DimensionMismatch("Q must be square")
        scale = max(1.0, np.abs(q).max())
        if not np.allclose(q, q.T, atol=1e-12 * scale):
            raise ValueError("Q must be symmetric")
        q = 0.5 * (q + q.T)
        if np.linalg.eigvalsh(q).min() < -1e-10 * scale:
            raise ValueError("Q must be positive semidefinite")
        b = np.zeros(n) if self.b is None else np.asarray(self.b, float).ravel()
        if b.size != n:
            raise DimensionMismatch("b must match Q")
        object.__setattr__(self, "Q", q)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))

    @property
    def dim(self):
        return self.Q.shape[0]

    def _eval(self, x):
        return 0.5 * np.einsum("...i,ij,...j->...", x, self.Q, x) \
            + x @ self.b + self.c

    def _grad(self, x):
        return x @ self.Q + self.b

    def _hess(self, x):
        return np.broadcast_to(self.Q, x.shape[:-1] + self.Q.shape).copy()

    def minimizer(self):
        if np.linalg.eigvalsh(self.Q).min() <= 1e-14:
            raise SingularHessian("quadratic is not strictly convex")
        return np.linalg.solve(self.Q, -self.b)

    def prox(self, z, s):
        """Proximal point ``argmin_x u(x) + |x - z|^2 / (2 s)``."""
        m = np.eye(self.dim) + s * self.Q
        return np.linalg.solve(m, (np.asarray(z) - s * self.b).T).T

    @classmethod
    def isotropic(cls, dim, c=1.0):
        """``c |x|^2 / 2`` in dimension ``dim``."""
        return cls(c * np.eye(dim))


# ------------------------------------------------------------ radial cones

@dataclass(frozen=True, eq=False)
class RadialConeU(ConvexFunction):
    """``t |x| + I_{radius B}(x)``; the default radius 1 gives the unit-ball cone."""

    dim: int
    t: float
    radius: float = 1.0

    def __post_init__(self):
        if self.t < 0 or self.radius <= 0:
            raise ValueError("need t >= 0 and radius > 0")

    def _eval(self, x):
        r = np.linalg.norm(x, axis=-1)
        return np.where(r <= self.radius * (1 + 1e-12), self.t * r, INF)

    def _grad(self, x):
        r = np.linalg.norm(x, axis=-1)
        if np.any(r >= self.radius) or np.any((r == 0) & (self.t > 0)):
            raise NotDifferentiable("cone is not differentiable there")
        with np.errstate(invalid="ignore", divide="ignore"):
            g = self.t * x / r[..., None]
        return np.nan_to_num(g)

    def minimizer(self):
        return np.zeros(self.dim)


@dataclass(frozen=True, eq=False)
class RadialConeV(ConvexFunction):
    """``scale * max(0, |x| - t)``; the conjugate of ``RadialConeU(t, scale)``."""

    dim: int
    t: float
    scale: float = 1.0

    def __post_init__(self):
        if self.t < 0 or self.scale <= 0:
            raise ValueError("need t >= 0 and scale > 0")

    def _eval(self, x):
        r = np.linalg.norm(x, axis=-1)
        return self.scale * np.maximum(0.0, r - self.t)

    def _check(self, r):
        if np.any(np.isclose(r, self.t, rtol=0, atol=1e-12 * (1 + self.t))):
            raise NotDifferentiable("v_t is not differentiable on |x| = t")

    def _grad(self, x):
        r = np.linalg.norm(x, axis=-1)
        self._check(r)
        out = np.zeros_like(x)
        mask = r > self.t
        out[mask] = self.scale * x[mask] / r[mask, None]
        return out

    def _hess(self, x):
        r = np.linalg.norm(x, axis=-1)
        self._check(r)
        out = np.zeros(x.shape + (self.dim,))
        mask = r > self.t
        xm, rm = x[mask], r[mask]
        xhat = xm / rm[:, None]
        proj = np.eye(self.dim) - xhat[:, :, None] * xhat[:, None, :]
        out[mask] = self.scale * proj / rm[:, None, None]
        return out

    def prox(self, z, s):
        z = np.asarray(z, dtype=float)
        r = np.linalg.norm(z, axis=-1, keepdims=True)
        step = s * self.scale
        with np.errstate(invalid="ignore", divide="ignore"):
            zhat = np.where(r > 0, z / r, 0.0)
        onto_sphere = self.t * zhat
        shrunk = z - step * zhat
        return np.where(r <= self.t, z,
                        np.where(r <= self.t + step, onto_sphere, shrunk))


# ----------------------------------------------------------- radial profile

@dataclass(frozen=True, eq=False)
class RadialProfile(ConvexFunction):
    """``u(x) = phi(|x|)`` for a convex non-decreasing profile on ``[0, radius]``.

    Either pass the callables ``phi``, ``dphi`` and ``d2phi`` or build from
    samples with :meth:`from_samples`, which fits a cubic spline.  Points
    with ``|x| > radius`` lie outside the domain.  ``kinks`` lists radii
    where ``d2phi`` jumps; quadrature splits there.
    """

    dim: int
    phi: Callable
    dphi: Callable
    d2phi: Callable
    radius: float = INF
    samples: Optional[tuple] = field(default=None, repr=False)
    kinks: tuple = ()

    @classmethod
    def from_samples(cls, dim, r, values):
        r = np.asarray(r, dtype=float)
        values = np.asarray(values, dtype=float)
        if r[0] != 0.0 or np.any(np.diff(r) <= 0):
            raise ValueError("radii must start at 0 and increase strictly")
        spline = CubicSpline(r, values)
        d1, d2 = spline.derivative(1), spline.derivative(2)
        return cls(dim, spline, d1, d2, float(r[-1]), (r, values))

    @classmethod
    def power(cls, dim, c=1.0, p=2.0):
        """``c |x|^p / p``; ``p = 2`` gives ``c |x|^2 / 2``."""
        return cls(dim, lambda r: c * r**p / p, lambda r: c * r**(p - 1),
                   lambda r: c * (p - 1) * r**(p - 2))

    def _radius(self, x):
        r = np.linalg.norm(x, axis=-1)
        return r

    def _eval(self, x):
        r = self._radius(x)
        inside = r <= self.radius * (1 + 1e-12)
        rr = np.where(inside, r, 0.0)
        return np.where(inside, self.phi(rr), INF)

    def _tangential(self, r):
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = self.dphi(r) / r
        small = r < 1e-12
        if np.any(small):
            if np.any(np.abs(self.dphi(np.zeros(1))) > 1e-12):
                raise NotDifferentiable("radial profile has a kink at 0")
            ratio = np.where(small, self.d2phi(np.zeros_like(r)), ratio)
        return ratio

    def _grad(self, x):
        r = self._radius(x)
        if np.any(r > self.radius):
            raise NotDifferentiable("outside the domain")
        return self._tangential(r)[..., None] * x

    def _hess(self, x):
        r = self._radius(x)
        if np.any(r > self.radius):
            raise NotDifferentiable("outside the domain")
        tang = self._tangential(r)
        with np.errstate(invalid="ignore", divide="ignore"):
            xhat = np.where(r[..., None] > 0, x / r[..., None], 0.0)
        outer = xhat[..., :, None] * xhat[..., None, :]
        eye = np.eye(self.dim)
        radial = self.d2phi(r)
        return (radial[..., None, None] * outer
                + tang[..., None, None] * (eye - outer))

    def minimizer(self):
        return np.zeros(self.dim)

    def radius_of_level(self, t):
        """Radius ``r`` with ``phi(r) = t`` by bisection."""
        hi = 1.0
        while self.phi(np.array(hi)) < t:
            hi *= 2.0
            if hi > 1e12:
                raise ValueError("level not reached")
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.phi(np.array(mid)) < t:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


# ------------------------------------------------------------ affine pieces

@dataclass(frozen=True, eq=False)
class AffinePiece:
    slope: np.ndarray
    offset: float
    polytope: Polytope

    def __post_init__(self):
        object.__setattr__(self, "slope",
                           np.atleast_1d(np.asarray(self.slope, dtype=float)))
        object.__setattr__(self, "offset", float(self.offset))

    def value(self, x):
        return x @ self.slope + self.offset


@dataclass(frozen=True, eq=False)
class PiecewiseAffine(ConvexFunction):
    """Convex function affine on each piece of a dissection of its domain.

    An empty ``pieces`` sequence encodes a function whose domain has empty
    interior (for instance the maximum of two functions on adjacent cells).
    """

    pieces: tuple
    dim: int = 0
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if pieces:
            object.__setattr__(self, "dim", pieces[0].polytope.dim)
        if self.dim <= 0:
            raise DimensionMismatch("dimension of an empty function is needed")
        if self.validate:
            ok, msg = _pwa_check(pieces)
            if not ok:
                raise ValueError(msg)

    def _containing(self, x, tol=1e-9):
        return np.stack([p.polytope.contains(x, tol) for p in self.pieces],
                        axis=-1) if self.pieces else np.zeros(
                            x.shape[:-1] + (0,), bool)

    def _eval(self, x):
        if not self.pieces:
            return np.full(x.shape[:-1], INF)
        inside = self._containing(x)
        vals = np.stack([p.value(x) for p in self.pieces], axis=-1)
        vals = np.where(inside, vals, -INF)
        out = vals.max(axis=-1)
        return np.where(inside.any(axis=-1), out, INF)

    def _unique_piece(self, x):
        inside = self._containing(x)
        slopes = np.stack([p.slope for p in self.pieces])
        idx = np.argmax(inside, axis=-1)
        if not np.all(inside.any(axis=-1)):
            raise NotDifferentiable("point outside the domain")
        for k in range(len(self.pieces)):
            other = inside & ~np.all(np.isclose(slopes, slopes[k]), axis=-1)
            clash = (idx == k) & other.any(axis=-1)
            if np.any(clash):
                raise NotDifferentiable("point on a breakpoint between pieces")
        return idx

    def _grad(self, x):
        idx = self._unique_piece(x)
        slopes = np.stack([p.slope for p in self.pieces])
        return slopes[idx]

    def _hess(self, x):
        self._unique_piece(x)
        return np.zeros(x.shape + (self.dim,))

    @property
    def domain_volume(self):
        return sum(p.polytope.volume for p in self.pieces)


def _pwa_check(pieces, tol=1e-9):
    """Interior-disjointness, max-consistency and convexity of the union."""
    if not pieces:
        return True, ""
    for p in pieces:
        if not p.polytope.is_full_dimensional:
            return False, "pieces must be full-dimensional"
    for i, p in enumerate(pieces):
        for q in pieces[i + 1:]:
            inter = p.polytope.intersect(q.polytope)
            if inter is not None and inter.volume > tol * max(
                    1.0, p.polytope.volume):
                return False, "pieces overlap"
    for p in pieces:
        v = p.polytope.vertices
        own = p.value(v)
        scale = 1.0 + np.abs(own).max()
        for q in pieces:
            if np.any(q.value(v) > own + tol * scale):
                return False, "glued function is not convex"
    allv = np.vstack([p.polytope.vertices for p in pieces])
    hull = Polytope.from_vertices(allv).volume
    total = sum(p.polytope.volume for p in pieces)
    if abs(hull - total) > 1e-9 * max(1.0, hull):
        return False, "union of pieces is not convex"
    return True, ""


# ------------------------------------------------------- indicator + linear

@dataclass(frozen=True, eq=False)
class IndicatorLinear(ConvexFunction):
    """``<slope, x> + const + I_P(x)`` for a polytope ``P`` (possibly a point)."""

    polytope: Polytope
    slope: Optional[np.ndarray] = None
    const: float = 0.0

    def __post_init__(self):
        n = self.polytope.dim
        s = np.zeros(n) if self.slope is None else np.asarray(
            self.slope, dtype=float).ravel()
        if s.size != n:
            raise DimensionMismatch("slope must match polytope dimension")
        object.__setattr__(self, "slope", s)
        object.__setattr__(self, "const", float(self.const))

    @property
    def dim(self):
        return self.polytope.dim

    def _eval(self, x):
        return np.where(self.polytope.contains(x), x @ self.slope + self.const,
                        INF)

    def _grad(self, x):
        tol = -1e-9
        if not np.all(np.all(x @ self.polytope.normals.T
                             - self.polytope.offsets < tol, axis=-1)):
            raise NotDifferentiable("only interior points are smooth")
        return np.broadcast_to(self.slope, x.shape).copy()

    def _hess(self, x):
        self._grad(x)
        return np.zeros(x.shape + (self.dim,))


# ------------------------------------------------------------ kink family

@dataclass(frozen=True, eq=False)
class KinkSum(ConvexFunction):
    """``sum_i w_i/2 |x_i - c_i| + <linear, x> + const`` over selected axes.

    With unit weights, all axes active and no linear part this is the
    sum-of-kinks function whose top Hessian measure is a Dirac mass at
    ``center``.
    """

    center: np.ndarray
    weights: Optional[np.ndarray] = None
    axes: Optional[tuple] = None
    linear: Optional[np.ndarray] = None
    const: float = 0.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        n = c.size
        axes = tuple(range(n)) if self.axes is None else tuple(
            sorted(int(a) for a in self.axes))
        if len(set(axes)) != len(axes) or any(a < 0 or a >= n for a in axes):
            raise ValueError("invalid active axes")
        w = np.ones(n) if self.weights is None else np.asarray(
            self.weights, dtype=float).ravel()
        lin = np.zeros(n) if self.linear is None else np.asarray(
            self.linear, dtype=float).ravel()
        if w.size != n or lin.size != n:
            raise DimensionMismatch("weights/linear must match the centre")
        if np.any(w[list(axes)] <= 0):
            raise ValueError("weights must be positive")
        mask = np.zeros(n, bool)
        mask[list(axes)] = True
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "weights", np.where(mask, w, 0.0))
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "const", float(self.const))

    @property
    def dim(self):
        return self.center.size

    def _eval(self, x):
        return (0.5 * np.abs(x - self.center) @ self.weights
                + x @ self.linear + self.const)

    def _grad(self, x):
        d = x - self.center
        if np.any(np.abs(d[..., list(self.axes)]) < 1e-14):
            raise NotDifferentiable("point on a kink hyperplane")
        return 0.5 * np.sign(d) * self.weights + self.linear

    def _hess(self, x):
        self._grad(x)
        return np.zeros(x.shape + (self.dim,))

    def prox(self, z, s):
        z = np.asarray(z, dtype=float) - s * self.linear
        d = z - self.center
        step = 0.5 * s * self.weights
        return self.center + np.sign(d) * np.maximum(np.abs(d) - step, 0.0)


# ------------------------------------------------- piecewise quadratic 1-D

@dataclass(frozen=True, eq=False)
class PiecewiseQuadratic1D(ConvexFunction):
    """1-D function ``a x^2/2 + b x + c`` on consecutive intervals.

    ``breaks`` are the interior breakpoints; ``coeffs`` has one row
    ``(a, b, c)`` per interval of ``[lo, b_1], [b_1, b_2], ..., [b_m, hi]``.
    The function is ``+inf`` outside ``[lo, hi]``.  This is the exact
    representation of lattice combinations of 1-D quadratics.
    """

    breaks: np.ndarray
    coeffs: np.ndarray
    lo: float = -INF
    hi: float = INF
    dim: int = field(default=1, init=False)

    def __post_init__(self):
        br = np.asarray(self.breaks, dtype=float).ravel()
        co = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if co.shape != (br.size + 1, 3):
            raise ValueError("need one (a, b, c) row per interval")
        if np.any(np.diff(br) <= 0) or (br.size and (
                br[0] <= self.lo or br[-1] >= self.hi)):
            raise ValueError("breakpoints must increase inside (lo, hi)")
        object.__setattr__(self, "breaks", br)
        object.__setattr__(self, "coeffs", co)

    @classmethod
    def from_quadratic(cls, q):
        if q.dim != 1:
            raise DimensionMismatch("need a 1-D quadratic")
        return cls(np.zeros(0), [[q.Q[0, 0], q.b[0], q.c]])

    @property
    def edges(self):
        return np.concatenate([[self.lo], self.breaks, [self.hi]])

    def _piece(self, t):
        return np.searchsorted(self.breaks, t, side="right")

    def _eval(self, x):
        t = x[..., 0]
        a, b, c = self.coeffs[self._piece(t)].T
        val = 0.5 * a * t**2 + b * t + c
        return np.where((t >= self.lo) & (t <= self.hi), val, INF)

    def _smooth_at(self, t):
        if np.any((t < self.lo) | (t > self.hi)):
            raise NotDifferentiable("outside the domain")
        for k, bk in enumerate(self.breaks):
            left, right = self.coeffs[k], self.coeffs[k + 1]
            if not np.allclose(left[:2], right[:2]) and np.any(
                    np.isclose(t, bk, rtol=0, atol=1e-13)):
                raise NotDifferentiable("point on a breakpoint")

    def _grad(self, x):
        t = x[..., 0]
        self._smooth_at(t)
        a, b, _ = self.coeffs[self._piece(t)].T
        return (a * t + b)[..., None]

    def _hess(self, x):
        t = x[..., 0]
        self._smooth_at(t)
        return self.coeffs[self._piece(t), 0][..., None, None].copy()

    def convexity_violation(self):
        """Largest violation of convexity (0 for a convex function)."""
        worst = max(0.0, -self.coeffs[:, 0].min())
        for k, t in enumerate(self.breaks):
            (a0, b0, c0), (a1, b1, c1) = self.coeffs[k], self.coeffs[k + 1]
            jump = abs((0.5 * a1 * t * t + b1 * t + c1)
                       - (0.5 * a0 * t * t + b0 * t + c0))
            kink = (a0 * t + b0) - (a1 * t + b1)
            worst = max(worst, jump, kink)
        return worst


# ---------------------------------------------------------------- wrapper

@dataclass(frozen=True, eq=False)
class Transformed(ConvexFunction):
    """``u(x) = base(R^T (x - shift)) + alpha`` for a rotation ``R``."""

    base: ConvexFunction
    rotation: np.ndarray
    shift: np.ndarray
    alpha: float = 0.0

    @property
    def dim(self):
        return self.base.dim

    def _inner(self, x):
        return (x - self.shift) @ self.rotation

    def _eval(self, x):
        return self.base.evaluate(self._inner(x)) + self.alpha

    def _grad(self, x):
        return self.base.gradient(self._inner(x)) @ self.rotation.T

    def _hess(self, x):
        h = self.base.hessian(self._inner(x))
        return self.rotation @ h @ self.rotation.T

    def minimizer(self):
        return self.rotation @ self.base.minimizer() + self.shift


# -------------------------------------------------------------------- grid

@dataclass(frozen=True, eq=False)
class Grid(ConvexFunction):
    """Samples on a regular grid over an axis-aligned box (``dim <= 3``).

    ``values[i0, i1, ...]`` is the value at ``lo + i * h`` (row-major);
    outside the box the function is ``+inf``.  Evaluation between nodes is
    multilinear.
    """

    box: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        box = np.atleast_2d(np.asarray(self.box, dtype=float))
        if box.shape != (vals.ndim, 2):
            raise DimensionMismatch("box must have one (lo, hi) row per axis")
        if vals.ndim > 3:
            raise DimensionMismatch("grids are limited to dim <= 3")
        if min(vals.shape) < 2 or np.any(box[:, 1] <= box[:, 0]):
            raise ValueError("each axis needs >= 2 nodes and lo < hi")
        if np.any(np.isnan(vals)) or np.any(vals == -INF):
            raise ValueError("grid values must be finite or +inf")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "box", box)

    @property
    def dim(self):
        return self.values.ndim

    @property
    def shape(self):
        return self.values.shape

    @property
    def spacing(self):
        return (self.box[:, 1] - self.box[:, 0]) / (np.array(self.shape) - 1)

    @property
    def axes(self):
        return [np.linspace(lo, hi, n) for (lo, hi), n in zip(self.box, self.shape)]

    def nodes(self):
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def _eval(self, x):
        lead = x.shape[:-1]
        pts = x.reshape(-1, self.dim)
        h = self.spacing
        n = np.array(self.shape)
        t = (pts - self.box[:, 0]) / h
        eps = 1e-9
        outside = np.any((t < -eps) | (t > n - 1 + eps), axis=-1)
        t = np.clip(t, 0, n - 1)
        i0 = np.minimum(np.floor(t).astype(int), n - 2)
        frac = t - i0
        out = np.zeros(len(pts))
        hit_inf = np.zeros(len(pts), bool)
        for corner in np.ndindex(*(2,) * self.dim):
            corner = np.array(corner)
            w = np.prod(np.where(corner, frac, 1 - frac), axis=-1)
            v = self.values[tuple((i0 + corner).T)]
            active = w > 1e-12
            hit_inf |= active & np.isinf(v)
            out += np.where(active & np.isfinite(v), w * np.where(
                np.isfinite(v), v, 0.0), 0.0)
        out[hit_inf | outside] = INF
        return out.reshape(lead)

    def _stencil(self, x, offsets):
        h = self.spacing
        vals = [self._eval(x + np.asarray(o) * h) for o in offsets]
        if any(np.any(np.isinf(v)) for v in vals):
            raise NotDifferentiable("stencil touches +inf or leaves the box")
        return vals

    def _grad(self, x):
        h = self.spacing
        eye = np.eye(self.dim)
        out = []
        for i in range(self.dim):
            up, down = self._stencil(x, [eye[i], -eye[i]])
            out.append((up - down) / (2 * h[i]))
        return np.stack(out, axis=-1)

    def _hess(self, x):
        h = self.spacing
        eye = np.eye(self.dim)
        (mid,) = self._stencil(x, [np.zeros(self.dim)])
        out = np.zeros(x.shape + (self.dim,))
        for i in range(self.dim):
            up, down = self._stencil(x, [eye[i], -eye[i]])
            out[..., i, i] = (up - 2 * mid + down) / h[i] ** 2
            for j in range(i + 1, self.dim):
                pp, pm, mp, mm = self._stencil(
                    x, [eye[i] + eye[j], eye[i] - eye[j],
                        -eye[i] + eye[j], -eye[i] - eye[j]])
                val = (pp - pm - mp + mm) / (4 * h[i] * h[j])
                out[..., i, j] = out[..., j, i] = val
        return out

    def node_derivatives(self):
        """Central-difference gradients and Hessians at interior nodes.

        Returns
        -------
        mask : ndarray of bool
            Nodes whose full stencil is finite and inside the box.
        grad, hess : ndarray
            Arrays of shape ``shape + (n,)`` and ``shape + (n, n)``; entries
            outside ``mask`` are zero.
        """
        v = self.values
        n = self.dim
        h = self.spacing
        pad = np.pad(v, 1, constant_values=INF)

        def sh(offset):
            sl = tuple(slice(1 + o, 1 + o + s) for o, s in zip(offset, v.shape))
            return pad[sl]

        mask = np.isfinite(v)
        for off in np.ndindex(*(3,) * n):
            mask &= np.isfinite(sh(np.array(off) - 1))
        safe = lambda a: np.where(mask, a, 0.0)
        grad = np.zeros(v.shape + (n,))
        hess = np.zeros(v.shape + (n, n))
        eye = np.eye(n, dtype=int)
        centre = safe(v)
        for i in range(n):
            up, down = safe(sh(eye[i])), safe(sh(-eye[i]))
            grad[..., i] = (up - down) / (2 * h[i])
            hess[..., i, i] = (up - 2 * centre + down) / h[i] ** 2
            for j in range(i + 1, n):
                pp = safe(sh(eye[i] + eye[j]))
                pm = safe(sh(eye[i] - eye[j]))
                mp = safe(sh(-eye[i] + eye[j]))
                mm = safe(sh(-eye[i] - eye[j]))
                hess[..., i, j] = hess[..., j, i] = (pp - pm - mp + mm) / (
                    4 * h[i] * h[j])
        return mask, grad, hess

    def max_slope(self):
        """Largest absolute finite difference quotient along the axes."""
        best = 0.0
        for i in range(self.dim):
            d = np.diff(self.values, axis=i) / self.spacing[i]
            d = d[np.isfinite(d)]
            if d.size:
                best = max(best, float(np.abs(d).max()))
        return best


def convexity_violation(f, tol=None):
    """Largest midpoint-convexity violation of a grid beyond tolerance.

    Checks ``u(x) <= (u(x - d) + u(x + d)) / 2 + tol`` for axis-aligned and
    diagonal steps ``d``; a finite pair of endpoints with an infinite
    midpoint also counts as a violation.  Returns 0.0 when convex.
    """
    if isinstance(f, PiecewiseQuadratic1D):
        return f.convexity_violation()
    if isinstance(f, PiecewiseAffine):
        ok, _ = _pwa_check(f.pieces)
        return 0.0 if ok else INF
    if not isinstance(f, Grid):
        raise UnsupportedVariant("convexity check is for grids and pwa")
    v = f.values
    finite = v[np.isfinite(v)]
    if tol is None:
        scale = np.abs(finite).max() if finite.size else 0.0
        tol = 1e-9 + 1e-6 * scale
    n = v.ndim
    steps = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for sgn in (1, -1):
                steps.append(tuple(1 if k == i else (sgn if k == j else 0)
                                   for k in range(n)))
    worst = 0.0
    for d in steps:
        lo_s, mid_s, hi_s = [], [], []
        for dk, size in zip(d, v.shape):
            if dk == 0:
                lo_s.append(slice(None))
                mid_s.append(slice(None))
                hi_s.append(slice(None))
            elif dk == 1:
                lo_s.append(slice(0, size - 2))
                mid_s.append(slice(1, size - 1))
                hi_s.append(slice(2, size))
            else:
                lo_s.append(slice(2, size))
                mid_s.append(slice(1, size - 1))
                hi_s.append(slice(0, size - 2))
        a, m, b = v[tuple(lo_s)], v[tuple(mid_s)], v[tuple(hi_s)]
        ends = np.isfinite(a) & np.isfinite(b)
        if np.any(ends & np.isinf(m)):
            return INF
        with np.errstate(invalid="ignore"):
            gap = np.where(ends, m - 0.5 * (a + b), -INF)
        if gap.size:
            worst = max(worst, float(gap.max()))
    return worst if worst > tol else 0.0


def is_convex(f, tol=None):
    return convexity_violation(f, tol) == 0.0


def to_grid(f, box, shape):
    """Sample ``f`` at the nodes of a regular grid."""
    box = np.atleast_2d(np.asarray(box, dtype=float))
    if box.shape[0] != f.dim:
        raise DimensionMismatch("box dimension differs from function")
    if isinstance(shape, int):
        shape = (shape,) * f.dim
    axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(box, shape)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return Grid(box, f.evaluate(pts))


# -------------------------------------------------------- module functions

def evaluate(f, x):
    """Value of ``f`` at ``x`` (``+inf`` outside the domain)."""
    return f.evaluate(x)


def gradient(f, x):
    return f.gradient(x)


def hessian(f, x):
    return f.hessian(x)


def _minplus_axis(values, axis, x_in, x_out, lam):
    """Moreau envelope of each line along ``axis`` onto the nodes ``x_out``."""
    moved = np.moveaxis(values, axis, -1)
    lead = moved.shape[:-1]
    flat = moved.reshape(-1, moved.shape[-1])
    out = np.full((flat.shape[0], x_out.size), INF)
    for m, xm in enumerate(x_in):
        col = flat[:, m:m + 1]
        if not np.any(np.isfinite(col)):
            continue
        out = np.minimum(out, col + (x_out - xm) ** 2 / (2 * lam))
    return np.moveaxis(out.reshape(lead + (x_out.size,)), -1, axis)


def separable_envelope(u, lams, margin=None):
    """Inf-convolution of a grid with ``sum_i x_i^2 / (2 lam_i)``.

    The quadratic kernel is separable, so the epi-sum is computed one axis
    at a time.  The output grid keeps the input spacing and enlarges the box
    on each side by ``margin`` (default ``lam_i * max slope``, rounded up to
    whole cells).
    """
    lams = np.broadcast_to(np.asarray(lams, dtype=float), (u.dim,))
    h = u.spacing
    slope = u.max_slope()
    if margin is None:
        margin = lams * slope
    margin = np.broadcast_to(np.asarray(margin, dtype=float), (u.dim,))
    cells = np.ceil(margin / h - 1e-9).astype(int)
    box = u.box + np.stack([-cells * h, cells * h], axis=-1)
    vals = u.values
    for i, ax in enumerate(u.axes):
        x_out = box[i, 0] + h[i] * np.arange(u.shape[i] + 2 * cells[i])
        vals = _minplus_axis(vals, i, ax, x_out, lams[i])
    return Grid(box, vals)


def inf_convolve(u, v, box=None, shape=None):
    """Infimal convolution ``(u [] v)(x) = inf_{y+z=x} u(y) + v(z)`` on a grid.

    Parameters
    ----------
    u, v : ConvexFunction
        Grids with equal spacing, or any variants together with ``box`` and
        ``shape`` used to sample them first.  A separable quadratic ``v``
        (diagonal ``Q``, no linear part) is handled per axis in any
        dimension; a point indicator ``v`` is applied as an exact shift.

    Returns
    -------
    Grid
        Defined on the Minkowski sum of the two boxes.
    """
    if u.dim != v.dim:
        raise DimensionMismatch("functions live in different dimensions")
    if isinstance(u, Grid) and isinstance(v, Quadratic) and _is_separable(v):
        d = np.diag(v.Q)
        if np.any(d <= 0):
            raise UnboundedResult("kernel must be strictly convex per axis")
        return separable_envelope(u, 1.0 / d)
    if isinstance(u, Grid) and isinstance(v, IndicatorLinear) and \
            v.polytope.vertices.shape[0] == 1 and not v.polytope.is_full_dimensional:
        p = v.polytope.vertices[0]
        return Grid(u.box + p[:, None],
                    u.values + float(p @ v.slope) + v.const)
    if not isinstance(u, Grid) or not isinstance(v, Grid):
        if box is None or shape is None:
            raise UnsupportedVariant("sample non-grid inputs via box and shape")
        u = u if isinstance(u, Grid) else to_grid(u, box, shape)
        v = v if isinstance(v, Grid) else to_grid(v, box, shape)
    if not np.allclose(u.spacing, v.spacing, rtol=1e-9):
        raise DimensionMismatch("grids must share the same spacing")
    if u.dim > 2:
        raise UnsupportedVariant(
            "3-D inf-convolution is limited to separable quadratic kernels")
    out_shape = tuple(a + b - 1 for a, b in zip(u.shape, v.shape))
    out = np.full(out_shape, INF)
    if np.count_nonzero(np.isfinite(u.values)) > np.count_nonzero(
            np.isfinite(v.values)):
        u, v = v, u
    for idx in zip(*np.nonzero(np.isfinite(u.values))):
        sl = tuple(slice(i, i + s) for i, s in zip(idx, v.shape))
        np.minimum(out[sl], v.values + u.values[idx], out=out[sl])
    if np.any(np.isnan(out)) or np.any(out == -INF):
        raise UnboundedResult("infimum is -inf")
    return Grid(u.box + v.box, out)


def _is_separable(q):
    return (np.allclose(q.Q, np.diag(np.diag(q.Q))) and np.allclose(q.b, 0)
            and q.c == 0)


def epi_multiply(u, lam):
    """Epi-multiplication ``(lam o u)(x) = lam * u(x / lam)``."""
    lam = float(lam)
    if not lam > 0:
        raise NonpositiveScale("epi-multiplication needs lam > 0")
    if lam == 1.0:
        return u
    if isinstance(u, Quadratic):
        return Quadratic(u.Q / lam, u.b, lam * u.c)
    if isinstance(u, Grid):
        return Grid(lam * u.box, lam * u.values)
    if isinstance(u, RadialConeU):
        return RadialConeU(u.dim, u.t, lam * u.radius)
    if isinstance(u, RadialConeV):
        return RadialConeV(u.dim, lam * u.t, u.scale)
    if isinstance(u, IndicatorLinear):
        return IndicatorLinear(u.polytope.scaled(lam), u.slope, lam * u.const)
    if isinstance(u, KinkSum):
        return KinkSum(lam * u.center, u.weights, u.axes, u.linear,
                       lam * u.const)
    if isinstance(u, PiecewiseAffine):
        return PiecewiseAffine(tuple(
            AffinePiece(p.slope, lam * p.offset, p.polytope.scaled(lam))
            for p in u.pieces), u.dim, validate=False)
    if isinstance(u, RadialProfile):
        phi, d1, d2 = u.phi, u.dphi, u.d2phi
        return RadialProfile(u.dim, lambda r: lam * phi(r / lam),
                             lambda r: d1(r / lam), lambda r: d2(r / lam) / lam,
                             lam * u.radius, None,
                             tuple(lam * k for k in u.kinks))
    if isinstance(u, PiecewiseQuadratic1D):
        a, b, c = u.coeffs.T
        return PiecewiseQuadratic1D(lam * u.breaks,
                                    np.stack([a / lam, b, lam * c], axis=-1),
                                    lam * u.lo, lam * u.hi)
    if isinstance(u, Transformed):
        return Transformed(epi_multiply(u.base, lam), u.rotation,
                           lam * u.shift, lam * u.alpha)
    raise UnsupportedVariant(f"epi-multiplication of {type(u).__name__}")


def scale(u, c):
    """Pointwise multiple ``c * u`` for ``c > 0``."""
    c = float(c)
    if not c > 0:
        raise NonpositiveScale("need c > 0")
    if isinstance(u, Quadratic):
        return Quadratic(c * u.Q, c * u.b, c * u.c)
    if isinstance(u, Grid):
        return Grid(u.box, c * u.values)
    if isinstance(u, RadialConeV):
        return RadialConeV(u.dim, u.t, c * u.scale)
    if isinstance(u, KinkSum):
        return KinkSum(u.center, c * u.weights, u.axes, c * u.linear,
                       c * u.const)
    if isinstance(u, RadialProfile):
        phi, d1, d2 = u.phi, u.dphi, u.d2phi
        return RadialProfile(u.dim, lambda r: c * phi(r), lambda r: c * d1(r),
                             lambda r: c * d2(r), u.radius, None, u.kinks)
    raise UnsupportedVariant(f"scaling of {type(u).__name__}")


def translate(u, shift, alpha=0.0):
    """``x -> u(x - shift) + alpha``."""
    shift = np.asarray(shift, dtype=float).ravel()
    if shift.size != u.dim:
        raise DimensionMismatch("shift dimension")
    if isinstance(u, Quadratic):
        qs = u.Q @ shift
        return Quadratic(u.Q, u.b - qs,
                         u.c + 0.5 * shift @ qs - u.b @ shift + alpha)
    if isinstance(u, Grid):
        return Grid(u.box + shift[:, None], u.values + alpha)
    if isinstance(u, Transformed):
        return Transformed(u.base, u.rotation, u.shift + shift, u.alpha + alpha)
    return Transformed(u, np.eye(u.dim), shift, float(alpha))


def rotate(u, rotation):
    """``x -> u(R^T x)`` for an orthogonal matrix ``R``."""
    r = np.asarray(rotation, dtype=float)
    if r.shape != (u.dim, u.dim) or not np.allclose(r @ r.T, np.eye(u.dim)):
        raise ValueError("rotation must be orthogonal")
    if isinstance(u, Quadratic):
        return Quadratic(r @ u.Q @ r.T, r @ u.b, u.c)
    if isinstance(u, (RadialConeU, RadialConeV, RadialProfile)):
        return u
    if isinstance(u, Transformed):
        return Transformed(u.base, r @ u.rotation, r @ u.shift, u.alpha)
    return Transformed(u, r, np.zeros(u.dim), 0.0)


# ------------------------------------------------------- lattice operations

def _as_pq1d(f):
    if isinstance(f, PiecewiseQuadratic1D):
        return f
    if isinstance(f, Quadratic) and f.dim == 1:
        return PiecewiseQuadratic1D.from_quadratic(f)
    return None


def _pq_lattice(u, v, take_max):
    lo = max(u.lo, v.lo) if take_max else min(u.lo, v.lo)
    hi = min(u.hi, v.hi) if take_max else max(u.hi, v.hi)
    if not lo < hi:
        raise UnsupportedVariant("result domain has empty interior")
    knots = np.unique(np.concatenate([[lo, hi], u.breaks, v.breaks,
                                      [u.lo, u.hi, v.lo, v.hi]]))
    knots = knots[(knots >= lo) & (knots <= hi)]

    def coeff(f, t):
        if t < f.lo or t > f.hi:
            return None
        return f.coeffs[f._piece(np.array([t]))[0]]

    def probe(a, b):
        if np.isinf(a) and np.isinf(b):
            return 0.0
        if np.isinf(a):
            return b - 1.0
        if np.isinf(b):
            return a + 1.0
        return 0.5 * (a + b)

    cuts, rows = [], []
    for a, b in zip(knots[:-1], knots[1:]):
        mid = probe(a, b)
        cu, cv = coeff(u, mid), coeff(v, mid)
        sub = [a]
        if cu is not None and cv is not None:
            d = cu - cv
            roots = np.roots([0.5 * d[0], d[1], d[2]]) if np.any(
                np.abs(d) > 1e-15) else []
            for r in sorted(np.real(r) for r in roots if abs(np.imag(r)) < 1e-12):
                if a < r < b:
                    sub.append(r)
        sub.append(b)
        if cu is None and cv is None:
            raise NonConvexMin("domain of the minimum is not an interval")
        for s0, s1 in zip(sub[:-1], sub[1:]):
            m = probe(s0, s1)
            if cu is None or cv is None:
                row = cv if cu is None else cu
            else:
                fu = 0.5 * cu[0] * m * m + cu[1] * m + cu[2]
                fv = 0.5 * cv[0] * m * m + cv[1] * m + cv[2]
                row = (cu if fu >= fv else cv) if take_max else (
                    cu if fu <= fv else cv)
            if rows and np.allclose(rows[-1], row, rtol=0, atol=1e-14):
                continue
            if rows:
                cuts.append(s0)
            rows.append(np.array(row, dtype=float))
    return PiecewiseQuadratic1D(np.array(cuts), np.array(rows), lo, hi)


def _pwa_lattice(u, v, take_max):
    pieces = []
    covered = [0.0] * len(u.pieces)
    covered_v = [0.0] * len(v.pieces)
    for i, p in enumerate(u.pieces):
        for k, q in enumerate(v.pieces):
            inter = p.polytope.intersect(q.polytope)
            if inter is None:
                continue
            covered[i] += inter.volume
            covered_v[k] += inter.volume
            d = p.slope - q.slope
            e = q.offset - p.offset
            # p <= q on {d.x <= e}
            low = inter.clip(d, e) if np.any(np.abs(d) > 1e-14) else (
                inter if e >= 0 else None)
            high = inter.clip(-d, -e) if np.any(np.abs(d) > 1e-14) else (
                inter if e < 0 else None)
            for part, p_le_q in ((low, True), (high, False)):
                if part is None or part.volume <= 1e-14:
                    continue
                use_q = p_le_q if take_max else not p_le_q
                src = q if use_q else p
                pieces.append(AffinePiece(src.slope, src.offset, part))
    if not take_max:
        for src, cov in ((u, covered), (v, covered_v)):
            for p, c in zip(src.pieces, cov):
                vol = p.polytope.volume
                if c <= 1e-12 * max(1.0, vol):
                    pieces.append(p)
                elif abs(c - vol) > 1e-9 * max(1.0, vol):
                    raise UnsupportedVariant(
                        "pieces partially overlapping the other domain")
    return PiecewiseAffine(tuple(pieces), u.dim, validate=False)


def pointwise_max(u, v):
    """Pointwise maximum ``u v v`` (always convex)."""
    return _lattice(u, v, True)


def pointwise_min(u, v):
    """Pointwise minimum ``u ^ v``; raises NonConvexMin if not convex."""
    return _lattice(u, v, False)


def _lattice(u, v, take_max):
    if u.dim != v.dim:
        raise DimensionMismatch("functions live in different dimensions")
    if u is v:
        return u
    if isinstance(u, Grid) and isinstance(v, Grid):
        if u.shape != v.shape or not np.allclose(u.box, v.box):
            raise DimensionMismatch("grids must share box and shape")
        vals = (np.maximum if take_max else np.minimum)(u.values, v.values)
        out = Grid(u.box, vals)
    elif isinstance(u, PiecewiseAffine) and isinstance(v, PiecewiseAffine):
        out = _pwa_lattice(u, v, take_max)
    elif _as_pq1d(u) is not None and _as_pq1d(v) is not None:
        out = _pq_lattice(_as_pq1d(u), _as_pq1d(v), take_max)
    else:
        raise UnsupportedVariant(
            f"lattice operation on {type(u).__name__}/{type(v).__name__}")
    if not take_max and not is_convex(out):
        raise NonConvexMin("pointwise minimum is not convex")
    return out


def lattice_formal(u, v, take_max):
    """Lattice combination without the convexity check (1-D quadratics only).

    Useful for evaluating integral formulas on the piecewise-smooth result
    of a non-convex minimum.
    """
    a, b = _as_pq1d(u), _as_pq1d(v)
    if a is None or b is None:
        raise UnsupportedVariant("formal lattice needs 1-D quadratic pieces")
    return _pq_lattice(a, b, take_max)


# --------------------------------------------------------------------- JSON

def _enc(a):
    a = np.asarray(a, dtype=float)
    return [("inf" if np.isposinf(x) else float(x)) for x in a.ravel()]


def _dec(seq):
    return np.array([INF if x == "inf" else float(x) for x in seq])


def to_dict(f):
    """JSON-compatible description of ``f`` (``+inf`` encoded as "inf")."""
    if isinstance(f, Grid):
        return {"type": "grid", "box": f.box.tolist(), "shape": list(f.shape),
                "values": _enc(f.values)}
    if isinstance(f, Quadratic):
        return {"type": "quadratic", "Q": f.Q.tolist(), "b": f.b.tolist(),
                "c": f.c}
    if isinstance(f, RadialConeU):
        return {"type": "radial_cone_u", "dim": f.dim, "t": f.t,
                "radius": f.radius}
    if isinstance(f, RadialConeV):
        return {"type": "radial_cone_v", "dim": f.dim, "t": f.t,
                "scale": f.scale}
    if isinstance(f, RadialProfile):
        if f.samples is None:
            top = f.radius if np.isfinite(f.radius) else 10.0
            r = np.linspace(0.0, top, 513)
            samples = (r, f.phi(r))
        else:
            samples = f.samples
        return {"type": "radial_profile", "dim": f.dim,
                "r": samples[0].tolist(), "values": samples[1].tolist()}
    if isinstance(f, IndicatorLinear):
        return {"type": "indicator_linear",
                "polytope": f.polytope.to_dict(), "slope": f.slope.tolist(),
                "const": f.const}
    if isinstance(f, KinkSum):
        return {"type": "kink_sum", "center": f.center.tolist(),
                "weights": f.weights.tolist(), "axes": list(f.axes),
                "linear": f.linear.tolist(), "const": f.const}
    if isinstance(f, PiecewiseAffine):
        return {"type": "piecewise_affine", "dim": f.dim, "pieces": [
            {"slope": p.slope.tolist(), "offset": p.offset,
             "polytope": p.polytope.to_dict()} for p in f.pieces]}
    if isinstance(f, PiecewiseQuadratic1D):
        return {"type": "piecewise_quadratic_1d", "breaks": f.breaks.tolist(),
                "coeffs": f.coeffs.tolist(), "lo": _enc([f.lo])[0]
                if np.isfinite(f.lo) else "-inf",
                "hi": _enc([f.hi])[0]}
    raise UnsupportedVariant(f"no JSON form for {type(f).__name__}")


def from_dict(data):
    """Inverse of :func:`to_dict`."""
    kind = data.get("type")
    if kind == "grid":
        box = np.asarray(data["box"], dtype=float)
        shape = tuple(int(s) for s in data["shape"])
        return Grid(box, _dec(data["values"]).reshape(shape))
    if kind == "quadratic":
        return Quadratic(np.asarray(data["Q"], dtype=float),
                         data.get("b"), data.get("c", 0.0))
    if kind == "radial_cone_u":
        return RadialConeU(int(data["dim"]), float(data["t"]),
                           float(data.get("radius", 1.0)))
    if kind == "radial_cone_v":
        return RadialConeV(int(data["dim"]), float(data["t"]),
                           float(data.get("scale", 1.0)))
    if kind == "radial_profile":
        return RadialProfile.from_samples(int(data["dim"]), data["r"],
                                          data["values"])
    if kind == "indicator_linear":
        return IndicatorLinear(Polytope.from_dict(data["polytope"]),
                               data.get("slope"), data.get("const", 0.0))
    if kind == "kink_sum":
        return KinkSum(data["center"], data.get("weights"), data.get("axes"),
                       data.get("linear"), data.get("const", 0.0))
    if kind == "piecewise_affine":
        return PiecewiseAffine(tuple(
            AffinePiece(p["slope"], p["offset"],
                        Polytope.from_dict(p["polytope"]))
            for p in data["pieces"]), int(data.get("dim", 0)))
    if kind == "piecewise_quadratic_1d":
        lo = -INF if data.get("lo") in (None, "-inf") else float(data["lo"])
        hi = INF if data.get("hi") in (None, "inf") else float(data["hi"])
        return PiecewiseQuadratic1D(data["breaks"], data["coeffs"], lo, hi)
    raise UnsupportedVariant(f"unknown function type {kind!r}")


def load(path):
    with open(path) as fh:
        return from_dict(json.load(fh))


def dump(f, path):
    with open(path, "w") as fh:
        json.dump(to_dict(f), fh, indent=1)
        fh.write("\n")
