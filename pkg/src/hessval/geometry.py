"""Convex bodies: support functions, intrinsic volumes and simplex dissections."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull

from ._numerics import ball_intrinsic_volume, kappa, rng
from .errors import DegenerateFit, DimensionMismatch
from .polytope import Polytope

__all__ = [
    "Body", "OrthogonalSimplex", "support_function", "intrinsic_volumes",
    "ball_intrinsic_volumes", "parallel_volume", "canonical_dissection",
    "dissection_volume_mc", "cylinder_check", "STEINER_GRID",
]

STEINER_GRID = np.linspace(0.1, 1.0, 10)


@dataclass(frozen=True, eq=False)
class Body:
    """Non-empty compact convex set: a polytope or a Euclidean ball."""

    polytope: Optional[Polytope] = None
    center: Optional[np.ndarray] = None
    radius: float = 0.0

    @classmethod
    def ball(cls, center, radius=1.0):
        return cls(None, np.atleast_1d(np.asarray(center, dtype=float)),
                   float(radius))

    @classmethod
    def box(cls, lo, hi):
        return cls(Polytope.box(lo, hi))

    @classmethod
    def from_vertices(cls, vertices):
        return cls(Polytope.from_vertices(vertices))

    @property
    def is_ball(self):
        return self.polytope is None

    @property
    def dim(self):
        return self.center.size if self.is_ball else self.polytope.dim

    @property
    def volume(self):
        if self.is_ball:
            return kappa(self.dim) * self.radius ** self.dim
        return self.polytope.volume


def _as_body(k):
    return Body(k) if isinstance(k, Polytope) else k


def support_function(k, y):
    """``h_K(y) = max_{x in K} <x, y>``."""
    k = _as_body(k)
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != k.dim:
        raise DimensionMismatch("direction has the wrong dimension")
    if k.is_ball:
        return y @ k.center + k.radius * np.linalg.norm(y, axis=-1)
    return k.polytope.support(y)


def ball_intrinsic_volumes(n, radius=1.0):
    return np.array([ball_intrinsic_volume(n, j, radius) for j in range(n + 1)])


# ------------------------------------------------------- parallel volumes

def _segment_distance(p, a, b):
    d = b - a
    t = np.clip((p - a) @ d / (d @ d), 0.0, 1.0)
    return np.linalg.norm(p - a - t[:, None] * d, axis=-1)


def _triangle_face_distance(p, a, b, c):
    """Distance to the plane of ``abc`` where the projection lies inside."""
    e1, e2 = b - a, c - a
    normal = np.cross(e1, e2)
    normal = normal / np.linalg.norm(normal)
    w = p - a
    height = w @ normal
    proj = w - height[:, None] * normal
    d11, d12, d22 = e1 @ e1, e1 @ e2, e2 @ e2
    p1, p2 = proj @ e1, proj @ e2
    det = d11 * d22 - d12 * d12
    u = (d22 * p1 - d12 * p2) / det
    v = (d11 * p2 - d12 * p1) / det
    inside = (u >= 0) & (v >= 0) & (u + v <= 1)
    return np.where(inside, np.abs(height), np.inf)


def _distance_to_polytope(points, poly, hull, cutoff=np.inf):
    """Euclidean distance from 3-D points to a full-dimensional polytope.

    Points whose facet slack already exceeds ``cutoff`` get that lower
    bound instead of the exact distance.
    """
    norms = np.linalg.norm(poly.normals, axis=1)
    slack = np.max((points @ poly.normals.T - poly.offsets) / norms, axis=1)
    out = np.maximum(slack, 0.0)
    outside = (slack > 0) & (slack <= cutoff)
    p = points[outside]
    best = np.full(len(p), np.inf)
    verts = hull.points
    owners = {}
    for tri, eq in zip(hull.simplices, hull.equations):
        a, b, c = verts[tri]
        best = np.minimum(best, _triangle_face_distance(p, a, b, c))
        for i, j in ((0, 1), (1, 2), (0, 2)):
            owners.setdefault(tuple(sorted((tri[i], tri[j]))), []).append(eq)
    # diagonals inside a planar facet are never closest
    edges = [e for e, eqs in owners.items()
             if len(eqs) < 2 or not np.allclose(eqs[0], eqs[1], atol=1e-12)]
    for i, j in edges:
        best = np.minimum(best, _segment_distance(p, verts[i], verts[j]))
    out[outside] = best
    return out


def parallel_volume(k, s, samples=10**6, seed=None, shard=0):
    """``vol(K + s B^n)`` and its standard error.

    Exact for balls and for planar polytopes (area + perimeter s + pi s^2);
    Monte Carlo with exact point-to-polytope distances for 3-D polytopes.
    """
    k = _as_body(k)
    n = k.dim
    if k.is_ball:
        return kappa(n) * (k.radius + s) ** n, 0.0
    poly = k.polytope
    if n == 1:
        return poly.volume + 2 * s, 0.0
    if n == 2:
        hull = ConvexHull(poly.vertices)
        return hull.volume + hull.area * s + np.pi * s * s, 0.0
    if n != 3:
        raise DimensionMismatch("parallel volumes are implemented for n <= 3")
    hull = ConvexHull(poly.vertices)
    box = poly.bounding_box() + np.array([-s, s])
    span = box[:, 1] - box[:, 0]
    gen = rng(seed, shard)
    hits = 0
    chunk = 200_000
    for start in range(0, samples, chunk):
        m = min(chunk, samples - start)
        pts = box[:, 0] + span * gen.random((m, 3))
        dist = _distance_to_polytope(pts, poly, hull, cutoff=s)
        hits += int(np.count_nonzero(dist <= s))
    p = hits / samples
    vol_box = float(np.prod(span))
    return vol_box * p, vol_box * np.sqrt(p * (1 - p) / samples)


def intrinsic_volumes(k, s_grid=None, samples=10**6, seed=None,
                      return_stderr=False):
    """Intrinsic volumes ``V_0, ..., V_n`` from a Steiner polynomial fit.

    ``vol(K + sB) = sum_j kappa_{n-j} V_j(K) s^(n-j)`` is sampled on
    ``s_grid`` (default ten nodes in ``[0.1, 1]``) and fitted by weighted
    least squares.

    Raises
    ------
    DegenerateFit
        If the design matrix is ill-conditioned.
    """
    k = _as_body(k)
    n = k.dim
    s_grid = STEINER_GRID if s_grid is None else np.asarray(s_grid, float)
    design = s_grid[:, None] ** np.arange(n + 1)
    cond = float(np.linalg.cond(design))
    if s_grid.size < n + 1 or cond > 1e8:
        raise DegenerateFit(f"Steiner design condition {cond:.3g}")
    vals, errs = np.empty(s_grid.size), np.empty(s_grid.size)
    for i, s in enumerate(s_grid):
        vals[i], errs[i] = parallel_volume(k, s, samples, seed, shard=i)
    if np.all(errs == 0):
        coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
        cov = np.zeros((n + 1, n + 1))
    else:
        w = 1.0 / np.maximum(errs, errs[errs > 0].min()) ** 2
        cov = np.linalg.inv(design.T @ (w[:, None] * design))
        coef = cov @ (design.T @ (w * vals))
    # coefficient of s^m is kappa_m V_{n-m}
    kap = np.array([kappa(m) for m in range(n + 1)])
    v = (coef / kap)[::-1]
    if return_stderr:
        return v, (np.sqrt(np.diag(cov)) / kap)[::-1]
    return v


# ----------------------------------------------------------- dissections

@dataclass(frozen=True, eq=False)
class OrthogonalSimplex:
    """Simplex ``conv(p_0, ..., p_n)`` with ``p_i = x_0 + x_1 + ... + x_i``
    for pairwise orthogonal edge vectors ``x_1, ..., x_n``."""

    base: np.ndarray
    edges: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float).ravel()
        edges = np.atleast_2d(np.asarray(self.edges, dtype=float))
        n = base.size
        if edges.shape != (n, n):
            raise DimensionMismatch("need n edge vectors in R^n")
        gram = edges @ edges.T
        off = gram - np.diag(np.diag(gram))
        if np.any(np.diag(gram) <= 0) or np.abs(off).max() > 1e-10 * max(
                1.0, np.diag(gram).max()):
            raise ValueError("edge vectors must be non-zero and orthogonal")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def standard(cls, n):
        return cls(np.zeros(n), np.eye(n))

    @property
    def dim(self):
        return self.base.size

    @property
    def points(self):
        return self.base + np.vstack([np.zeros(self.dim),
                                      np.cumsum(self.edges, axis=0)])

    @property
    def volume(self):
        return float(np.prod(np.linalg.norm(self.edges, axis=1))
                     / np.prod(np.arange(1, self.dim + 1)))

    def polytope(self):
        return Polytope.from_vertices(self.points)


def _minkowski(a, b):
    return (a[:, None, :] + b[None, :, :]).reshape(-1, a.shape[1])


def canonical_dissection(simplex, t):
    """The ``n + 1`` pieces ``(1-t) conv(p_0..p_k) + t conv(p_k..p_n)``.

    Returns
    -------
    list of Polytope
        Piece ``k`` for ``k = 0, ..., n``.
    """
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    p = simplex.points
    n = simplex.dim
    return [Polytope.from_vertices(_minkowski((1 - t) * p[:k + 1], t * p[k:]))
            for k in range(n + 1)]


def dissection_volume_mc(simplex, t, samples=10**6, seed=None):
    """Monte-Carlo check of the dissection.

    Returns the estimated total volume of the pieces, its standard error,
    and the largest number of pieces whose interiors contain one sample.
    """
    pieces = canonical_dissection(simplex, t)
    box = simplex.polytope().bounding_box()
    span = box[:, 1] - box[:, 0]
    gen = rng(seed, 0)
    pts = box[:, 0] + span * gen.random((samples, simplex.dim))
    counts = np.zeros(samples, int)
    interior = np.zeros(samples, int)
    for piece in pieces:
        counts += piece.contains(pts, 0.0)
        slack = pts @ piece.normals.T - piece.offsets
        interior += np.all(slack < -1e-12, axis=-1)
    vol_box = float(np.prod(span))
    mean = counts.mean()
    return (vol_box * mean, vol_box * counts.std(ddof=1) / np.sqrt(samples),
            int(interior.max()))


def _flat_volume(points, basis):
    """Volume of ``conv(points)`` inside the span of orthonormal ``basis``."""
    local = points @ basis.T
    d = basis.shape[0]
    if d == 1:
        return float(np.ptp(local[:, 0]))
    return float(ConvexHull(local).volume)


def cylinder_check(simplex, t, k):
    """Relative gap between piece ``k`` and the product of its projections.

    For ``1 <= k <= n-1`` piece ``k`` is a Minkowski sum of a body in
    ``E = span(x_1..x_k)`` and one in the orthogonal ``F``; then its volume
    is the product of the volumes of its projections onto ``E`` and ``F``.
    """
    n = simplex.dim
    if not 1 <= k <= n - 1:
        raise ValueError("cylinder pieces have 1 <= k <= n-1")
    piece = canonical_dissection(simplex, t)[k]
    units = simplex.edges / np.linalg.norm(simplex.edges, axis=1)[:, None]
    e, f = units[:k], units[k:]
    prod = _flat_volume(piece.vertices, e) * _flat_volume(piece.vertices, f)
    return abs(piece.volume - prod) / piece.volume
