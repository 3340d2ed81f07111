"""Legendre-Fenchel conjugation, Moreau-Yosida envelopes and rotational
epi-symmetrization."""

import numpy as np

from ._numerics import omega
from .convexfun import (INF, Grid, IndicatorLinear, KinkSum, PiecewiseAffine,
                        Quadratic, RadialConeU, RadialConeV, RadialProfile,
                        separable_envelope, to_grid)
from .errors import (DimensionMismatch, EmptyDomain, NonpositiveScale,
                     UnboundedDomain, UnsupportedVariant)
from .polytope import Polytope

__all__ = [
    "conjugate", "conjugate_at", "legendre", "biconjugate_check",
    "moreau_yosida", "rotational_episymmetrize", "rotation_directions",
    "super_fibonacci", "profile_gap",
]


# ------------------------------------------------------------ closed forms

def conjugate(f):
    """Exact conjugate for the variants that are closed under conjugation.

    Quadratics with invertible ``Q``, the cone pair, and the pair
    box-indicator-plus-linear / kink sum.  Other variants raise
    UnsupportedVariant; use :func:`legendre` for a grid approximation.
    """
    if isinstance(f, Quadratic):
        try:
            qi = np.linalg.inv(f.Q)
        except np.linalg.LinAlgError:
            raise UnsupportedVariant("conjugate of a degenerate quadratic")
        if np.linalg.cond(f.Q) > 1e12:
            raise UnsupportedVariant("conjugate of a degenerate quadratic")
        return Quadratic(qi, -qi @ f.b, 0.5 * f.b @ qi @ f.b - f.c)
    if isinstance(f, RadialConeU):
        return RadialConeV(f.dim, f.t, f.radius)
    if isinstance(f, RadialConeV):
        return RadialConeU(f.dim, f.t, f.scale)
    if isinstance(f, KinkSum):
        half = 0.5 * f.weights
        box = Polytope.box(f.linear - half, f.linear + half)
        return IndicatorLinear(box, f.center, -f.linear @ f.center - f.const)
    if isinstance(f, IndicatorLinear):
        lo, hi = _as_box(f.polytope)
        mid = 0.5 * (lo + hi)
        width = hi - lo
        axes = tuple(int(i) for i in np.nonzero(width > 0)[0])
        return KinkSum(f.slope, np.where(width > 0, width, 1.0), axes, mid,
                       -mid @ f.slope - f.const)
    raise UnsupportedVariant(f"no closed-form conjugate for {type(f).__name__}")


def _as_box(poly):
    lo, hi = poly.bounding_box().T
    corners = Polytope.box(lo, hi).vertices
    if not np.all(poly.contains(corners, 1e-9)):
        raise UnsupportedVariant("closed-form conjugate needs a box domain")
    return lo, hi


def _vertex_data(f):
    """Points and values whose affine hull determines the conjugate exactly."""
    if isinstance(f, PiecewiseAffine):
        if not f.pieces:
            raise EmptyDomain("function has an empty domain")
        pts = np.vstack([p.polytope.vertices for p in f.pieces])
        vals = np.concatenate([p.value(p.polytope.vertices) for p in f.pieces])
        return pts, vals
    if isinstance(f, IndicatorLinear):
        v = f.polytope.vertices
        return v, v @ f.slope + f.const
    if isinstance(f, Grid):
        finite = np.isfinite(f.values)
        if not finite.any():
            raise EmptyDomain("grid is +inf everywhere")
        return f.nodes()[finite], f.values[finite]
    return None


def conjugate_at(f, y):
    """``f*(y) = sup_x <y, x> - f(x)`` at points ``y`` of shape ``(..., n)``.

    Exact for closed forms and for polyhedral data (piecewise affine and
    indicator variants by vertex enumeration; grids as the conjugate of the
    max-affine envelope of their samples).
    """
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != f.dim:
        raise DimensionMismatch("dual points have the wrong dimension")
    data = _vertex_data(f)
    if data is None:
        return conjugate(f).evaluate(y)
    pts, vals = data
    flat = y.reshape(-1, f.dim)
    out = np.empty(len(flat))
    step = max(1, 2_000_000 // max(len(pts), 1))
    for a in range(0, len(flat), step):
        out[a:a + step] = np.max(flat[a:a + step] @ pts.T - vals, axis=1)
    return out.reshape(y.shape[:-1])


# ---------------------------------------------------------------- grids

def _axis_conjugate(v, axis, x, y):
    """``max_m (y x_m + v_m)`` along ``axis``; ``-inf`` entries are ignored."""
    moved = np.moveaxis(v, axis, -1)
    lead = moved.shape[:-1]
    flat = moved.reshape(-1, moved.shape[-1])
    out = np.empty((flat.shape[0], y.size))
    step = max(1, 4_000_000 // (x.size * y.size))
    for a in range(0, flat.shape[0], step):
        block = flat[a:a + step]
        out[a:a + step] = np.max(block[:, None, :] + y[:, None] * x[None, :],
                                 axis=-1)
    return np.moveaxis(out.reshape(lead + (y.size,)), -1, axis)


def _default_dual_box(g):
    """Per-axis range from the first and last difference slopes."""
    box = np.empty((g.dim, 2))
    for i in range(g.dim):
        d = np.diff(g.values, axis=i) / g.spacing[i]
        first = np.take(d, 0, axis=i)
        last = np.take(d, -1, axis=i)
        lo = first[np.isfinite(first)]
        hi = last[np.isfinite(last)]
        if lo.size == 0 or hi.size == 0:
            interior = d[np.isfinite(d)]
            lo = hi = interior if interior.size else np.zeros(1)
        box[i] = lo.min(), hi.max()
        if box[i, 1] - box[i, 0] < 1e-12:
            box[i] += (-1.0, 1.0)
    return box


def legendre(f, dual_box=None, dual_resolution=None):
    """Conjugate of ``f`` sampled on a regular dual grid.

    Grid inputs are read as the max-affine envelope of their samples and
    transformed one axis at a time (the sup over a product of node sets
    splits into nested one-dimensional sups).  Piecewise-affine and
    indicator inputs use exact vertex enumeration; closed forms are sampled.

    Parameters
    ----------
    f : ConvexFunction
    dual_box : array_like, shape (n, 2), optional
        Defaults to the slope range of the input.
    dual_resolution : int or tuple, optional
        Nodes per axis; defaults to the input shape (or 65).

    Returns
    -------
    Grid
    """
    n = f.dim
    if dual_box is None:
        if isinstance(f, Grid):
            dual_box = _default_dual_box(f)
        elif isinstance(f, PiecewiseAffine) and f.pieces:
            s = np.stack([p.slope for p in f.pieces])
            dual_box = np.stack([s.min(0) - 1.0, s.max(0) + 1.0], axis=-1)
        else:
            dual_box = np.tile([-2.0, 2.0], (n, 1))
    dual_box = np.atleast_2d(np.asarray(dual_box, dtype=float))
    if dual_box.shape != (n, 2):
        raise DimensionMismatch("dual_box must be (n, 2)")
    if dual_resolution is None:
        dual_resolution = f.shape if isinstance(f, Grid) else 65
    if isinstance(dual_resolution, (int, np.integer)):
        dual_resolution = (int(dual_resolution),) * n
    ys = [np.linspace(lo, hi, m) for (lo, hi), m in zip(dual_box,
                                                         dual_resolution)]
    if isinstance(f, Grid):
        if not np.isfinite(f.values).any():
            raise EmptyDomain("grid is +inf everywhere")
        v = -f.values
        for i, x in enumerate(f.axes):
            v = _axis_conjugate(v, i, x, ys[i])
        return Grid(dual_box, v)
    mesh = np.stack(np.meshgrid(*ys, indexing="ij"), axis=-1)
    return Grid(dual_box, conjugate_at(f, mesh))


def biconjugate_check(f, box=None, shape=33):
    """Sup-norm gap between ``f**`` and ``f`` on the finite primal nodes.

    Zero (up to rounding) for convex samples; for non-convex samples the gap
    is the distance to the discrete convex envelope.  Non-grid inputs are
    first sampled on ``box`` (default ``[-1, 1]^n``).
    """
    if not isinstance(f, Grid):
        box = np.tile([-1.0, 1.0], (f.dim, 1)) if box is None else box
        f = to_grid(f, box, shape)
    star = legendre(f)
    back = legendre(star, f.box, f.shape)
    finite = np.isfinite(f.values)
    return float(np.max(np.abs(back.values[finite] - f.values[finite])))


# ---------------------------------------------------------------- Moreau

def moreau_yosida(u, lam, box=None, shape=None):
    """Moreau-Yosida envelope ``u [] |.|^2 / (2 lam)``.

    Closed forms for quadratics, point indicators and the cone pair (the
    latter become radial profiles).  Grids are enlarged on every side by
    ``lam * max slope`` and processed axis by axis; other variants are
    sampled on ``box``/``shape`` first.
    """
    lam = float(lam)
    if not lam > 0:
        raise NonpositiveScale("Moreau envelope needs lam > 0")
    n = u.dim
    if isinstance(u, Quadratic):
        a = u.Q + np.eye(n) / lam
        ai = np.linalg.inv(a)
        return Quadratic(np.eye(n) / lam - ai / lam**2, ai @ u.b / lam,
                         u.c - 0.5 * u.b @ ai @ u.b)
    if isinstance(u, IndicatorLinear) and not u.polytope.is_full_dimensional \
            and len(u.polytope.vertices) == 1:
        p = u.polytope.vertices[0]
        return Quadratic(np.eye(n) / lam, -p / lam,
                         p @ p / (2 * lam) + p @ u.slope + u.const)
    if isinstance(u, RadialConeU):
        return _moreau_cone_u(u, lam)
    if isinstance(u, RadialConeV):
        return _moreau_cone_v(u, lam)
    if isinstance(u, Grid):
        return separable_envelope(u, lam)
    if box is None or shape is None:
        raise UnsupportedVariant(
            f"Moreau envelope of {type(u).__name__} needs box and shape")
    return separable_envelope(to_grid(u, box, shape), lam)


def _moreau_cone_u(u, lam):
    t, big = u.t, u.radius

    def nearest(r):
        return np.clip(r - lam * t, 0.0, big)

    def phi(r):
        p = nearest(r)
        return t * p + (r - p) ** 2 / (2 * lam)

    def dphi(r):
        return (r - nearest(r)) / lam

    def d2phi(r):
        inner = (r > lam * t) & (r < lam * t + big)
        return np.where(inner, 0.0, 1.0 / lam)

    return RadialProfile(u.dim, phi, dphi, d2phi,
                         kinks=(lam * t, lam * t + big))


def _moreau_cone_v(u, lam):
    t, sc = u.t, u.scale
    top = t + lam * sc

    def phi(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= t, 0.0, np.where(
            r <= top, (r - t) ** 2 / (2 * lam), sc * (r - t) - lam * sc**2 / 2))

    def dphi(r):
        r = np.asarray(r, dtype=float)
        return np.clip((r - t) / lam, 0.0, sc)

    def d2phi(r):
        r = np.asarray(r, dtype=float)
        return np.where((r > t) & (r < top), 1.0 / lam, 0.0)

    return RadialProfile(u.dim, phi, dphi, d2phi, kinks=(t, top))


# ---------------------------------------------------------- symmetrization

_SF_PSI = 1.533751168755204288118041


def super_fibonacci(m):
    """``m`` quasi-uniform unit quaternions ``(x, y, z, w)`` on ``S^3``."""
    s = np.arange(m) + 0.5
    r = np.sqrt(s / m)
    big = np.sqrt(1.0 - s / m)
    alpha = 2 * np.pi * s / np.sqrt(2.0)
    beta = 2 * np.pi * s / _SF_PSI
    return np.stack([r * np.sin(alpha), r * np.cos(alpha),
                     big * np.sin(beta), big * np.cos(beta)], axis=-1)


def _quat_matrix(q):
    x, y, z, w = q.T
    return np.stack([
        np.stack([1 - 2 * (y*y + z*z), 2 * (x*y - z*w), 2 * (x*z + y*w)], -1),
        np.stack([2 * (x*y + z*w), 1 - 2 * (x*x + z*z), 2 * (y*z - x*w)], -1),
        np.stack([2 * (x*z - y*w), 2 * (y*z + x*w), 1 - 2 * (x*x + y*y)], -1),
    ], axis=-2)


def rotation_directions(n, m):
    """Images ``R^T e_1`` of ``e_1`` under ``m`` sampled rotations."""
    if n == 2:
        th = 2 * np.pi * np.arange(m) / m
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    if n == 3:
        rot = _quat_matrix(super_fibonacci(m))
        return rot[:, 0, :]
    raise UnsupportedVariant("episymmetrization is implemented for n = 2, 3")


def _domain_vertices(u):
    if isinstance(u, Grid):
        fin = np.isfinite(u.values)
        if not fin.any():
            raise EmptyDomain("grid is +inf everywhere")
        return u.nodes()[fin]
    if isinstance(u, (IndicatorLinear,)):
        return u.polytope.vertices
    if isinstance(u, PiecewiseAffine):
        return np.vstack([p.polytope.vertices for p in u.pieces])
    if isinstance(u, RadialConeU):
        return None
    raise UnboundedDomain(
        f"{type(u).__name__} does not have a bounded domain")


def rotational_episymmetrize(u, m=64, slope_max=None, radial_nodes=257,
                             slope_nodes=2001):
    """Rotation mean of ``u`` through its epigraph support function.

    The conjugate of the output at ``r e`` is the mean of ``u*`` over the
    ``m`` sampled rotations of ``r e``; the output is recovered by a
    one-dimensional radial conjugation and returned as a RadialProfile on
    ``[0, h]``, with ``h`` the mean support function of the domain.

    Parameters
    ----------
    u : ConvexFunction
        Variant with bounded domain in dimension 2 or 3.
    m : int
        Number of rotations (equispaced angles for n=2, super-Fibonacci
        quaternions for n=3).
    slope_max : float, optional
        Largest radial slope resolved; defaults to twice the slope scale of
        the input (at least 1).
    """
    n = u.dim
    if n not in (2, 3):
        raise UnsupportedVariant("episymmetrization is implemented for n = 2, 3")
    verts = _domain_vertices(u)
    dirs = rotation_directions(n, m)
    if verts is None:
        h_mean = u.radius
    else:
        h_mean = float(np.mean(np.max(dirs @ verts.T, axis=1)))
    if slope_max is None:
        if isinstance(u, Grid):
            slope_max = 2.0 * max(u.max_slope(), 0.5)
        elif isinstance(u, RadialConeU):
            slope_max = 2.0 * max(u.t, 0.5)
        else:
            slope_max = 1.0
    rho = np.linspace(0.0, slope_max, slope_nodes)
    g = np.mean(conjugate_at(u, rho[:, None, None] * dirs[None]), axis=1)
    r = np.linspace(0.0, h_mean, radial_nodes)
    vals = np.max(r[:, None] * rho[None, :] - g[None, :], axis=1)
    out = RadialProfile.from_samples(n, r, vals)
    return out


def profile_gap(a, b, nodes=513):
    """Sup distance between two radial outputs on their common radii plus
    the difference of their domain radii."""
    top = min(a.radius, b.radius)
    r = np.linspace(0.0, top, nodes)
    return float(np.max(np.abs(a.phi(r) - b.phi(r))) + abs(a.radius - b.radius))
