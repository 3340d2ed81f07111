"""Hessian measures of convex functions.

Three routes are provided: a density ``[D^2 u]_j dx`` for smooth functions,
exact singular parts (point masses, uniform sphere masses, Lebesgue measure
on coordinate flats) for the cone and kink families, and Monte-Carlo volumes
of the parallel sets ``P_s(u, A) = {x + s y : (x, y) in graph(du), (x, y) in A}``
whose polynomial coefficients are the joint measures.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

import numpy as np

from ._numerics import (binom, box_rule, kappa, omega, panel_rule,
                        principal_minor_sum, radial_edges, rng, sphere_rule)
from .convexfun import (Grid, KinkSum, PiecewiseQuadratic1D, Quadratic,
                        RadialConeV, RadialProfile, Transformed)
from .errors import (DegenerateFit, DimensionMismatch, IndexOutOfRange,
                     NonAlignedSubspaces, NonRadial, OriginSingularity,
                     UnsupportedVariant)
from .zetaspace import generalized_kernel

__all__ = [
    "elementary_symmetric", "HessianMeasure", "DensityPart", "FlatPart",
    "phi_measure", "psi_via_conjugate", "Ball", "Box", "Sphere", "Everything",
    "JointRegion", "ps_volume", "theta_coefficients", "ThetaFit",
    "product_decompose", "direct_sum", "level_set_curvature",
    "lipschitz_on_sublevel", "as_radial_profile",
]


def elementary_symmetric(a, k):
    """``[A]_k``, the sum of the ``k x k`` principal minors of ``A``.

    Equals the ``k``-th elementary symmetric function of the eigenvalues
    without computing them; ``[A]_0 = 1``.  Leading axes of ``a`` are
    treated as a batch.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    if a.ndim < 2 or a.shape[-2] != n:
        raise DimensionMismatch("need square matrices")
    if not 0 <= k <= n:
        raise IndexOutOfRange(f"k={k} outside 0..{n}")
    out = principal_minor_sum(a, k)
    return float(out) if out.ndim == 0 else out


# ----------------------------------------------------------------- regions

@dataclass(frozen=True)
class Ball:
    radius: float
    center: Optional[tuple] = None

    def contains(self, x):
        c = 0.0 if self.center is None else np.asarray(self.center)
        return np.linalg.norm(x - c, axis=-1) <= self.radius

    def bounds(self, n):
        c = np.zeros(n) if self.center is None else np.asarray(self.center)
        return np.stack([c - self.radius, c + self.radius], axis=-1)


@dataclass(frozen=True)
class Sphere:
    """The sphere of the given radius about the origin (zero volume)."""

    radius: float
    rtol: float = 1e-9

    def contains(self, x):
        r = np.linalg.norm(x, axis=-1)
        return np.abs(r - self.radius) <= self.rtol * max(self.radius, 1e-300)

    def bounds(self, n):
        return np.tile([-self.radius, self.radius], (n, 1))


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    def contains(self, x):
        return np.all((x >= np.asarray(self.lo)) & (x <= np.asarray(self.hi)),
                      axis=-1)

    def bounds(self, n):
        return np.stack([np.asarray(self.lo, float),
                         np.asarray(self.hi, float)], axis=-1)


@dataclass(frozen=True)
class Everything:
    def contains(self, x):
        return np.ones(x.shape[:-1], bool)

    def bounds(self, n):
        return None


@dataclass(frozen=True)
class JointRegion:
    """Product set ``A = X x Y`` in ``R^n x R^n``."""

    x: object
    y: object = field(default_factory=Everything)


# ---------------------------------------------------------------- measures

@dataclass(frozen=True)
class DensityPart:
    """Absolutely continuous part on the annulus ``inner < |x| < outer``.

    ``density`` maps points ``(..., n)`` to values; ``radial`` optionally
    gives the same density as a function of ``|x|`` alone.  ``radii`` lists
    radii where the density jumps (used as quadrature breakpoints).
    """

    density: Callable
    inner: float = 0.0
    outer: float = np.inf
    radial: Optional[Callable] = None
    radii: tuple = ()


@dataclass(frozen=True)
class FlatPart:
    """``weight`` times Lebesgue measure on ``{x : x[axes] = values}``."""

    axes: tuple
    values: tuple
    weight: float = 1.0


@dataclass
class HessianMeasure:
    """Hybrid non-negative measure on ``R^n``.

    Attributes
    ----------
    atoms : list of (point, weight)
    sphere_parts : list of (radius, mass)
        Uniform mass on the sphere of that radius about the origin.
    flat_parts : list of FlatPart
    density_parts : list of DensityPart
    nodal : tuple of (points, weights) or None
        Discretised density on grid nodes.
    """

    dim: int
    j: int
    side: str = "primal"
    atoms: list = field(default_factory=list)
    sphere_parts: list = field(default_factory=list)
    flat_parts: list = field(default_factory=list)
    density_parts: list = field(default_factory=list)
    nodal: Optional[tuple] = None

    # -- integration of radial test functions
    def integrate(self, zeta, resolution=64):
        """``int zeta(|x|) d mu(x)`` for a radial weight ``zeta``."""
        n = self.dim
        total = 0.0
        for p, w in self.atoms:
            total += w * float(zeta(np.linalg.norm(p)))
        for r, m in self.sphere_parts:
            total += m * float(zeta(r))
        for fp in self.flat_parts:
            d = n - len(fp.axes)
            t = float(np.linalg.norm(fp.values))
            if d == 0:
                total += fp.weight * float(zeta(t))
            else:
                total += fp.weight * omega(d) * generalized_kernel(zeta, d - 1, t)
        for dp in self.density_parts:
            total += self._density_radial(dp, zeta, resolution)
        if self.nodal is not None:
            pts, w = self.nodal
            total += float(np.sum(zeta(np.linalg.norm(pts, axis=-1)) * w))
        return total

    def _density_radial(self, dp, zeta, resolution):
        n = self.dim
        upper = min(dp.outer, zeta.support)
        if upper <= dp.inner:
            return 0.0
        breaks = np.concatenate([zeta.knots(dp.inner, upper),
                                 np.asarray(dp.radii, dtype=float)])
        edges = radial_edges(breaks, upper, dp.inner)
        r, wr = panel_rule(edges, 10)
        weight = wr * zeta(r) * r ** (n - 1)
        if dp.radial is not None:
            return omega(n) * float(np.sum(weight * dp.radial(r)))
        dirs, wd = sphere_rule(n, resolution)
        total = 0.0
        for start in range(0, len(dirs), 512):
            d = dirs[start:start + 512]
            pts = r[:, None, None] * d[None, :, :]
            g = np.asarray(dp.density(pts))
            total += float(np.einsum("p,pd,d->", weight, g,
                                     wd[start:start + 512]))
        return total

    # -- mass of boxes
    def mass(self, box, m=8, panels=4):
        """``mu(B)`` for an axis-aligned box ``B`` given as ``(n, 2)`` bounds."""
        box = np.atleast_2d(np.asarray(box, dtype=float))
        if box.shape != (self.dim, 2):
            raise DimensionMismatch("box must be (dim, 2)")
        lo, hi = box[:, 0], box[:, 1]
        inside = lambda x: np.all((x >= lo) & (x <= hi), axis=-1)
        total = 0.0
        for p, w in self.atoms:
            total += w * float(inside(np.asarray(p)))
        for r, mass in self.sphere_parts:
            if r == 0.0:
                total += mass * float(inside(np.zeros(self.dim)))
                continue
            dirs, wd = sphere_rule(self.dim, 128)
            frac = np.sum(wd * inside(r * dirs)) / omega(self.dim)
            total += mass * frac
        for fp in self.flat_parts:
            ax = list(fp.axes)
            if not np.all(inside_axes(np.asarray(fp.values), lo[ax], hi[ax])):
                continue
            rest = [i for i in range(self.dim) if i not in ax]
            total += fp.weight * float(np.prod(hi[rest] - lo[rest]))
        if self.density_parts and self.dim == 1:
            # split at the recorded jump points of 1-D densities
            cuts = [c for dp in self.density_parts for r in dp.radii
                    for c in (r, -r) if lo[0] < c < hi[0]]
            edges = np.unique(np.concatenate([np.linspace(lo[0], hi[0],
                                                          panels + 1), cuts]))
            x, w = panel_rule(edges, m)
            pts = x[:, None]
        elif self.density_parts:
            pts, w = box_rule(box, m, panels)
        if self.density_parts:
            rad = np.linalg.norm(pts, axis=-1)
            for dp in self.density_parts:
                sel = (rad > dp.inner) & (rad < dp.outer)
                if np.any(sel):
                    total += float(np.sum(w[sel] * dp.density(pts[sel])))
        if self.nodal is not None:
            pts, w = self.nodal
            total += float(np.sum(w[inside(pts)]))
        return total

    def is_nonnegative(self, tol=1e-12):
        ok = all(w >= -tol for _, w in self.atoms)
        ok &= all(mass >= -tol for _, mass in self.sphere_parts)
        ok &= all(fp.weight >= -tol for fp in self.flat_parts)
        if self.nodal is not None:
            ok &= bool(np.all(self.nodal[1] >= -tol))
        return bool(ok)


def inside_axes(v, lo, hi):
    return (v >= lo) & (v <= hi)


def _smooth_density(f, j):
    def density(x):
        return principal_minor_sum(f.hessian(x), j)
    return density


def _radial_density(prof, j):
    n = prof.dim

    def g(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            tang = np.where(r > 0, prof.dphi(r) / np.where(r > 0, r, 1.0),
                            prof.d2phi(np.zeros_like(r)))
        out = binom(n - 1, j) * tang ** j
        if j >= 1:
            out = out + binom(n - 1, j - 1) * prof.d2phi(r) * tang ** (j - 1)
        return out
    return g


def phi_measure(f, j):
    """Hessian measure ``Phi_j`` of ``f`` (a measure on the primal space).

    Parameters
    ----------
    f : ConvexFunction
        Quadratic, RadialProfile, Grid (finite-difference density), KinkSum,
        RadialConeV, or a rotated/translated smooth function.
    j : int
        Index ``0 <= j <= n``.

    Returns
    -------
    HessianMeasure
    """
    n = f.dim
    if not 0 <= j <= n:
        raise IndexOutOfRange(f"j={j} outside 0..{n}")
    mu = HessianMeasure(n, j)
    if j == 0:
        # Phi_0 is Lebesgue measure for every convex function
        mu.density_parts.append(DensityPart(
            lambda x: np.ones(x.shape[:-1]), radial=lambda r: np.ones_like(r)))
        return mu
    if isinstance(f, Quadratic):
        c = elementary_symmetric(f.Q, j)
        mu.density_parts.append(DensityPart(
            lambda x: np.full(x.shape[:-1], c), radial=lambda r: np.full_like(r, c)))
    elif isinstance(f, RadialProfile):
        g = _radial_density(f, j)
        mu.density_parts.append(DensityPart(
            lambda x: g(np.linalg.norm(x, axis=-1)), 0.0, f.radius, g,
            tuple(f.kinks)))
    elif isinstance(f, PiecewiseQuadratic1D):
        # j = 1: second derivative on the pieces plus the slope jumps
        if np.isfinite(f.lo) or np.isfinite(f.hi):
            raise UnsupportedVariant("Phi_1 of a function with bounded domain")
        a = f.coeffs[:, 0]
        lo, hi = f.lo, f.hi

        def dens(x):
            t = x[..., 0]
            inside = (t >= lo) & (t <= hi)
            return np.where(inside, a[np.searchsorted(f.breaks, t, "right")],
                            0.0)
        edges = [e for e in (lo, hi, *f.breaks) if np.isfinite(e)]
        mu.density_parts.append(DensityPart(
            dens, radii=tuple(abs(e) for e in edges)))
        for k, t in enumerate(f.breaks):
            (a0, b0, _), (a1, b1, _) = f.coeffs[k], f.coeffs[k + 1]
            jump = (a1 * t + b1) - (a0 * t + b0)
            if jump != 0.0:
                mu.atoms.append((np.array([t]), float(jump)))
    elif isinstance(f, Transformed):
        mu.density_parts.append(DensityPart(_smooth_density(f, j)))
    elif isinstance(f, Grid):
        mask, _, hess = f.node_derivatives()
        pts = f.nodes()[mask]
        w = principal_minor_sum(hess[mask], j) * np.prod(f.spacing)
        mu.nodal = (pts, w)
    elif isinstance(f, RadialConeV):
        sc = f.scale ** j
        if f.t == 0.0 and j == n:
            mu.atoms.append((np.zeros(n), sc * kappa(n)))
        elif f.t > 0.0:
            mu.sphere_parts.append(
                (f.t, sc * kappa(n) * binom(n, j) * f.t ** (n - j)))
        if j <= n - 1:
            c = sc * binom(n - 1, j)
            t = f.t
            mu.density_parts.append(DensityPart(
                lambda x: c / np.linalg.norm(x, axis=-1) ** j, t, np.inf,
                lambda r: c / r ** j))
    elif isinstance(f, KinkSum):
        for sub in combinations(f.axes, j):
            w = float(np.prod(f.weights[list(sub)]))
            vals = tuple(f.center[list(sub)])
            if len(sub) == n:
                mu.atoms.append((np.array(vals), w))
            else:
                mu.flat_parts.append(FlatPart(tuple(sub), vals, w))
    else:
        raise UnsupportedVariant(
            f"no Hessian measure route for {type(f).__name__}")
    return mu


def psi_via_conjugate(f, j, zeta):
    """``int zeta(|y|) d Psi_j(f, y)`` computed as ``int zeta(|x|) d Phi_j(f*, x)``."""
    from .transforms import conjugate
    mu = phi_measure(conjugate(f), j)
    mu.side = "dual"
    return mu.integrate(zeta)


# ------------------------------------------------------- parallel volumes

def _gradient_box(f, xbox):
    """Axis-aligned box containing the subgradients of ``f`` over ``xbox``."""
    n = f.dim
    if isinstance(f, Quadratic):
        mid = xbox.mean(axis=1)
        half = 0.5 * (xbox[:, 1] - xbox[:, 0])
        c = f.Q @ mid + f.b
        rad = np.abs(f.Q) @ half
        return np.stack([c - rad, c + rad], axis=-1)
    if isinstance(f, RadialConeV):
        return np.tile([-f.scale, f.scale], (n, 1))
    if isinstance(f, KinkSum):
        half = 0.5 * f.weights
        return np.stack([f.linear - half, f.linear + half], axis=-1)
    raise UnsupportedVariant(f"no subgradient map for {type(f).__name__}")


def ps_volume(f, region, s, samples=10**6, seed=None, shard=0):
    """Monte-Carlo volume of ``P_s(f, A)``.

    A point ``z`` lies in ``P_s`` exactly when ``x = prox_{s f}(z)`` and
    ``y = (z - x) / s`` satisfy ``(x, y) in A``; uniform samples in a box
    enclosing ``P_s`` are classified this way.  Singular parts of the
    graph of the subdifferential (the sphere for cones, hyperplanes for
    kinks) correspond to open sets of ``z`` and are therefore sampled with
    positive probability.

    Returns
    -------
    volume, stderr : float
    """
    n = f.dim
    xbox = region.x.bounds(n)
    if xbox is None:
        raise UnsupportedVariant("the x-part of the region must be bounded")
    xbox = np.asarray(xbox, dtype=float)
    zbox = xbox.copy()
    if s > 0:
        ybox = _gradient_box(f, xbox)
        yb = region.y.bounds(n)
        if yb is not None:
            ybox = np.stack([np.maximum(ybox[:, 0], yb[:, 0]),
                             np.minimum(ybox[:, 1], yb[:, 1])], axis=-1)
        zbox = xbox + s * ybox
    gen = rng(seed, shard)
    span = zbox[:, 1] - zbox[:, 0]
    vol_box = float(np.prod(span))
    hits = 0
    chunk = 250_000
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        z = zbox[:, 0] + span * gen.random((m, n))
        if s > 0:
            x = f.prox(z, s)
            y = (z - x) / s
            ok = region.x.contains(x) & region.y.contains(y)
        else:
            ok = region.x.contains(z)
        hits += int(np.count_nonzero(ok))
        done += m
    p = hits / samples
    return vol_box * p, vol_box * np.sqrt(max(p * (1 - p), 0.0) / samples)


@dataclass(frozen=True)
class ThetaFit:
    """Polynomial fit ``vol P_s = sum_j coefficients[j] s^j``."""

    coefficients: np.ndarray
    stderr: np.ndarray
    s_grid: np.ndarray
    volumes: np.ndarray
    volume_stderr: np.ndarray
    condition: float


def theta_coefficients(f, region, s_grid=None, samples=10**6, seed=None,
                       max_condition=1e8):
    """Coefficients of the parallel-volume polynomial by weighted least squares.

    Entry ``j`` of the result estimates ``Theta_{n-j}(f, A)``.  Each node of
    the ``s`` grid uses an independent random stream (shard = node index),
    so the coefficient standard errors follow from the normal equations.

    Raises
    ------
    DegenerateFit
        If the design matrix has condition number above ``max_condition``.
    """
    n = f.dim
    s_grid = np.linspace(0.0, 2.0, 9) if s_grid is None else np.asarray(
        s_grid, dtype=float)
    design = s_grid[:, None] ** np.arange(n + 1)
    cond = float(np.linalg.cond(design))
    if s_grid.size < n + 1 or not np.isfinite(cond) or cond > max_condition:
        raise DegenerateFit(f"s-grid design condition {cond:.3g}")
    vols = np.empty(s_grid.size)
    errs = np.empty(s_grid.size)
    for i, s in enumerate(s_grid):
        vols[i], errs[i] = ps_volume(f, region, s, samples, seed, shard=i)
    if np.all(errs == 0):
        # every node exact (region swept completely): plain least squares
        coef = np.linalg.lstsq(design, vols, rcond=None)[0]
        cov = np.zeros((n + 1, n + 1))
    else:
        w = 1.0 / np.maximum(errs, errs[errs > 0].min()) ** 2
        cov = np.linalg.inv(design.T @ (w[:, None] * design))
        coef = cov @ (design.T @ (w * vols))
    return ThetaFit(coef, np.sqrt(np.diag(cov)), s_grid, vols, errs, cond)


# --------------------------------------------------- product decomposition

def direct_sum(v_e, v_f, axes_e=None):
    """``v(x) = v_E(x_E) + v_F(x_F)`` for coordinate subspaces ``E``, ``F``."""
    k, m = v_e.dim, v_f.dim
    n = k + m
    axes_e, axes_f = _split_axes(n, k, axes_e)
    if isinstance(v_e, Quadratic) and isinstance(v_f, Quadratic):
        q = np.zeros((n, n))
        b = np.zeros(n)
        q[np.ix_(axes_e, axes_e)] = v_e.Q
        q[np.ix_(axes_f, axes_f)] = v_f.Q
        b[axes_e], b[axes_f] = v_e.b, v_f.b
        return Quadratic(q, b, v_e.c + v_f.c)
    if isinstance(v_e, KinkSum) and isinstance(v_f, KinkSum):
        c, w, lin = np.zeros(n), np.zeros(n), np.zeros(n)
        c[axes_e], c[axes_f] = v_e.center, v_f.center
        w[axes_e], w[axes_f] = v_e.weights, v_f.weights
        lin[axes_e], lin[axes_f] = v_e.linear, v_f.linear
        act = [axes_e[a] for a in v_e.axes] + [axes_f[a] for a in v_f.axes]
        return KinkSum(c, np.where(w > 0, w, 1.0), act, lin,
                       v_e.const + v_f.const)
    raise UnsupportedVariant("direct sums of quadratics or kink sums only")


def _split_axes(n, k, axes_e):
    axes_e = list(range(k)) if axes_e is None else [int(a) for a in axes_e]
    if len(axes_e) != k or len(set(axes_e)) != k or any(
            a < 0 or a >= n for a in axes_e):
        raise NonAlignedSubspaces(
            "E must be spanned by k distinct coordinate axes")
    axes_f = [a for a in range(n) if a not in axes_e]
    return axes_e, axes_f


def product_decompose(v_e, v_f, l, box, axes_e=None):
    """``Phi_l(v_E + v_F, B)`` assembled from the factors on ``B = B_E x B_F``.

    ``sum_i Phi_i(v_E, B_E) Phi_{l-i}(v_F, B_F)`` over
    ``max(0, l + k - n) <= i <= min(k, l)`` where ``k = dim E``.
    """
    k, m = v_e.dim, v_f.dim
    n = k + m
    if not 0 <= l <= n:
        raise IndexOutOfRange(f"l={l} outside 0..{n}")
    axes_e, axes_f = _split_axes(n, k, axes_e)
    box = np.atleast_2d(np.asarray(box, dtype=float))
    if box.shape != (n, 2):
        raise DimensionMismatch("box must be (n, 2)")
    total = 0.0
    for i in range(max(0, l + k - n), min(k, l) + 1):
        a = phi_measure(v_e, i).mass(box[axes_e])
        b = phi_measure(v_f, l - i).mass(box[axes_f])
        total += a * b
    return total


# ------------------------------------------------------- radial level sets

def as_radial_profile(f):
    """View a radially symmetric smooth function as a RadialProfile."""
    if isinstance(f, RadialProfile):
        return f
    if isinstance(f, Quadratic) and np.allclose(f.b, 0) and np.allclose(
            f.Q, f.Q[0, 0] * np.eye(f.dim)):
        c = f.Q[0, 0]
        base = RadialProfile.power(f.dim, c, 2.0)
        cc = f.c
        return RadialProfile(f.dim, lambda r: base.phi(r) + cc, base.dphi,
                             base.d2phi)
    raise NonRadial(f"{type(f).__name__} is not a radial profile")


def level_set_curvature(f, x, i):
    """``tau_i = C(n-1, i) / r^i``: elementary symmetric curvature of the level sphere."""
    prof = as_radial_profile(f)
    n = prof.dim
    r = float(np.linalg.norm(np.asarray(x, dtype=float)))
    if not 0 <= i <= n - 1:
        raise IndexOutOfRange(f"i={i} outside 0..{n - 1}")
    if r == 0.0:
        raise OriginSingularity("level sets degenerate at the origin")
    return binom(n - 1, i) / r ** i


def lipschitz_on_sublevel(f, t):
    """Lipschitz constant of ``f`` on ``{f <= t}``, i.e. ``phi'(r(t))``."""
    prof = as_radial_profile(f)
    r = prof.radius_of_level(t)
    return float(prof.dphi(np.array(r)))
