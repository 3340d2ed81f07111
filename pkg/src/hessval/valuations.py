"""Evaluation of the rotation-invariant valuations built from a weight ``zeta``.

Primal degree-``j`` valuation on super-coercive ``u``::

    Z(u) = int zeta(|grad u(x)|) [D^2 u(x)]_{n-j} dx

Dual degree-``j`` valuation on finite ``v``::

    Z*(v) = int zeta(|x|) [D^2 v(x)]_j dx

The two agree under conjugation, ``Z(u) = Z*(u*)``.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._numerics import (ball_intrinsic_volume, binom, graded_edges, kappa,
                        omega, panel_rule, principal_minor_sum, radial_edges,
                        solve_vandermonde, sphere_rule)
from .convexfun import (Grid, IndicatorLinear, PiecewiseAffine,
                        PiecewiseQuadratic1D, Quadratic, RadialConeU,
                        RadialConeV, RadialProfile, epi_multiply,
                        lattice_formal, pointwise_max, pointwise_min, rotate,
                        translate)
from .errors import (ClassViolation, DimensionMismatch, IndexOutOfRange,
                     SingularHessian, UnsupportedVariant)
from .hessmeasure import (as_radial_profile, level_set_curvature,
                          lipschitz_on_sublevel, phi_measure,
                          psi_via_conjugate)
from .transforms import moreau_yosida
from .zetaspace import certify_class, eta, moment, rho

__all__ = [
    "ValuationSpec", "valuate", "valuate_smooth", "valuate_cone",
    "valuate_cone_measure", "valuate_moreau", "MoreauResult",
    "moreau_expansion", "homogeneous_components", "valuation_property_check",
    "invariance_check", "reilly_identity_check", "ReillyResult",
    "reilly_alpha",
]

SIDES = ("primal", "dual")
ROUTES = ("quadrature", "closed_form", "moreau")


@dataclass(frozen=True)
class ValuationSpec:
    """Degree ``j``, weight ``zeta``, dimension ``n``, side and route."""

    j: int
    zeta: object
    dim: int
    side: str = "primal"
    route: str = "quadrature"
    lambdas: Optional[tuple] = None

    def __post_init__(self):
        if not 0 <= self.j <= self.dim:
            raise IndexOutOfRange(f"j={self.j} outside 0..{self.dim}")
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}")
        if self.route not in ROUTES:
            raise ValueError(f"route must be one of {ROUTES}")
        tag = getattr(self.zeta, "tag", None)
        if tag is not None and tuple(tag) != (self.j, self.dim):
            raise ClassViolation(
                f"weight is tagged for (j, n) = {tuple(tag)}, not "
                f"({self.j}, {self.dim})")


def _constant_value(spec):
    """Degree 0 (primal or dual): ``omega_n int r^(n-1) zeta(r) dr``."""
    return omega(spec.dim) * moment(spec.zeta, spec.dim - 1)


def valuate(spec, f):
    """Evaluate along ``spec.route``."""
    if f.dim != spec.dim:
        raise DimensionMismatch("function and valuation dimensions differ")
    if spec.route == "quadrature":
        return valuate_smooth(spec, f)
    if spec.route == "moreau":
        if spec.side != "primal":
            raise UnsupportedVariant("the Moreau route is a primal construction")
        return valuate_moreau(spec, f).value
    return _closed_form(spec, f)


def _closed_form(spec, f):
    n, j = spec.dim, spec.j
    if j == 0:
        return _constant_value(spec)
    if spec.side == "primal" and isinstance(f, RadialConeU):
        return f.radius ** j * valuate_cone(spec, f.t)
    if spec.side == "dual" and isinstance(f, RadialConeV):
        return f.scale ** j * valuate_cone(spec, f.t)
    if spec.side == "dual":
        return phi_measure(f, j).integrate(spec.zeta)
    if j == n and isinstance(f, (IndicatorLinear, PiecewiseAffine)):
        return _primal_top_degree(spec, f)
    raise UnsupportedVariant(
        f"no closed form for {type(f).__name__} on the {spec.side} side")


# ------------------------------------------------------------- quadrature

def valuate_smooth(spec, f, resolution=64):
    """Direct quadrature of the defining integral.

    Primal side: polar coordinates about the minimiser; along every ray the
    integrand vanishes beyond the radius where ``|grad u|`` reaches the
    support of ``zeta`` (exact for quadratics, bisection otherwise) and the
    innermost panels are graded geometrically so that singular weights near
    0 are resolved.  Dual side: the Hessian measure of ``v`` integrated
    in polar coordinates about the origin.
    """
    if f.dim != spec.dim:
        raise DimensionMismatch("function and valuation dimensions differ")
    if spec.j == 0:
        return _constant_value(spec)
    if spec.side == "dual":
        return phi_measure(f, spec.j).integrate(spec.zeta, resolution)
    if isinstance(f, Quadratic):
        return _primal_quadratic(spec, f, resolution)
    if isinstance(f, RadialProfile):
        return _primal_radial(spec, f)
    if isinstance(f, Grid):
        return _primal_grid(spec, f)
    if isinstance(f, PiecewiseQuadratic1D):
        return _primal_pq1d(spec, f)
    if isinstance(f, (IndicatorLinear, PiecewiseAffine)) and spec.j == spec.dim:
        return _primal_top_degree(spec, f)
    if hasattr(f, "base"):
        return _primal_rays(spec, f, resolution)
    raise UnsupportedVariant(
        f"primal quadrature is not available for {type(f).__name__}")


def _primal_quadratic(spec, f, resolution, rtol=1e-10, max_resolution=1024):
    """Polar quadrature about the minimiser.

    Along direction ``d`` only ``|Q d|`` matters, but it varies strongly
    over the sphere when ``Q`` is ill-conditioned, so the angular rule is
    doubled until two successive rules agree to ``rtol``.
    """
    n, j, zeta = spec.dim, spec.j, spec.zeta
    if np.linalg.eigvalsh(f.Q).min() <= 1e-12 * max(1.0, np.abs(f.Q).max()):
        raise SingularHessian("primal route needs a positive definite Hessian")
    # |grad u(x0 + r d)| = r |Q d|: knots of zeta map to radii knot / |Q d|
    unit = radial_edges(zeta.knots(), zeta.support)
    s, ws = panel_rule(unit, 10)
    radial = float(np.sum(zeta(s) * s ** (n - 1) * ws))
    scale = principal_minor_sum(f.Q, n - j) * radial

    def sphere_sum(res):
        dirs, wd = sphere_rule(n, res)
        speed = np.linalg.norm(dirs @ f.Q, axis=-1)
        return float(np.sum(wd * speed ** -float(n)))

    prev = sphere_sum(resolution)
    if n == 1:
        return float(scale * prev)
    res = resolution
    while res < max_resolution:
        res *= 2
        cur = sphere_sum(res)
        if abs(cur - prev) <= rtol * abs(cur):
            prev = cur
            break
        prev = cur
    return float(scale * prev)


def _invert_increasing(func, targets, hi):
    """Vectorised bisection for ``func(r) = target`` on ``[0, hi]``."""
    targets = np.asarray(targets, dtype=float)
    lo = np.zeros_like(targets)
    top = np.full_like(targets, hi)
    for _ in range(100):
        mid = 0.5 * (lo + top)
        below = func(mid) < targets
        lo = np.where(below, mid, lo)
        top = np.where(below, top, mid)
    return 0.5 * (lo + top)


def _primal_radial(spec, f):
    n, j, zeta = spec.dim, spec.j, spec.zeta
    big = f.radius
    if not np.isfinite(big):
        big = 1.0
        while float(f.dphi(np.array(big))) < zeta.support:
            big *= 2.0
            if big > 1e9:
                raise UnsupportedVariant(
                    "gradient never leaves the support of the weight")
        top = float(_invert_increasing(f.dphi, zeta.support, big))
    elif float(f.dphi(np.array(big))) > zeta.support:
        top = float(_invert_increasing(f.dphi, zeta.support, big))
    else:
        top = big
    knots = zeta.knots()
    inner = _invert_increasing(f.dphi, knots, top) if knots.size else []
    breaks = np.concatenate([np.asarray(inner, dtype=float),
                             np.asarray(f.kinks, dtype=float)])
    edges = radial_edges(breaks, top)
    r, wr = panel_rule(edges, 10)
    k = n - j
    with np.errstate(invalid="ignore", divide="ignore"):
        tang = np.where(r > 0, f.dphi(r) / r, f.d2phi(np.zeros_like(r)))
    dens = binom(n - 1, k) * tang ** k
    if k >= 1:
        dens = dens + binom(n - 1, k - 1) * f.d2phi(r) * tang ** (k - 1)
    val = zeta(np.abs(f.dphi(r))) * dens * r ** (n - 1) * wr
    return omega(n) * float(np.sum(val))


def _primal_rays(spec, f, resolution, panels=48):
    """Generic polar quadrature about the minimiser (bisection for radii)."""
    n, j, zeta = spec.dim, spec.j, spec.zeta
    x0 = np.asarray(f.minimizer(), dtype=float)
    dirs, wd = sphere_rule(n, resolution)
    grad_norm = lambda r: np.linalg.norm(
        f.gradient(x0 + r[:, None] * dirs), axis=-1)
    hi = np.ones(len(dirs))
    for _ in range(60):
        short = grad_norm(hi) < zeta.support
        if not short.any():
            break
        hi = np.where(short, 2 * hi, hi)
    lo = np.zeros(len(dirs))
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        below = grad_norm(mid) < zeta.support
        lo, hi = np.where(below, mid, lo), np.where(below, hi, mid)
    top = hi
    unit = np.concatenate([graded_edges(1.0 / panels)[:-1],
                           np.linspace(1.0 / panels, 1.0, panels)])
    r, wr = panel_rule(top[:, None] * unit[None, :], 8)
    pts = x0 + r[..., None] * dirs[:, None, :]
    g = np.linalg.norm(f.gradient(pts), axis=-1)
    h = principal_minor_sum(f.hessian(pts), n - j)
    val = zeta(g) * h * r ** (n - 1) * wr
    return float(np.sum(val.sum(1) * wd))


def _primal_grid(spec, f):
    mask, grad, hess = f.node_derivatives()
    g = np.linalg.norm(grad[mask], axis=-1)
    h = principal_minor_sum(hess[mask], spec.dim - spec.j)
    return float(np.sum(spec.zeta(g) * h) * np.prod(f.spacing))


def _primal_pq1d(spec, f):
    """``int zeta(|u'(x)|) dx`` piece by piece (degree 1 in dimension 1)."""
    zeta, big = spec.zeta, spec.zeta.support
    levels = np.concatenate([[0.0], zeta.knots(), [big]])
    total = 0.0
    edges = f.edges
    for (a, b, _), lo, hi in zip(f.coeffs, edges[:-1], edges[1:]):
        if a == 0.0:
            if abs(b) >= big:
                continue
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise UnsupportedVariant("weight does not decay on an "
                                         "unbounded affine piece")
            total += (hi - lo) * float(zeta(abs(b)))
            continue
        # slope a x + b crosses the levels +-s at x = (+-s - b) / a
        xs = np.concatenate([(levels - b) / a, (-levels - b) / a])
        left, right = sorted([(-big - b) / a, (big - b) / a])
        lo, hi = max(lo, left), min(hi, right)
        if lo >= hi:
            continue
        pts = np.unique(np.concatenate([[lo, hi], xs[(xs > lo) & (xs < hi)]]))
        x, w = panel_rule(pts, 10)
        total += float(np.sum(zeta(np.abs(a * x + b)) * w))
    return total


def _primal_top_degree(spec, f):
    """Degree ``n``: ``int_dom zeta(|grad u|) dx`` for polyhedral functions."""
    zeta = spec.zeta
    if isinstance(f, IndicatorLinear):
        return float(zeta(np.linalg.norm(f.slope))) * f.polytope.volume
    return float(sum(float(zeta(np.linalg.norm(p.slope))) * p.polytope.volume
                     for p in f.pieces))


# ------------------------------------------------------------- cone family

def valuate_cone(spec, t):
    """Closed form ``kappa_n C(n, j) rho(t)`` on the cone pair.

    The same value is taken by the primal valuation at ``t|x| + I_B`` and
    by the dual valuation at ``max(0, |x| - t)``.
    """
    n, j = spec.dim, spec.j
    if not 1 <= j <= n - 1:
        raise IndexOutOfRange(f"need 1 <= j <= n-1, got j={j}")
    if t < 0:
        raise ValueError("t must be non-negative")
    certify_class(spec.zeta, j, n)
    return kappa(n) * binom(n, j) * rho(spec.zeta, j, n, t)


def valuate_cone_measure(spec, t):
    """Cone value through the Hessian measures instead of the closed form."""
    n, j = spec.dim, spec.j
    if spec.side == "dual":
        return phi_measure(RadialConeV(n, t), j).integrate(spec.zeta)
    return psi_via_conjugate(RadialConeU(n, t), j, spec.zeta)


# -------------------------------------------------------------- Moreau route

@dataclass(frozen=True)
class MoreauResult:
    value: float
    components: np.ndarray
    condition: float
    lambdas: tuple
    envelope_values: np.ndarray = field(repr=False)


def moreau_expansion(spec, u, lam, components):
    """``sum_i C(n-i, j-i) lam^(j-i) Z_i(u)`` for given lower-degree values."""
    n, j = spec.dim, spec.j
    return float(sum(binom(n - i, j - i) * lam ** (j - i) * components[i]
                     for i in range(j + 1)))


def valuate_moreau(spec, u, lambdas=None):
    """Degree-``j`` value recovered from Moreau envelopes.

    For each ``lam`` the envelope value
    ``Z_j(M_lam u) = sum_i C(n-i, j-i) lam^(j-i) Z_i(u)`` is computed by
    quadrature; the ``(j+1) x (j+1)`` system in the unknowns
    ``Z_0(u), ..., Z_j(u)`` is solved with partial pivoting.

    Raises
    ------
    IllConditionedVandermonde
    """
    n, j = spec.dim, spec.j
    if lambdas is None:
        lambdas = spec.lambdas or tuple(range(1, j + 2))
    lambdas = tuple(float(x) for x in lambdas)
    smooth = replace(spec, side="primal", route="quadrature")
    vals = np.array([valuate_smooth(smooth, moreau_yosida(u, lam))
                     for lam in lambdas])
    mat = np.array([[binom(n - i, j - i) * lam ** (j - i)
                     for i in range(j + 1)] for lam in lambdas])
    if len(lambdas) == j + 1:
        comps, cond = solve_vandermonde(mat, vals)
    else:
        cond = float(np.linalg.cond(mat))
        solve_vandermonde(mat.T @ mat, mat.T @ vals)
        comps = np.linalg.lstsq(mat, vals, rcond=None)[0]
    return MoreauResult(float(comps[j]), comps, cond, lambdas, vals)


def homogeneous_components(valuation, u, n, lambdas=None):
    """Split a valuation into epi-homogeneous parts.

    Solves ``Z(lam o u) = sum_i lam^i Z_i(u)`` at ``lam = 1, ..., n+1``.

    Returns
    -------
    components : ndarray, shape (n+1,)
    condition : float
    """
    lambdas = tuple(range(1, n + 2)) if lambdas is None else tuple(lambdas)
    vals = np.array([valuation(epi_multiply(u, lam)) for lam in lambdas])
    mat = np.array([[float(lam) ** i for i in range(n + 1)]
                    for lam in lambdas])
    return solve_vandermonde(mat, vals)


# ------------------------------------------------------- property checkers

def valuation_property_check(spec, u, v, check_convexity=True):
    """``|Z(u) + Z(v) - Z(u v v) - Z(u ^ v)|``.

    With ``check_convexity=False`` the pointwise max/min are formed without
    requiring the minimum to be convex and the integral formula is applied
    to them as is.
    """
    if check_convexity:
        hi, lo = pointwise_max(u, v), pointwise_min(u, v)
    else:
        hi, lo = lattice_formal(u, v, True), lattice_formal(u, v, False)
    z = lambda f: valuate(spec, f)
    return abs(z(u) + z(v) - z(hi) - z(lo))


def invariance_check(spec, u, shift=None, alpha=0.0, rotation=None):
    """Largest change of the valuation under a rigid motion plus constant.

    Primal side: ``u(x - shift) + alpha`` and ``u(R^T x)``.  Dual side
    (dual translation invariance): ``v(x) + <shift, x> + alpha`` and
    ``v(R^T x)``.
    """
    n = spec.dim
    base = valuate(spec, u)
    worst = 0.0
    if shift is not None or alpha:
        shift = np.zeros(n) if shift is None else np.asarray(shift, float)
        if spec.side == "primal":
            moved = translate(u, shift, alpha)
        elif isinstance(u, Quadratic):
            moved = Quadratic(u.Q, u.b + shift, u.c + alpha)
        else:
            raise UnsupportedVariant("dual translation needs a quadratic")
        worst = max(worst, abs(valuate(spec, moved) - base))
    if rotation is not None:
        worst = max(worst, abs(valuate(spec, rotate(u, rotation)) - base))
    return worst


# -------------------------------------------------------- integration by parts

@dataclass(frozen=True)
class ReillyResult:
    residual: float
    lhs: float
    bulk: float
    upper_boundary: float
    lower_boundary: float
    bound: float
    alpha: float


def reilly_alpha(n, i):
    """Constants of the level-set identities, computed on balls.

    ``alpha_bulk`` turns ``int tau_{n-i}`` over a shell into a difference of
    ``V_i``; ``alpha_boundary`` turns ``int tau_{n-i-1}`` over a level
    sphere into ``V_i``.  Returns ``(alpha_bulk, alpha_boundary)``.
    """
    common = omega(n) * kappa(n - i) / (binom(n, i) * kappa(n))
    return common * binom(n - 1, i - 1) / i, common * binom(n - 1, i)


def reilly_identity_check(zeta, j, u, t1, t2, nodes=12):
    """Three-term integration-by-parts identity on a shell of a radial ``u``.

    Left side ``int_{t1 < u <= t2} zeta(|grad u|) [D^2 u]_{n-j}``; right
    side the bulk term with ``rho`` and ``tau_{n-j}`` minus/plus the level
    sphere terms with ``eta`` and ``tau_{n-j-1}``.  Also returns the
    a-priori bound ``alpha V_j({u <= t2}) (max |rho| + max |eta|)`` over
    ``[0, Lip(u, t2)]``.
    """
    prof = as_radial_profile(u)
    n = prof.dim
    if not 1 <= j <= n - 1:
        raise IndexOutOfRange(f"need 1 <= j <= n-1, got j={j}")
    if t2 < t1:
        raise ValueError("need t1 <= t2")
    k = n - j
    r1, r2 = prof.radius_of_level(t1), prof.radius_of_level(t2)
    alpha = max(reilly_alpha(n, j)[0], 2 * reilly_alpha(n, j)[1])
    lip = lipschitz_on_sublevel(prof, t2)
    s = np.linspace(0.0, lip, 401)
    bound = alpha * ball_intrinsic_volume(n, j, r2) * (
        np.max(np.abs(rho(zeta, j, n, s))) + np.max(np.abs(eta(zeta, j, n, s))))
    if r2 <= r1:
        return ReillyResult(0.0, 0.0, 0.0, 0.0, 0.0, float(bound), alpha)
    knots = np.append(zeta.knots(), zeta.support)
    inner = _invert_increasing(prof.dphi, knots, r2)
    pts = [r1] + [x for x in np.atleast_1d(inner) if r1 < x < r2] + [r2]
    pts += [x for x in prof.kinks if r1 < x < r2]
    edges = np.unique(np.concatenate(
        [np.linspace(a, b, 5) for a, b in zip(sorted(pts)[:-1],
                                              sorted(pts)[1:])]))
    r, w = panel_rule(edges, nodes)
    grad = prof.dphi(r)
    tang = grad / r
    hess_k = binom(n - 1, k) * tang ** k + binom(n - 1, k - 1) * prof.d2phi(
        r) * tang ** (k - 1)
    shell = omega(n) * r ** (n - 1) * w
    lhs = float(np.sum(zeta(grad) * hess_k * shell))
    tau_k = np.array([level_set_curvature(prof, [x] + [0.0] * (n - 1), k)
                      for x in r])
    bulk = float(np.sum(rho(zeta, j, n, grad) * tau_k * shell))

    def boundary(rk):
        tau = level_set_curvature(prof, [rk] + [0.0] * (n - 1), k - 1)
        g = float(prof.dphi(np.array(rk)))
        return float(eta(zeta, j, n, g)) * tau * omega(n) * rk ** (n - 1)

    upper, lower = boundary(r2), boundary(r1)
    residual = abs(lhs - (bulk - upper + lower))
    return ReillyResult(residual, lhs, bulk, upper, lower, float(bound), alpha)
