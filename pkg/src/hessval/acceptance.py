"""Acceptance battery shared by ``hessval selfcheck`` and the test-suite.

Every criterion is a function returning a :class:`CriterionResult`; each
row of the result is one checked quantity with its value, the tolerance
and whether it passed.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from ._numerics import binom, kappa, rng
from .convexfun import (AffinePiece, IndicatorLinear, KinkSum,
                        PiecewiseAffine, PiecewiseQuadratic1D, Quadratic,
                        RadialConeU, RadialConeV, pointwise_max)
from .geometry import (Body, OrthogonalSimplex, canonical_dissection,
                       dissection_volume_mc, intrinsic_volumes)
from .hessmeasure import (Ball, JointRegion, direct_sum, phi_measure,
                          product_decompose, theta_coefficients)
from .polytope import Polytope
from .transforms import conjugate, moreau_yosida
from .valuations import (ValuationSpec, invariance_check, moreau_expansion,
                         reilly_identity_check, valuate, valuate_moreau,
                         valuate_smooth, valuation_property_check)
from .zetaspace import (ZetaProfile, abel_forward, abel_inverse, bump,
                        cone_values, gaussian, hat, power_bump, rho,
                        recover_zeta_from_cone_values)

__all__ = ["CriterionResult", "CRITERIA", "run_criteria", "criterion"]


@dataclass
class CriterionResult:
    number: int
    title: str
    rows: list = field(default_factory=list)
    seconds: float = 0.0
    error: str = ""

    @property
    def passed(self):
        return not self.error and bool(self.rows) and all(
            r[3] for r in self.rows)

    def check(self, label, value, tol):
        value = float(value)
        self.rows.append((label, value, tol, bool(value <= tol)))

    def worst(self):
        """Row with the largest value/tolerance ratio."""
        def ratio(r):
            if r[2]:
                return r[1] / r[2]
            return 0.0 if r[1] <= 0 else np.inf
        return max(self.rows, key=ratio)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        if self.error:
            detail = self.error
        else:
            label, value, tol, _ = self.worst()
            detail = f"worst {label}: {value:.3e} (tol {tol:.0e})"
        return (f"[{status}] {self.number}. {self.title} ({len(self.rows)} "
                f"checks, {self.seconds:.1f}s) {detail}")


def _rel(a, b, floor=1e-14):
    return abs(a - b) / max(abs(b), floor)


# --------------------------------------------------------------- criteria

def cone_closed_form():
    """Cone pair via Hessian measures against ``kappa_n C(n,j) rho(t)``."""
    res = CriterionResult(1, "cone closed form via measures")
    zeta = hat()
    for n in (2, 3):
        for j in range(1, n):
            for t in (0.0, 0.25, 0.5, 0.9, 1.5):
                exact = kappa(n) * binom(n, j) * float(rho(zeta, j, n, t))
                dual = phi_measure(RadialConeV(n, t), j).integrate(zeta)
                primal = valuate(ValuationSpec(j, zeta, n, "dual",
                                               "closed_form"),
                                 conjugate(RadialConeU(n, t)))
                tol = 1e-6 * abs(exact) + 1e-14
                res.check(f"n={n} j={j} t={t} dual", abs(dual - exact), tol)
                res.check(f"n={n} j={j} t={t} via u*", abs(primal - exact),
                          tol)
    return res


def _random_quadratic(n, gen):
    a = gen.normal(size=(n, n))
    q = a @ a.T + 0.5 * np.eye(n)
    return Quadratic(q, gen.normal(scale=0.3, size=n), gen.normal())


def substitution_duality():
    """Primal quadrature on ``u`` against dual quadrature on ``u*``."""
    res = CriterionResult(2, "primal/dual substitution")
    gen = rng(None, 2)
    quads = [_random_quadratic(n, gen) for n in (2, 2, 2, 3, 3, 3)]
    profiles = (hat(1.5), bump(2.0), gaussian(4.0))
    for qi, u in enumerate(quads):
        n = u.dim
        v = conjugate(u)
        for zeta in profiles:
            for j in range(1, n + 1):
                p = valuate_smooth(ValuationSpec(j, zeta, n, "primal"), u)
                d = valuate_smooth(ValuationSpec(j, zeta, n, "dual"), v)
                res.check(f"q{qi} n={n} j={j} {zeta.name}", _rel(p, d), 1e-4)
    return res


def moreau_vandermonde():
    """Moreau envelope expansion and recovery of the degree-j value."""
    res = CriterionResult(3, "Moreau envelope expansion")
    gen = rng(None, 3)
    zeta = bump(1.5)
    for n in (2, 3):
        u = _random_quadratic(n, gen)
        comps = [valuate_smooth(ValuationSpec(i, zeta, n), u)
                 for i in range(n + 1)]
        for j in range(1, n + 1):
            spec = ValuationSpec(j, zeta, n)
            for lam in (1.0, 2.0, 3.0):
                env = valuate_smooth(spec, moreau_yosida(u, lam))
                expand = moreau_expansion(spec, u, lam, comps)
                res.check(f"n={n} j={j} lam={lam:g} expansion",
                          _rel(env, expand), 1e-6)
            rec = valuate_moreau(spec, u).value
            res.check(f"n={n} j={j} recovered", _rel(rec, comps[j]), 1e-4)
    return res


RECOVERY_GRID_TOP = 4000


def recovery_grid(support):
    return np.unique(np.concatenate([
        [0.0], np.geomspace(1e-5, 0.05, 400),
        np.linspace(0.05, support, RECOVERY_GRID_TOP)]))


def recovery_round_trip():
    """Synthesise cone values from a weight and solve for it again."""
    res = CriterionResult(4, "weight recovery from cone values")
    for n in (2, 3):
        for zeta in (hat(1.0), bump(1.5), power_bump(-0.5, 1.0)):
            t = recovery_grid(zeta.support)
            z = cone_values(zeta, n, t)
            rec = recover_zeta_from_cone_values(
                ZetaProfile.from_samples(t, z, zeta.support), n)
            s = rec.s[(rec.s >= 0.05) & (rec.s <= zeta.support)]
            gap = np.max(np.abs(rec(s) - zeta(s)))
            res.check(f"n={n} {zeta.name} sup-gap", gap, 1e-3)
            res.check(f"n={n} {zeta.name} limit", rec.meta["limit_gap"], 1e-3)
    return res


def abel_round_trip():
    """Inverse after forward on a C^1 bump; Gaussian forward closed form."""
    res = CriterionResult(5, "Abel transform pair")
    zeta = bump(1.0)
    grid = np.linspace(0.0, 1.0, 2001)
    xi = ZetaProfile.from_samples(grid, abel_forward(zeta, grid), 1.0)
    s = np.linspace(0.0, 0.99, 100)
    res.check("bump round trip sup", np.max(np.abs(abel_inverse(xi, s)
                                                  - zeta(s))), 1e-3)
    g = gaussian(6.0)
    for t in (0.0, 0.5, 1.0, 2.0):
        exact = np.sqrt(np.pi) / 2 * np.exp(-t * t)
        res.check(f"gaussian t={t}", abs(abel_forward(g, t) - exact), 1e-6)
    return res


def hessian_measure_structure(samples=10**6, seed=42):
    """Parallel-set polynomial, product decomposition and kink atoms."""
    res = CriterionResult(6, "Hessian measure structure")
    c = 0.7
    for n in (2, 3):
        fit = theta_coefficients(Quadratic(c * np.eye(n)),
                                 JointRegion(Ball(1.0)), samples=samples,
                                 seed=seed)
        for j in range(n + 1):
            exact = kappa(n) * binom(n, j) * c ** j
            z = abs(fit.coefficients[j] - exact) / fit.stderr[j]
            res.check(f"n={n} coefficient s^{j} (sigmas)", z, 3.0)
    gen = rng(None, 6)
    for k, m in ((1, 1), (1, 2), (2, 1)):
        ve, vf = _random_quadratic(k, gen), _random_quadratic(m, gen)
        n = k + m
        axes = [n - 1 - a for a in range(k)] if k == 1 else None
        box = np.column_stack([-0.5 - 0.3 * np.arange(n), 0.8 + 0.2 *
                               np.arange(n)])
        whole = direct_sum(ve, vf, axes)
        for l in range(n + 1):
            direct = phi_measure(whole, l).mass(box)
            split = product_decompose(ve, vf, l, box, axes)
            res.check(f"k={k} m={m} l={l} product", _rel(split, direct), 1e-4)
    zeta = hat(2.0)
    for n in (2, 3):
        center = 0.2 + 0.1 * np.arange(n)
        weights = 1.0 + 0.5 * np.arange(n)
        v = KinkSum(center, weights)
        atom = phi_measure(v, n)
        exact = np.prod(weights) * float(zeta(np.linalg.norm(center)))
        res.check(f"n={n} atom integral", abs(atom.integrate(zeta) - exact),
                  1e-15)
        inside = np.column_stack([center - 0.5, center + 0.25])
        res.check(f"n={n} atom mass inside",
                  abs(atom.mass(inside) - np.prod(weights)), 1e-15)
        res.check(f"n={n} atom mass outside",
                  abs(atom.mass(inside + 1.0)), 1e-15)
        res.check(f"n={n} unit atom", abs(
            phi_measure(KinkSum(center), n).mass(inside) - 1.0), 1e-15)
    return res


def _pq(breaks, coeffs):
    return PiecewiseQuadratic1D(np.asarray(breaks, float),
                                np.asarray(coeffs, float))


def valuation_battery():
    """Valuation identity, additivity over dissections, invariance."""
    res = CriterionResult(7, "valuation and invariance battery")
    zeta = bump(1.5)
    # 1-D pairs: the crossing pair x^2/2, (x-0.3)^2/2 has a non-convex
    # minimum and is checked formally; the others stay convex
    sq = Quadratic([[1.0]])
    pairs = {
        "crossing": (sq, Quadratic([[1.0]], [-0.3], 0.045), False),
        "tangent": (_pq([0.0], [[1, 0, 0], [2, 0, 0]]),
                    _pq([0.0], [[2, 0, 0], [1, 0, 0]]), True),
        "kinked": (pointwise_max(sq, Quadratic([[0.0]], [1.0], -0.3)),
                   pointwise_max(sq, Quadratic([[0.0]], [-1.0], -0.3)), True),
    }
    for name, (u, v, convex) in pairs.items():
        for side in ("primal", "dual"):
            for j in (0, 1):
                spec = ValuationSpec(j, zeta, 1, side)
                r = valuation_property_check(spec, u, v, convex)
                res.check(f"1-D {name} {side} j={j}", r, 1e-4)
    # degree-n additivity over the canonical dissection of a simplex
    for n in (2, 3):
        simplex = OrthogonalSimplex(np.zeros(n), np.diag(1.0 + 0.5 *
                                                         np.arange(n)))
        slope = 0.3 * np.ones(n)
        spec = ValuationSpec(n, zeta, n)
        whole = valuate(spec, IndicatorLinear(simplex.polytope(), slope))
        for t in (0.25, 0.5, 0.75):
            parts = sum(valuate(spec, IndicatorLinear(p, slope))
                        for p in canonical_dissection(simplex, t))
            res.check(f"n={n} dissection t={t}", abs(whole - parts), 1e-4)
    # two affine pieces glued along x_1 = 1
    left = AffinePiece([0.2, 0.1], 0.0, Polytope.box([0, 0], [1, 1]))
    right = AffinePiece([0.5, 0.1], -0.3, Polytope.box([1, 0], [2, 1]))
    spec = ValuationSpec(2, zeta, 2)
    r = valuation_property_check(spec, PiecewiseAffine((left,)),
                                 PiecewiseAffine((right,)))
    res.check("n=2 two-piece affine", r, 1e-4)
    glued = valuate(spec, PiecewiseAffine((left, right)))
    split = sum(valuate(spec, PiecewiseAffine((p,))) for p in (left, right))
    res.check("n=2 two-piece additivity", abs(glued - split), 1e-4)
    # invariance on anisotropic quadratics
    th = np.pi / 6
    rot2 = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    rot3 = np.eye(3)
    rot3[:2, :2] = rot2
    cases = ((Quadratic(np.diag([1.0, 4.0])), rot2, [0.4, -0.2]),
             (Quadratic(np.diag([0.5, 1.0, 3.0])), rot3, [0.4, -0.2, 0.1]))
    for u, rot, shift in cases:
        n = u.dim
        for j in range(1, n + 1):
            for side in ("primal", "dual"):
                spec = ValuationSpec(j, zeta, n, side)
                base = abs(valuate(spec, u))
                r = invariance_check(spec, u, shift, 3.0, rot)
                res.check(f"n={n} j={j} {side} invariance",
                          r / max(base, 1e-14), 1e-4)
    return res


def reilly_identity():
    """Level-set integration by parts on ``|x|^2/2``."""
    res = CriterionResult(8, "level-set integration by parts")
    u = Quadratic(np.eye(2))
    r = reilly_identity_check(hat(), 1, u, 0.5, 2.0)
    res.check("n=2 j=1 hat (0.5, 2)", r.residual, 1e-5)
    r = reilly_identity_check(hat(), 1, u, 0.05, 0.4)
    res.check("n=2 j=1 hat (0.05, 0.4)", r.residual, 1e-5)
    res.check("n=2 bound", max(abs(r.lhs) - r.bound, 0.0), 1e-12)
    r = reilly_identity_check(bump(1.5), 1, Quadratic(np.eye(3)), 0.1, 0.9)
    res.check("n=3 j=1 bump (0.1, 0.9)", r.residual, 1e-5)
    return res


def geometry_checks(samples=10**6, seed=42):
    """Steiner fits and canonical dissection volumes."""
    res = CriterionResult(9, "intrinsic volumes and dissections")
    for name, body, exact in (
            ("[0,1]^2", Body.box([0, 0], [1, 1]), [1.0, 2.0, 1.0]),
            ("B^2", Body.ball([0, 0], 1.0), [1.0, np.pi, np.pi])):
        v = intrinsic_volumes(body)
        res.check(f"{name} intrinsic volumes", np.max(np.abs(v - exact)),
                  1e-3)
    simplex = OrthogonalSimplex.standard(2)
    for t in (0.25, 0.5, 0.75):
        total = sum(p.volume for p in canonical_dissection(simplex, t))
        res.check(f"n=2 t={t} piece sum", abs(total - simplex.volume), 1e-6)
    simplex = OrthogonalSimplex.standard(3)
    for t in (0.25, 0.5, 0.75):
        est, err, overlap = dissection_volume_mc(simplex, t, samples, seed)
        res.check(f"n=3 t={t} MC sum (sigmas)",
                  abs(est - simplex.volume) / err, 3.0)
        res.check(f"n=3 t={t} interior overlap", overlap - 1, 0)
    return res


CRITERIA = {
    1: cone_closed_form,
    2: substitution_duality,
    3: moreau_vandermonde,
    4: recovery_round_trip,
    5: abel_round_trip,
    6: hessian_measure_structure,
    7: valuation_battery,
    8: reilly_identity,
    9: geometry_checks,
}


def criterion(number):
    """Run one criterion, timing it and capturing library errors."""
    func = CRITERIA[number]
    start = time.perf_counter()
    try:
        res = func()
    except Exception as exc:  # reported as a failed criterion
        res = CriterionResult(number, func.__doc__.splitlines()[0],
                              error=f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - start
    return res


def run_criteria(numbers=None):
    return [criterion(k) for k in (numbers or sorted(CRITERIA))]
