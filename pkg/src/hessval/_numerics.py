"""Shared numerical helpers: ball constants, quadrature rules, seeded RNG."""

import math
import os
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import IllConditionedVandermonde

DEFAULT_SEED = 42


def kappa(n):
    """Volume of the unit ball in dimension ``n``."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def omega(n):
    """Surface area of the unit sphere in dimension ``n``."""
    return n * kappa(n)


def binom(n, k):
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def resolve_seed(seed=None):
    """Return ``seed`` if given, else the HESSVAL_SEED override, else 42."""
    if seed is not None:
        return int(seed)
    env = os.environ.get("HESSVAL_SEED")
    return int(env) if env else DEFAULT_SEED


def rng(seed=None, shard=0):
    """Counter-based generator keyed by ``(seed, shard)``."""
    ss = np.random.SeedSequence([resolve_seed(seed), int(shard)])
    return np.random.Generator(np.random.Philox(ss))


@lru_cache(maxsize=None)
def _leggauss(m):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(edges, m=8):
    """Composite Gauss-Legendre rule on consecutive panels.

    Parameters
    ----------
    edges : array_like, shape (..., P+1)
        Non-decreasing panel boundaries; leading axes are batch axes.
    m : int
        Nodes per panel.

    Returns
    -------
    nodes, weights : ndarray, shape (..., P*m)
    """
    edges = np.asarray(edges, dtype=float)
    x, w = _leggauss(m)
    a = edges[..., :-1, None]
    b = edges[..., 1:, None]
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * x
    weights = half * w
    shape = edges.shape[:-1] + (-1,)
    return nodes.reshape(shape), weights.reshape(shape)


def graded_edges(r, levels=14, ratio=0.25):
    """Panel edges on ``[0, r]`` refined geometrically towards 0."""
    r = np.asarray(r, dtype=float)
    powers = ratio ** np.arange(levels, -1, -1)
    return np.concatenate(
        [np.zeros(r.shape + (1,)), r[..., None] * powers], axis=-1)


def radial_edges(breaks, upper, lower=0.0, subdivide=4, levels=14):
    """Panel edges on ``[lower, upper]`` aligned with ``breaks``.

    The first panel is graded towards ``lower`` when ``lower == 0`` so that
    integrable power singularities at the origin are resolved.
    """
    pts = [b for b in breaks if lower < b < upper]
    knots = np.array([lower] + sorted(pts) + [upper], dtype=float)
    out = []
    for i, (a, b) in enumerate(zip(knots[:-1], knots[1:])):
        if i == 0 and lower == 0.0:
            out.append(graded_edges(b, levels)[:-1])
            continue
        out.append(np.linspace(a, b, subdivide + 1)[:-1])
    out.append([upper])
    return np.concatenate(out)


@lru_cache(maxsize=None)
def sphere_rule(n, resolution=64):
    """Directions on the unit sphere and weights summing to ``omega(n)``.

    n=1 uses the two points +-1, n=2 equispaced angles (trapezoid rule),
    n=3 a Gauss-Legendre rule in the polar cosine times equispaced azimuths.
    """
    if n == 1:
        dirs = np.array([[1.0], [-1.0]])
        w = np.ones(2)
    elif n == 2:
        m = 4 * resolution
        th = 2 * np.pi * (np.arange(m) + 0.5) / m
        dirs = np.stack([np.cos(th), np.sin(th)], axis=-1)
        w = np.full(m, 2 * np.pi / m)
    elif n == 3:
        z, wz = _leggauss(resolution // 2)
        m = resolution
        ph = 2 * np.pi * (np.arange(m) + 0.5) / m
        rho = np.sqrt(1 - z**2)
        dirs = np.stack([
            np.outer(rho, np.cos(ph)).ravel(),
            np.outer(rho, np.sin(ph)).ravel(),
            np.repeat(z, m)], axis=-1)
        w = np.repeat(wz, m) * (2 * np.pi / m)
    else:
        raise ValueError("sphere quadrature is available for n <= 3")
    dirs.setflags(write=False)
    w.setflags(write=False)
    return dirs, w


def box_rule(box, m=8, panels=1):
    """Tensor-product Gauss-Legendre rule on an axis-aligned box."""
    box = np.asarray(box, dtype=float)
    grids, weights = [], []
    for lo, hi in box:
        x, w = panel_rule(np.linspace(lo, hi, panels + 1), m)
        grids.append(x)
        weights.append(w)
    mesh = np.meshgrid(*grids, indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=-1)
    wmesh = np.meshgrid(*weights, indexing="ij")
    w = np.prod(np.stack([g.ravel() for g in wmesh], axis=-1), axis=-1)
    return pts, w


def principal_minor_sum(a, k):
    """Sum of the ``k x k`` principal minors of a batch of square matrices."""
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    if k == 0:
        return np.ones(a.shape[:-2])
    total = np.zeros(a.shape[:-2])
    for idx in combinations(range(n), k):
        sub = a[..., idx, :][..., :, idx]
        total = total + np.linalg.det(sub)
    return total


def solve_vandermonde(matrix, rhs, max_condition=1e12):
    """Solve with partial pivoting and return ``(solution, condition)``."""
    matrix = np.asarray(matrix, dtype=float)
    cond = float(np.linalg.cond(matrix))
    if not np.isfinite(cond) or cond > max_condition:
        raise IllConditionedVandermonde(
            f"Vandermonde system condition number {cond:.3g}", cond)
    return np.linalg.solve(matrix, np.asarray(rhs, dtype=float)), cond


def ball_intrinsic_volume(n, i, radius=1.0):
    """``V_i`` of the ball of the given radius in ``R^n``."""
    if not 0 <= i <= n:
        return 0.0
    return binom(n, i) * kappa(n) / kappa(n - i) * radius ** i
