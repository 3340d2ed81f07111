"""Weight profiles and the one-dimensional calculus built on them.

A :class:`ZetaProfile` is a continuous weight on ``(0, inf)`` with bounded
support, given by samples (piecewise-linear interpolation) or by a
vectorised callable.  The module provides the tail moments ``eta`` and
``rho``, the truncated family, the Abel transform pair, the generalised
Abel kernel, and the solver that recovers a weight from the values of a
valuation on the cone family.
"""

import math
import re
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from ._numerics import omega
from .errors import ClassViolation, IndexOutOfRange, NonSmoothXi

__all__ = [
    "ZetaProfile", "hat", "bump", "gaussian", "power_bump", "smooth_window",
    "moment", "eta", "rho", "certify_class", "truncate", "eta_r", "rho_r",
    "abel_forward", "abel_inverse", "generalized_kernel", "cone_values",
    "recover_zeta_from_cone_values", "integral_equation_residual",
    "read_profile", "write_profile", "QUAD_EPSABS", "QUAD_EPSREL",
]

QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-8
CERT_THRESHOLD = 1e-3
REFINEMENT = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True, eq=False)
class ZetaProfile:
    """Weight function with bounded support.

    Attributes
    ----------
    support : float
        ``zeta(s) = 0`` for ``s >= support``.
    s, values : ndarray or None
        Samples of a piecewise-linear profile.  Below the first abscissa the
        profile is continued by its first value, so integrals never query
        it below the sampled range.
    func : callable or None
        Closed-form handle used when no samples are given.
    breakpoints : tuple of float
        Points where a closed-form handle is not smooth; quadrature splits
        there.
    tag : (j, n) or None
        Claimed class ``Had_j^n``.
    meta : dict
        Free-form certificates attached by solvers.
    """

    support: float
    s: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    func: Optional[Callable] = None
    breakpoints: tuple = ()
    tag: Optional[tuple] = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_samples(cls, s, values, support=None, tag=None, name=""):
        s = np.asarray(s, dtype=float).ravel()
        v = np.asarray(values, dtype=float).ravel()
        if s.size != v.size or s.size < 2:
            raise ValueError("need matching abscissae and values (>= 2)")
        if np.any(np.diff(s) <= 0) or s[0] < 0:
            raise ValueError("abscissae must be non-negative and increasing")
        if support is None:
            support = float(s[-1])
        elif support > s[-1]:
            s = np.append(s, support)
            v = np.append(v, 0.0)
        elif support < s[-1]:
            keep = s < support
            vs = float(np.interp(support, s, v))
            s = np.append(s[keep], support)
            v = np.append(v[keep], vs)
        s.setflags(write=False)
        v.setflags(write=False)
        return cls(float(support), s, v, None, tuple(s[1:-1]), tag, name)

    @classmethod
    def from_function(cls, func, support, breakpoints=(), tag=None, name=""):
        return cls(float(support), None, None, func,
                   tuple(sorted(float(b) for b in breakpoints)), tag, name)

    @property
    def sampled(self):
        return self.s is not None

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.sampled:
            out = np.interp(s, self.s, self.values)
        else:
            with np.errstate(all="ignore"):
                out = np.asarray(self.func(np.where(s < self.support, s,
                                                    0.5 * self.support)),
                                 dtype=float)
            out = np.broadcast_to(out, s.shape)
        return np.where(s < self.support, out, 0.0)

    def knots(self, lower=0.0, upper=None):
        """Sorted non-smooth points strictly inside ``(lower, upper)``."""
        upper = self.support if upper is None else upper
        pts = self.s if self.sampled else np.array(self.breakpoints)
        pts = np.asarray(pts, dtype=float)
        return pts[(pts > lower) & (pts < upper)]

    def with_tag(self, j, n):
        return ZetaProfile(self.support, self.s, self.values, self.func,
                           self.breakpoints, (j, n), self.name, dict(self.meta))


# ------------------------------------------------------------ stock shapes

def hat(support=1.0):
    """``max(0, 1 - s / support)``."""
    return ZetaProfile.from_function(
        lambda s: 1.0 - s / support, support, name="hat")


def bump(support=1.0):
    """``(1 - (s/support)^2)^2`` on ``[0, support)``; C^1 at the edge."""
    return ZetaProfile.from_function(
        lambda s: (1.0 - (s / support) ** 2) ** 2, support, name="bump")


def gaussian(support=6.0):
    """``exp(-s^2)`` truncated at ``support``."""
    return ZetaProfile.from_function(lambda s: np.exp(-s * s), support,
                                     name="gaussian")


def power_bump(alpha, support=1.0):
    """``s^alpha (1 - s/support)^2``; singular at 0 when ``alpha < 0``."""
    return ZetaProfile.from_function(
        lambda s: s ** alpha * (1.0 - s / support) ** 2, support,
        name=f"power_bump({alpha})")


def _smoothstep(x):
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def smooth_window(a, b, ramp):
    """C^1 window equal to 1 on ``[a, b]`` with cubic ramps of width ``ramp``."""
    def f(s):
        return _smoothstep((s - (a - ramp)) / ramp) * \
            _smoothstep(((b + ramp) - s) / ramp)
    return ZetaProfile.from_function(f, b + ramp,
                                     (a - ramp, a, b), name="window")


# ---------------------------------------------------------------- moments

def _power_integral(m, a, b):
    """``int_a^b s^m ds`` elementwise."""
    if m == -1:
        return np.log(b / a)
    return (b ** (m + 1) - a ** (m + 1)) / (m + 1)


def _linear_moment(k, a, b, alpha, beta):
    return alpha * _power_integral(k, a, b) + beta * _power_integral(k + 1, a, b)


def _sampled_moment(prof, k, t):
    """Exact ``int_t^S s^k zeta(s) ds`` for a piecewise-linear profile."""
    s, v = np.asarray(prof.s), np.asarray(prof.values)
    beta = np.diff(v) / np.diff(s)
    alpha = v[:-1] - beta * s[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        pieces = _linear_moment(k, s[:-1], s[1:], alpha, beta)
    tail = np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape)
    flat = t.ravel()
    res = out.ravel()
    for idx, tt in enumerate(flat):
        if tt >= s[-1]:
            res[idx] = 0.0
        elif tt <= s[0]:
            head = 0.0
            if tt < s[0]:
                if tt == 0.0 and k <= -1:
                    head = math.inf if v[0] != 0 else 0.0
                else:
                    head = v[0] * _power_integral(k, tt, s[0])
            res[idx] = head + tail[0]
        else:
            i = int(np.searchsorted(s, tt, side="right")) - 1
            res[idx] = _linear_moment(k, tt, s[i + 1], alpha[i], beta[i]) \
                + tail[i + 1]
    return out


def _quad(func, a, b, points=()):
    pts = sorted(p for p in points if a < p < b)
    edges = [a] + pts + [b]
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(func, lo, hi, epsabs=QUAD_EPSABS,
                                    epsrel=QUAD_EPSREL, limit=200)
            total += val
    return total


def moment(zeta, k, t=0.0, upper=None):
    """``int_t^upper s^k zeta(s) ds`` (``upper`` defaults to the support)."""
    upper = zeta.support if upper is None else min(upper, zeta.support)
    if zeta.sampled and upper == zeta.support:
        return _sampled_moment(zeta, k, t)
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape)
    res = out.ravel()
    for idx, tt in enumerate(t.ravel()):
        if tt >= upper:
            res[idx] = 0.0
            continue
        res[idx] = _quad(lambda s: s ** k * float(zeta(s)), float(tt), upper,
                         zeta.knots(tt, upper))
    return out if out.ndim else float(out)


def _check_index(j, n):
    if not 1 <= j <= n - 1:
        raise IndexOutOfRange(f"need 1 <= j <= n-1, got j={j}, n={n}")


def eta(zeta, j, n, t):
    """``eta(t) = int_t^inf s^(n-j-1) zeta(s) ds``."""
    _check_index(j, n)
    val = moment(zeta, n - j - 1, t)
    if np.any(~np.isfinite(val)):
        raise ClassViolation("eta diverges at the origin")
    return val


def rho(zeta, j, n, t):
    """``rho(t) = t^(n-j) zeta(t) + (n-j) eta(t)``; ``rho(0) = (n-j) eta(0)``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        head = np.where(t > 0, t ** (n - j) * zeta(np.where(t > 0, t, 1.0)),
                        0.0)
    out = head + (n - j) * eta(zeta, j, n, t)
    return out if out.ndim else float(out)


def certify_class(zeta, j, n, threshold=CERT_THRESHOLD):
    """Numerically certify membership of ``zeta`` in ``Had_j^n``.

    Along ``s in {1e-1, ..., 1e-4}`` (restricted to the sampled range) the
    products ``s^(n-j) |zeta(s)|`` must be below ``threshold`` or decay
    strictly, and the increments of ``eta`` must be below ``threshold`` or
    decay geometrically.

    Returns
    -------
    dict
        The sequences used, for reporting.

    Raises
    ------
    ClassViolation
    """
    lower = zeta.s[0] if zeta.sampled else 0.0
    seq = np.array([s for s in REFINEMENT if lower <= s < zeta.support])
    if seq.size < 2:
        return {"s": seq.tolist(), "products": [], "eta": []}
    prods = seq ** (n - j) * np.abs(zeta(seq))
    scale = max(1.0, float(prods.max()))
    decaying = np.all(prods[-2:] <= prods[-3:-1] * (1 - 1e-3)) \
        if seq.size >= 3 else prods[-1] < prods[-2]
    if not (prods[-1] <= threshold * scale or decaying):
        raise ClassViolation(
            f"s^(n-j) zeta(s) does not tend to 0 (last value {prods[-1]:.3g})")
    etas = moment(zeta, n - j - 1, seq)
    incr = np.abs(np.diff(etas))
    escale = max(1.0, float(np.abs(etas).max()))
    geometric = np.all(incr[1:] <= 0.9 * incr[:-1]) if incr.size >= 2 else True
    if not (incr[-1] <= threshold * escale or geometric):
        raise ClassViolation(
            f"tail integral does not converge (last increment {incr[-1]:.3g})")
    return {"s": seq.tolist(), "products": prods.tolist(),
            "eta": np.atleast_1d(etas).tolist()}


# -------------------------------------------------------------- truncation

def truncate(zeta, r):
    """``zeta_r(t) = zeta(max(t, r))``, constant below ``r``."""
    if r <= 0:
        raise ValueError("truncation radius must be positive")
    if r >= zeta.support:
        return ZetaProfile.from_function(lambda s: np.zeros_like(s),
                                         zeta.support, name="zero")
    zr = float(zeta(r))
    knots = tuple(zeta.knots()) + (r,)
    return ZetaProfile.from_function(
        lambda s: np.where(s < r, zr, zeta(np.maximum(s, r))),
        zeta.support, knots, zeta.tag, name=f"truncated({r:g})")


def eta_r(zeta, j, n, r, t):
    """Tail moment of the truncated profile from the piecewise formula."""
    t = np.asarray(t, dtype=float)
    k = n - j
    below = float(zeta(r)) * (r ** k - t ** k) / k + eta(zeta, j, n, r)
    above = eta(zeta, j, n, np.maximum(t, r))
    out = np.where(t < r, below, above)
    return out if out.ndim else float(out)


def rho_r(zeta, j, n, r, t):
    """``rho_r(t) = rho(r)`` below ``r`` and ``rho(t)`` above."""
    t = np.asarray(t, dtype=float)
    out = np.where(t < r, rho(zeta, j, n, r), rho(zeta, j, n, np.maximum(t, r)))
    return out if out.ndim else float(out)


# ---------------------------------------------------------- Abel transform

def _mapped_knots(zeta, t):
    ks = zeta.knots(t)
    return np.sqrt(np.maximum(ks * ks - t * t, 0.0))


def abel_forward(zeta, t):
    """``A zeta(t) = int_t^inf s zeta(s) / sqrt(s^2 - t^2) ds``.

    Evaluated after the substitution ``u = sqrt(s^2 - t^2)``, which turns
    the integrand into the bounded ``zeta(sqrt(u^2 + t^2))``.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape)
    res = out.ravel()
    for idx, tt in enumerate(t.ravel()):
        tt = abs(float(tt))
        if tt >= zeta.support:
            res[idx] = 0.0
            continue
        top = math.sqrt(zeta.support ** 2 - tt * tt)
        res[idx] = _quad(lambda u: float(zeta(math.sqrt(u * u + tt * tt))),
                         0.0, top, _mapped_knots(zeta, tt))
    return out if out.ndim else float(out)


def generalized_kernel(zeta, k, t):
    """``int_0^inf zeta(sqrt(r^2 + t^2)) r^k dr`` for an integer ``k >= 0``."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a non-negative integer")
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape)
    res = out.ravel()
    for idx, tt in enumerate(t.ravel()):
        tt = abs(float(tt))
        if tt >= zeta.support:
            res[idx] = 0.0
            continue
        top = math.sqrt(zeta.support ** 2 - tt * tt)
        res[idx] = _quad(
            lambda r: float(zeta(math.sqrt(r * r + tt * tt))) * r ** k,
            0.0, top, _mapped_knots(zeta, tt))
    return out if out.ndim else float(out)


def _derivative_profile(xi, jump_tol=0.2):
    """Sampled derivative of ``xi`` (central differences) as a profile."""
    if xi.sampled:
        s, v = np.asarray(xi.s), np.asarray(xi.values)
    else:
        s = np.linspace(0.0, xi.support, 4001)
        v = xi(s)
    d = np.gradient(v, s, edge_order=2)
    if s[0] == 0.0:
        d[0] = 0.0
    scale = np.abs(d).max()
    if scale > 0 and np.abs(np.diff(d)).max() > jump_tol * scale:
        raise NonSmoothXi("profile derivative jumps; input is not C^1")
    return s, d


def abel_inverse(xi, s):
    """Inverse Abel transform ``-(2/pi) int_s^inf xi'(t) / sqrt(t^2 - s^2) dt``.

    ``xi'`` is obtained by central differences on the sample grid of
    ``xi`` (closed-form inputs are sampled first) and interpolated
    linearly; the kernel singularity is removed by ``t = sqrt(u^2 + s^2)``.

    Raises
    ------
    NonSmoothXi
        If the sampled derivative has a jump.
    """
    grid, deriv = _derivative_profile(xi)
    top_t = xi.support

    def dxi(t):
        return np.interp(t, grid, deriv, right=0.0)

    s = np.asarray(s, dtype=float)
    out = np.empty(s.shape)
    res = out.ravel()
    for idx, ss in enumerate(s.ravel()):
        ss = abs(float(ss))
        if ss >= top_t:
            res[idx] = 0.0
            continue
        top = math.sqrt(top_t ** 2 - ss * ss)
        inner = grid[(grid > ss) & (grid < top_t)]
        knots = np.sqrt(inner * inner - ss * ss)
        if knots.size > 60:
            knots = knots[:: int(math.ceil(knots.size / 60))]

        def f(u):
            t = math.sqrt(u * u + ss * ss)
            if t == 0.0:
                return float(np.interp(grid[1], grid, deriv)) / grid[1]
            return float(dxi(t)) / t

        res[idx] = -2.0 / math.pi * _quad(f, 0.0, top, knots)
    return out if out.ndim else float(out)


# ------------------------------------------------------ cone-value solver

def cone_values(zeta, n, t):
    """Degree-1 values on the cone family synthesised from ``zeta``.

    ``omega_n (zeta(t) t^(n-1) + (n-1) int_t^inf r^(n-2) zeta(r) dr)``.
    """
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        head = np.where(t > 0, zeta(np.where(t > 0, t, 1.0)) * t ** (n - 1),
                        0.0)
    return omega(n) * (head + (n - 1) * moment(zeta, n - 2, t))


def _tail_over_power(t, z, power):
    """``int_{t_k}^inf z(r) / r^power dr`` at every sample (exact, piecewise linear)."""
    beta = np.diff(z) / np.diff(t)
    alpha = z[:-1] - beta * t[:-1]
    pieces = _linear_moment(-power, t[:-1], t[1:], alpha, beta)
    return np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])


def _decade_indices(pos):
    """Indices of the samples closest to 1e-1, 1e-2, ... above the first."""
    out = []
    k = 1
    while 10.0 ** -k >= pos[0] * (1 - 1e-12):
        i = int(np.argmin(np.abs(np.log(pos / 10.0 ** -k))))
        if not out or i != out[-1]:
            out.append(i)
        k += 1
    if not out or out[-1] != 0:
        out.append(0)
    return np.array(out)


def _aitken(seq):
    """Aitken extrapolation of the last three terms (last term if unstable)."""
    seq = np.asarray(seq, dtype=float)
    if seq.size < 3:
        return float(seq[-1])
    a, b, c = seq[-3:]
    denom = (c - b) - (b - a)
    if abs(denom) < 1e-14 * max(1.0, abs(c)) or (c - b) * (b - a) <= 0:
        return float(c)
    return float(c - (c - b) ** 2 / denom)


def recover_zeta_from_cone_values(zvals, n, threshold=CERT_THRESHOLD):
    """Solve the degree-1 integral equation for the weight.

    Parameters
    ----------
    zvals : ZetaProfile
        Samples ``t -> Z(u_t)`` on ``[0, T]`` (first abscissa 0), compactly
        supported and dense near the origin.
    n : int
        Ambient dimension, ``n >= 2``.

    Returns
    -------
    ZetaProfile
        Samples of ``zeta(t) = Z(u_t)/(omega_n t^(n-1))
        - (n-1)/omega_n int_t^inf Z(u_r)/r^n dr`` at the positive
        abscissae.  ``meta`` holds the certificates: ``limit`` is
        ``t^(n-1) int_t^inf Z(u_r)/r^n dr`` extrapolated to ``t -> 0``
        along the decades ``1e-1, 1e-2, ...`` of the sample grid,
        ``limit_target`` is ``Z(u_0)/(n-1)``, ``edge_product`` is the same
        extrapolation of ``t^(n-1) zeta(t)``.

    Raises
    ------
    ClassViolation
        If a certificate misses ``threshold`` (relative to the data scale).
    """
    if n < 2:
        raise IndexOutOfRange("need n >= 2")
    if not zvals.sampled or zvals.s[0] != 0.0:
        raise ValueError("cone values must be sampled from t = 0")
    t = np.asarray(zvals.s, dtype=float)
    z = np.asarray(zvals.values, dtype=float)
    pos = t[1:]
    tail = _tail_over_power(pos, z[1:], n)
    w = omega(n)
    zeta = z[1:] / (w * pos ** (n - 1)) - (n - 1) / w * tail
    idx = _decade_indices(pos)
    limit_seq = pos[idx] ** (n - 1) * tail[idx]
    edge_seq = pos[idx] ** (n - 1) * zeta[idx]
    limit = _aitken(limit_seq)
    edge = _aitken(edge_seq)
    target = z[0] / (n - 1)
    scale = max(1.0, float(np.abs(z).max()))
    meta = {"limit": float(limit), "limit_target": float(target),
            "limit_gap": float(abs(limit - target)),
            "limit_raw": float(limit_seq[-1]),
            "edge_product": float(edge),
            "refinement": pos[idx].tolist()}
    if abs(limit - target) > threshold * scale:
        raise ClassViolation(
            f"limit certificate off by {abs(limit - target):.3g}")
    if abs(edge) > threshold * scale:
        raise ClassViolation(f"t^(n-1) zeta(t) = {edge:.3g} does not vanish")
    prof = ZetaProfile.from_samples(pos, zeta, tag=(1, n), name="recovered")
    prof.meta.update(meta)
    return prof


def integral_equation_residual(zvals, n, t):
    """Both sides of the integration-by-parts identity by nested quadrature.

    Returns ``|lhs - rhs|`` with ``lhs = (n-1) int_t^inf r^(n-2)
    int_r^inf Z(s)/s^n ds dr`` and ``rhs = -t^(n-1) int_t^inf Z(r)/r^n dr
    + int_t^inf Z(r)/r dr``.
    """
    top = zvals.support
    knots = zvals.knots(t)

    def inner(r):
        return _quad(lambda s: float(zvals(s)) / s ** n, r, top, knots)

    lhs = (n - 1) * _quad(lambda r: r ** (n - 2) * inner(r), t, top, knots)
    rhs = -t ** (n - 1) * inner(t) + _quad(lambda r: float(zvals(r)) / r,
                                          t, top, knots)
    return abs(lhs - rhs)


# --------------------------------------------------------------------- I/O

_META = re.compile(r"(\w+)\s*=\s*([^,]+)")


def read_profile(path):
    """Read ``s,value`` CSV with optional ``# support=S, class=H_j^n`` line."""
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                meta.update({k: v.strip() for k, v in _META.findall(line)})
                continue
            parts = line.split(",")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                continue
    if not rows:
        raise ValueError(f"no samples in {path}")
    s, v = np.array(rows).T
    tag = None
    if "class" in meta:
        m = re.match(r"H_(\d+)\^(\d+)", meta["class"])
        if m:
            tag = (int(m.group(1)), int(m.group(2)))
    support = float(meta["support"]) if "support" in meta else None
    return ZetaProfile.from_samples(s, v, support, tag)


def write_profile(zeta, path, grid=None, header="s,value"):
    """Write samples (or the closed form on ``grid``) in the CSV format."""
    if zeta.sampled and grid is None:
        s, v = zeta.s, zeta.values
    else:
        s = np.linspace(0.0, zeta.support, 2001)[1:] if grid is None \
            else np.asarray(grid, dtype=float)
        v = zeta(s)
    lines = [f"# support={zeta.support:.17g}"
             + (f", class=H_{zeta.tag[0]}^{zeta.tag[1]}" if zeta.tag else "")]
    lines.append(header)
    lines += [f"{a:.17g},{b:.17g}" for a, b in zip(s, v)]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
