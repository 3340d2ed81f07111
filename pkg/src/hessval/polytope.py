"""Bounded convex polytopes kept in vertex and half-space form."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from .errors import EmptyDomain

__all__ = ["Polytope"]

_TOL = 1e-10


def _dedupe_rows(a, tol=1e-9):
    keep = []
    for row in a:
        if not any(np.allclose(row, k, atol=tol) for k in keep):
            keep.append(row)
    return np.array(keep)


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex polytope ``{x : normals @ x <= offsets} = conv(vertices)``.

    Lower-dimensional polytopes (points, segments in the plane, ...) are
    allowed; their affine hull is encoded by pairs of opposite half-spaces.
    """

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray

    @property
    def dim(self):
        return self.vertices.shape[1]

    @classmethod
    def from_vertices(cls, vertices):
        v = np.atleast_2d(np.asarray(vertices, dtype=float))
        if v.size == 0:
            raise EmptyDomain("polytope needs at least one vertex")
        n = v.shape[1]
        centre = v.mean(axis=0)
        _, sing, vt = np.linalg.svd(v - centre)
        scale = max(1.0, np.abs(v).max())
        rank = int(np.sum(sing > 1e-10 * scale))
        basis, comp = vt[:rank], vt[rank:]
        local = (v - centre) @ basis.T
        normals, offsets = [], []
        if rank == 1:
            lo, hi = local[:, 0].min(), local[:, 0].max()
            verts_local = np.array([[lo], [hi]])
            u = basis[0]
            normals += [-u, u]
            offsets += [-lo - centre @ u, hi + centre @ u]
        elif rank >= 2:
            hull = ConvexHull(local)
            verts_local = local[hull.vertices]
            eq = _dedupe_rows(hull.equations)
            for row in eq:
                nl, off = row[:-1], row[-1]
                ng = nl @ basis
                normals.append(ng)
                offsets.append(-off + ng @ centre)
        else:
            verts_local = np.zeros((1, 0))
        for c in comp:
            val = c @ centre
            normals += [c, -c]
            offsets += [val, -val]
        verts = centre + verts_local @ basis if rank else centre[None, :]
        normals = np.array(normals, dtype=float).reshape(-1, n)
        offsets = np.array(offsets, dtype=float)
        return cls(verts, normals, offsets)

    @classmethod
    def from_halfspaces(cls, normals, offsets):
        """Polytope from inequalities; raises EmptyDomain without interior."""
        a = np.atleast_2d(np.asarray(normals, dtype=float))
        b = np.asarray(offsets, dtype=float).ravel()
        centre, radius = _chebyshev(a, b)
        if centre is None or radius <= 1e-12:
            raise EmptyDomain("half-space system has empty interior")
        n = a.shape[1]
        if n == 1:
            col = a[:, 0]
            upper = np.min(b[col > 0] / col[col > 0])
            lower = np.max(b[col < 0] / col[col < 0])
            return cls.from_vertices([[lower], [upper]])
        hs = HalfspaceIntersection(np.hstack([a, -b[:, None]]), centre)
        return cls.from_vertices(hs.intersections)

    @classmethod
    def box(cls, lo, hi):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        n = lo.size
        corners = np.array(np.meshgrid(*zip(lo, hi), indexing="ij"))
        verts = corners.reshape(n, -1).T
        eye = np.eye(n)
        return cls(verts, np.vstack([eye, -eye]), np.concatenate([hi, -lo]))

    @classmethod
    def point(cls, p):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        eye = np.eye(p.size)
        return cls(p[None, :], np.vstack([eye, -eye]), np.concatenate([p, -p]))

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        slack = x @ self.normals.T - self.offsets
        scale = 1.0 + np.abs(self.offsets).max(initial=0.0)
        return np.all(slack <= tol * scale, axis=-1)

    def interior_radius(self):
        """Radius of the largest inscribed ball (0 if lower-dimensional)."""
        _, r = _chebyshev(self.normals, self.offsets)
        return 0.0 if r is None else r

    @property
    def is_full_dimensional(self):
        return self.interior_radius() > 1e-12

    @property
    def volume(self):
        if not self.is_full_dimensional:
            return 0.0
        if self.dim == 1:
            return float(np.ptp(self.vertices[:, 0]))
        return float(ConvexHull(self.vertices).volume)

    def support(self, y):
        """Support function ``max_{x in P} <x, y>``."""
        y = np.asarray(y, dtype=float)
        return np.max(y @ self.vertices.T, axis=-1)

    def intersect(self, other):
        """Full-dimensional intersection, or ``None`` if it has no interior."""
        try:
            return Polytope.from_halfspaces(
                np.vstack([self.normals, other.normals]),
                np.concatenate([self.offsets, other.offsets]))
        except EmptyDomain:
            return None

    def clip(self, normal, offset):
        """Part with ``normal @ x <= offset``, or ``None`` if empty interior."""
        try:
            return Polytope.from_halfspaces(
                np.vstack([self.normals, np.atleast_2d(normal)]),
                np.append(self.offsets, offset))
        except EmptyDomain:
            return None

    def scaled(self, lam):
        return Polytope(lam * self.vertices, self.normals, lam * self.offsets)

    def translated(self, shift):
        shift = np.asarray(shift, dtype=float)
        return Polytope(self.vertices + shift, self.normals,
                        self.offsets + self.normals @ shift)

    def bounding_box(self):
        return np.stack([self.vertices.min(axis=0),
                         self.vertices.max(axis=0)], axis=-1)

    def to_dict(self):
        return {"vertices": self.vertices.tolist()}

    @classmethod
    def from_dict(cls, data):
        if "vertices" in data:
            return cls.from_vertices(data["vertices"])
        return cls.from_halfspaces(data["normals"], data["offsets"])


def _chebyshev(a, b):
    """Chebyshev centre and radius of ``{a x <= b}``."""
    n = a.shape[1]
    norms = np.linalg.norm(a, axis=1)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=np.hstack([a, norms[:, None]]), b_ub=b,
                  bounds=[(None, None)] * n + [(0, None)], method="highs")
    if res.status != 0:
        return None, None
    return res.x[:n], res.x[-1]
