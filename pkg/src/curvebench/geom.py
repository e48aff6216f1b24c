"""Planar point sets and circles.

Points are float64 ``(n, 2)`` arrays throughout; a ``PointSet`` wraps one and
pins down the two invariants everything downstream relies on: coordinates are
finite and no two points coincide exactly.  The row index is the stable vertex
identity that reconstructions and ground truths refer to.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTriangleError, DuplicatePointError


def as_points(obj):
    """Coerce to a float64 (n, 2) array without copying when possible."""
    pts = np.asarray(obj, dtype=np.float64)
    if pts.size == 0:
        return pts.reshape(0, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected (n, 2) coordinates, got shape {pts.shape}")
    return pts


class PointSet:
    """Immutable set of distinct planar points with a cached bounding box.

    ``normals`` and ``lfs`` are optional per-point annotations carried along
    by the curve sampler so that feature-size-proportional noise can be
    applied later; plain point sets leave them ``None``.
    """

    __slots__ = ("points", "normals", "lfs")

    def __init__(self, points, normals=None, lfs=None):
        pts = as_points(points).copy()
        if not np.all(np.isfinite(pts)):
            bad = np.nonzero(~np.isfinite(pts).all(axis=1))[0]
            raise ValueError(f"non-finite coordinates at indices {bad[:8].tolist()}")
        dup = _exact_duplicates(pts)
        if dup:
            raise DuplicatePointError(dup)
        pts.setflags(write=False)
        self.points = pts
        if normals is not None:
            normals = as_points(normals).copy()
            if normals.shape != pts.shape:
                raise ValueError("normals shape must match points")
            normals.setflags(write=False)
        self.normals = normals
        if lfs is not None:
            lfs = np.asarray(lfs, dtype=np.float64).copy()
            if lfs.shape != (pts.shape[0],):
                raise ValueError("lfs shape must match points")
            if not np.all(lfs > 0):
                raise ValueError("lfs must be positive")
            lfs.setflags(write=False)
        self.lfs = lfs

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"PointSet({len(self)} points)"

    @property
    def bbox(self):
        """((min_x, min_y), (max_x, max_y))."""
        if len(self) == 0:
            raise ValueError("bbox of an empty point set")
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return (lo[0], lo[1]), (hi[0], hi[1])

    @property
    def bbox_diagonal(self):
        lo, hi = self.bbox
        return float(np.hypot(hi[0] - lo[0], hi[1] - lo[1]))

    def has_sampling_provenance(self):
        return self.normals is not None and self.lfs is not None


def _exact_duplicates(pts):
    """Index pairs (i, j), i<j, of exactly coincident rows."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    s = pts[order]
    same = np.nonzero((s[1:] == s[:-1]).all(axis=1))[0]
    pairs = []
    for k in same:
        i, j = order[k], order[k + 1]
        pairs.append((min(i, j), max(i, j)))
    return pairs


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: float

    def __post_init__(self):
        if not (self.radius >= 0):
            raise ValueError(f"negative radius {self.radius}")


def circumcircle(a, b, c):
    """Circle through three non-collinear points.

    Solves the perpendicular-bisector system relative to ``a`` for accuracy;
    the result passes through the inputs to ~1e-9 relative.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    cx, cy = float(c[0]), float(c[1])
    dbx, dby = bx - ax, by - ay
    dcx, dcy = cx - ax, cy - ay
    d = 2.0 * (dbx * dcy - dby * dcx)
    if d == 0.0:
        raise DegenerateTriangleError(f"collinear points {a}, {b}, {c}")
    b2 = dbx * dbx + dby * dby
    c2 = dcx * dcx + dcy * dcy
    ux = (dcy * b2 - dby * c2) / d
    uy = (dbx * c2 - dcx * b2) / d
    r = float(np.hypot(ux, uy))
    return Circle((ax + ux, ay + uy), r)


def circumcenters(points, triangles):
    """Vectorized circumcenters and radii for CCW index triples.

    Returns (centers (m, 2), radii (m,)).  Triangles are assumed proper
    (non-collinear), as produced by the Delaunay kernel.
    """
    pts = as_points(points)
    tri = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    a = pts[tri[:, 0]]
    db = pts[tri[:, 1]] - a
    dc = pts[tri[:, 2]] - a
    d = 2.0 * (db[:, 0] * dc[:, 1] - db[:, 1] * dc[:, 0])
    b2 = (db * db).sum(axis=1)
    c2 = (dc * dc).sum(axis=1)
    # d is exactly nonzero for Delaunay triangles but can still underflow to
    # zero for subnormal-scale inputs; the non-finite centers that produces
    # are dropped by the callers that can encounter them
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ux = (dc[:, 1] * b2 - db[:, 1] * c2) / d
        uy = (db[:, 0] * c2 - dc[:, 0] * b2) / d
    centers = a + np.stack([ux, uy], axis=1)
    radii = np.hypot(ux, uy)
    return centers, radii
