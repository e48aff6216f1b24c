"""Proximity graphs: EMST, relative neighborhood, Gabriel, beta-skeleton and
sphere-of-influence.

All emptiness tests use strict interior containment, so witnesses exactly on
a lune/disk boundary do not remove an edge; together with the Delaunay-edge
construction this keeps the nesting chain
``EMST <= RNG <= Gabriel <= Delaunay`` intact even on cocircular inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .delaunay import Triangulation, delaunay
from .errors import DegenerateInputError
from .geom import PointSet, circumcenters


@dataclass(frozen=True)
class Graph:
    """Undirected graph over a PointSet; edges canonical (i < j), sorted."""

    vertices: PointSet
    edges: np.ndarray
    kind: str

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        e = np.sort(e, axis=1)
        if len(e):
            if e.min() < 0 or e.max() >= len(self.vertices):
                raise ValueError("edge index out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self loop")
            e = np.unique(e, axis=0)
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    def edge_set(self):
        return {(int(i), int(j)) for i, j in self.edges}

    def degrees(self):
        d = np.zeros(len(self.vertices), dtype=np.int64)
        np.add.at(d, self.edges.ravel(), 1)
        return d


def _pts(ps):
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    return ps


# ---------------------------------------------------------------- kernels

@_accel.jit
def _rng_keep_loop(pts, edges):
    m = edges.shape[0]
    n = pts.shape[0]
    keep = np.ones(m, dtype=np.bool_)
    for e in range(m):
        i = edges[e, 0]
        j = edges[e, 1]
        dij = (pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2
        for k in range(n):
            if k == i or k == j:
                continue
            dik = (pts[i, 0] - pts[k, 0]) ** 2 + (pts[i, 1] - pts[k, 1]) ** 2
            if dik >= dij:
                continue
            djk = (pts[j, 0] - pts[k, 0]) ** 2 + (pts[j, 1] - pts[k, 1]) ** 2
            if djk < dij:
                keep[e] = False
                break
    return keep


def _rng_keep_numpy(pts, edges):
    keep = np.ones(len(edges), dtype=bool)
    for e, (i, j) in enumerate(edges):
        dij = ((pts[i] - pts[j]) ** 2).sum()
        dik = ((pts - pts[i]) ** 2).sum(axis=1)
        djk = ((pts - pts[j]) ** 2).sum(axis=1)
        inside = (dik < dij) & (djk < dij)
        inside[i] = inside[j] = False
        if inside.any():
            keep[e] = False
    return keep


@_accel.jit
def _gabriel_keep_loop(pts, edges):
    # strictly inside the disk with diameter (i, j) means an obtuse angle at
    # the witness: d2(i,k) + d2(j,k) < d2(i,j).  This form reuses the exact
    # quantities of the lune test, so rounding can never admit a Gabriel
    # witness that the lune test misses (fl(a+b) >= max(a,b) for a,b >= 0),
    # keeping RNG a subset of this graph
    m = edges.shape[0]
    n = pts.shape[0]
    keep = np.ones(m, dtype=np.bool_)
    for e in range(m):
        i = edges[e, 0]
        j = edges[e, 1]
        dij = (pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2
        for k in range(n):
            if k == i or k == j:
                continue
            dik = (pts[i, 0] - pts[k, 0]) ** 2 + (pts[i, 1] - pts[k, 1]) ** 2
            djk = (pts[j, 0] - pts[k, 0]) ** 2 + (pts[j, 1] - pts[k, 1]) ** 2
            if dik + djk < dij:
                keep[e] = False
                break
    return keep


def _gabriel_keep_numpy(pts, edges):
    keep = np.ones(len(edges), dtype=bool)
    for e, (i, j) in enumerate(edges):
        dij = ((pts[i] - pts[j]) ** 2).sum()
        dik = ((pts - pts[i]) ** 2).sum(axis=1)
        djk = ((pts - pts[j]) ** 2).sum(axis=1)
        inside = dik + djk < dij
        inside[i] = inside[j] = False
        if inside.any():
            keep[e] = False
    return keep


@_accel.jit
def _soi_edges_loop(pts, r):
    n = pts.shape[0]
    out = np.empty((n * (n - 1) // 2, 2), dtype=np.int64)
    m = 0
    for i in range(n):
        for j in range(i + 1, n):
            d = np.sqrt((pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2)
            if d <= r[i] + r[j]:
                out[m, 0] = i
                out[m, 1] = j
                m += 1
    return out[:m]


def _soi_edges_numpy(pts, r):
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt((diff ** 2).sum(axis=2))
    ok = d <= (r[:, None] + r[None, :])
    iu = np.triu_indices(len(pts), k=1)
    mask = ok[iu]
    return np.stack([iu[0][mask], iu[1][mask]], axis=1).astype(np.int64)


def nearest_neighbor_distances(pts):
    """Distance from each point to its nearest other point."""
    from scipy.spatial import cKDTree
    d, _ = cKDTree(pts).query(pts, k=2)
    return d[:, 1]


# ------------------------------------------------------------- operations

def _delaunay_edges(ps):
    t = delaunay(ps)
    return t, t.edges


def emst(ps):
    """Euclidean minimum spanning tree (Kruskal over Delaunay edges).

    Fully collinear inputs fall back to a 1D sort, where the EMST is still
    well defined; equal-weight ties break lexicographically on (i, j).
    """
    ps = _pts(ps)
    n = len(ps)
    if n < 2:
        raise ValueError("emst needs at least 2 points")
    if n == 2:
        return Graph(ps, np.array([[0, 1]]), "emst")
    try:
        _, cand = _delaunay_edges(ps)
    except DegenerateInputError:
        order = np.lexsort((ps.points[:, 1], ps.points[:, 0]))
        edges = np.stack([order[:-1], order[1:]], axis=1)
        return Graph(ps, edges, "emst")
    pts = ps.points
    d2 = ((pts[cand[:, 0]] - pts[cand[:, 1]]) ** 2).sum(axis=1)
    order = np.lexsort((cand[:, 1], cand[:, 0], d2))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for e in order:
        i, j = int(cand[e, 0]), int(cand[e, 1])
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            chosen.append((i, j))
            if len(chosen) == n - 1:
                break
    return Graph(ps, np.array(chosen), "emst")


def rng(ps):
    """Relative neighborhood graph: edge (p, q) survives unless some x is
    strictly closer than d(p, q) to both ends."""
    ps = _pts(ps)
    cand = _candidate_edges(ps)
    if _accel.use_numba():
        keep = _rng_keep_loop(ps.points, cand)
    else:
        keep = _rng_keep_numpy(ps.points, cand)
    return Graph(ps, cand[keep], "rng")


def gabriel(ps):
    """Gabriel graph: edge (p, q) survives iff the open disk with diameter
    (p, q) contains no other point."""
    ps = _pts(ps)
    cand = _candidate_edges(ps)
    if _accel.use_numba():
        keep = _gabriel_keep_loop(ps.points, cand)
    else:
        keep = _gabriel_keep_numpy(ps.points, cand)
    return Graph(ps, cand[keep], "gabriel")


def _candidate_edges(ps):
    """Delaunay edges, or all pairs when the triangulation is undefined
    (n == 2 or collinear input); both graphs are subsets of the former."""
    n = len(ps)
    if n < 2:
        raise ValueError("need at least 2 points")
    if n >= 3:
        try:
            return _delaunay_edges(ps)[1]
        except DegenerateInputError:
            pass
    iu = np.triu_indices(n, k=1)
    return np.stack(iu, axis=1).astype(np.int64)


def beta_skeleton(t, beta):
    """Circumradius filter over a triangulation: a Delaunay edge survives iff
    it is shorter than (beta / 2) times the circumradius of each triangle it
    bounds (hull edges: their single triangle)."""
    if not isinstance(t, Triangulation):
        raise TypeError("beta_skeleton expects a Triangulation")
    beta = float(beta)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    _, radii = circumcenters(t.vertices.points, t.triangles)
    edges = t.edges
    adj = t.edge_triangles
    pts = t.vertices.points
    length = np.hypot(*(pts[edges[:, 0]] - pts[edges[:, 1]]).T)
    keep = length < (beta / 2.0) * radii[adj[:, 0]]
    has2 = adj[:, 1] >= 0
    keep[has2] &= length[has2] < (beta / 2.0) * radii[adj[has2, 1]]
    return Graph(t.vertices, edges[keep], "beta_skeleton")


def sphere_of_influence(ps):
    """Edge (p, q) iff d(p, q) <= r_p + r_q with r the nearest-other-point
    distance (boundary case kept by the non-strict comparison)."""
    ps = _pts(ps)
    if len(ps) < 2:
        raise ValueError("need at least 2 points")
    r = nearest_neighbor_distances(ps.points)
    if _accel.use_numba():
        edges = _soi_edges_loop(ps.points, r)
    else:
        edges = _soi_edges_numpy(ps.points, r)
    return Graph(ps, edges, "soi")


def delaunay_graph(ps):
    """The Delaunay edge set as a Graph (tail of the nesting chain)."""
    ps = _pts(ps)
    t = delaunay(ps)
    return Graph(ps, t.edges, "delaunay")
