"""Curve reconstruction algorithms mapping a point set to an edge set.

All five are deterministic filters; none post-processes its output, so
non-manifold junctions or isolated vertices are reported as produced and
judged by the metrics, not repaired.
"""

from dataclasses import dataclass

import numpy as np

from . import _accel
from .delaunay import delaunay, voronoi_vertices, _triangulate_raw
from .errors import DegenerateInputError
from .geom import PointSet
from .graphs import emst


@dataclass(frozen=True)
class PolyCurve:
    """Reconstruction result: undirected edges over the input point set."""

    vertices: PointSet
    edges: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        e = np.sort(e, axis=1)
        if len(e):
            if e.min() < 0 or e.max() >= len(self.vertices):
                raise ValueError("edge index out of range")
            e = np.unique(e, axis=0)
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    def edge_set(self):
        return {(int(i), int(j)) for i, j in self.edges}

    def degrees(self):
        d = np.zeros(len(self.vertices), dtype=np.int64)
        np.add.at(d, self.edges.ravel(), 1)
        return d

    def open_endpoints(self):
        return np.nonzero(self.degrees() == 1)[0]

    def component_count(self):
        """Connected components among vertices that carry at least one edge."""
        n = len(self.vertices)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            ri, rj = find(int(i)), find(int(j))
            if ri != rj:
                parent[ri] = rj
        used = set(self.edges.ravel().tolist())
        return len({find(v) for v in used})

    def total_length(self):
        if not len(self.edges):
            return 0.0
        pts = self.vertices.points
        return float(np.hypot(*(pts[self.edges[:, 0]] - pts[self.edges[:, 1]]).T).sum())


ALGORITHM_NAMES = ("crust", "nncrust", "hnncrust", "alphadisc", "emst")


@dataclass(frozen=True)
class AlgorithmId:
    """Algorithm selector as accepted by the driver's -a flag."""

    name: str
    params: tuple = ()

    def __post_init__(self):
        if self.name not in ALGORITHM_NAMES:
            raise ValueError(
                f"unknown algorithm {self.name!r}; valid: {', '.join(ALGORITHM_NAMES)}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.name == "alphadisc":
            if len(self.params) != 1 or not self.params[0] > 0:
                raise ValueError("alphadisc takes exactly one positive radius")
        elif self.params:
            raise ValueError(f"{self.name} takes no parameters")

    def label(self):
        if self.params:
            return f"{self.name}({','.join(f'{p:g}' for p in self.params)})"
        return self.name


def reconstruct(ps, alg):
    """Run the algorithm named by an AlgorithmId on a point set."""
    if alg.name == "crust":
        return crust(ps)
    if alg.name == "nncrust":
        return nn_crust(ps)
    if alg.name == "hnncrust":
        return hnn_crust(ps)
    if alg.name == "alphadisc":
        return alpha_disc(ps, alg.params[0])
    return emst_curve(ps)


# ------------------------------------------------- nearest-neighbor kernels
#
# Candidate edges come from the Delaunay one-ring (complete graph on inputs
# where the triangulation is undefined, e.g. collinear): both crust variants
# are Delaunay filters, which keeps their outputs inside delaunay(ps).edges.

def _neighbor_csr(ps):
    """Sorted per-vertex neighbor lists as CSR (offsets, flat)."""
    n = len(ps)
    try:
        edges = delaunay(ps).edges
        counts = np.zeros(n, dtype=np.int64)
        np.add.at(counts, edges.ravel(), 1)
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        flat = np.empty(offsets[-1], dtype=np.int64)
        cursor = offsets[:-1].copy()
        for i, j in edges:  # edges are lexsorted, so lists come out sorted
            flat[cursor[i]] = j
            cursor[i] += 1
            flat[cursor[j]] = i
            cursor[j] += 1
        for i in range(n):
            flat[offsets[i]:offsets[i + 1]] = np.sort(flat[offsets[i]:offsets[i + 1]])
        return offsets, flat
    except DegenerateInputError:
        offsets = np.arange(n + 1, dtype=np.int64) * (n - 1)
        flat = np.concatenate([np.delete(np.arange(n, dtype=np.int64), i)
                               for i in range(n)])
        return offsets, flat


@_accel.jit
def _nearest_csr_loop(pts, offsets, flat):
    n = pts.shape[0]
    nn = np.empty(n, dtype=np.int64)
    for i in range(n):
        best = np.inf
        bi = -1
        for k in range(offsets[i], offsets[i + 1]):
            j = flat[k]
            d = (pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2
            if d < best:
                best = d
                bi = j
        nn[i] = bi
    return nn


def _nearest_csr_numpy(pts, offsets, flat):
    nn = np.empty(len(pts), dtype=np.int64)
    for i in range(len(pts)):
        nbr = flat[offsets[i]:offsets[i + 1]]
        d = ((pts[nbr] - pts[i]) ** 2).sum(axis=1)
        nn[i] = nbr[int(d.argmin())]
    return nn


@_accel.jit
def _nn_second_loop(pts, nn, offsets, flat):
    # per point: nearest neighbor-list candidate whose angle with the
    # nearest-neighbor edge is at least 90 deg (dot <= 0; the boundary case
    # must count or a square can never close), -1 when none exists
    n = pts.shape[0]
    out = np.full(n, -1, dtype=np.int64)
    for p in range(n):
        q = nn[p]
        qx = pts[q, 0] - pts[p, 0]
        qy = pts[q, 1] - pts[p, 1]
        best = np.inf
        bi = -1
        for k in range(offsets[p], offsets[p + 1]):
            r = flat[k]
            rx = pts[r, 0] - pts[p, 0]
            ry = pts[r, 1] - pts[p, 1]
            if qx * rx + qy * ry <= 0.0:
                d = rx * rx + ry * ry
                if d < best:
                    best = d
                    bi = r
        out[p] = bi
    return out


def _nn_second_numpy(pts, nn, offsets, flat):
    out = np.full(len(pts), -1, dtype=np.int64)
    for p in range(len(pts)):
        q = nn[p]
        nbr = flat[offsets[p]:offsets[p + 1]]
        rel = pts[nbr] - pts[p]
        dot = rel @ (pts[q] - pts[p])
        mask = dot <= 0.0
        if mask.any():
            d = np.where(mask, (rel ** 2).sum(axis=1), np.inf)
            out[p] = nbr[int(d.argmin())]
    return out


@_accel.jit
def _hnn_second_loop(pts, nn, offsets, flat):
    # per point: nearest neighbor-list candidate strictly on this point's
    # side of the perpendicular bisector of its nearest-neighbor edge
    n = pts.shape[0]
    out = np.full(n, -1, dtype=np.int64)
    for p in range(n):
        q = nn[p]
        best = np.inf
        bi = -1
        for k in range(offsets[p], offsets[p + 1]):
            r = flat[k]
            if r == q:
                continue
            drp = (pts[r, 0] - pts[p, 0]) ** 2 + (pts[r, 1] - pts[p, 1]) ** 2
            drq = (pts[r, 0] - pts[q, 0]) ** 2 + (pts[r, 1] - pts[q, 1]) ** 2
            if drp < drq and drp < best:
                best = drp
                bi = r
        out[p] = bi
    return out


def _hnn_second_numpy(pts, nn, offsets, flat):
    out = np.full(len(pts), -1, dtype=np.int64)
    for p in range(len(pts)):
        q = nn[p]
        nbr = flat[offsets[p]:offsets[p + 1]]
        drp = ((pts[nbr] - pts[p]) ** 2).sum(axis=1)
        drq = ((pts[nbr] - pts[q]) ** 2).sum(axis=1)
        mask = (drp < drq) & (nbr != q)
        if mask.any():
            out[p] = nbr[int(np.where(mask, drp, np.inf).argmin())]
    return out


def _with_second_edges(ps, nn, second):
    """NN edges plus conditional second edges, applied in index order: a
    point that already carries two edges gets no extra one."""
    n = len(ps)
    edges = set()
    deg = np.zeros(n, dtype=np.int64)
    for p in range(n):
        e = (min(p, int(nn[p])), max(p, int(nn[p])))
        if e not in edges:
            edges.add(e)
            deg[e[0]] += 1
            deg[e[1]] += 1
    for p in range(n):
        if deg[p] >= 2:
            continue
        r = int(second[p])
        if r < 0:
            continue
        e = (min(p, r), max(p, r))
        if e not in edges:
            edges.add(e)
            deg[e[0]] += 1
            deg[e[1]] += 1
    return PolyCurve(ps, np.array(sorted(edges), dtype=np.int64).reshape(-1, 2))


def nn_crust(ps):
    """Nearest-neighbor crust: connect every point to its nearest neighbor,
    then, where a point still has fewer than two edges, to the nearest point
    making a non-acute angle with the first edge."""
    ps = _as_ps(ps)
    if len(ps) < 3:
        raise ValueError("nn_crust needs at least 3 points")
    offsets, flat = _neighbor_csr(ps)
    if _accel.use_numba():
        nn = _nearest_csr_loop(ps.points, offsets, flat)
        second = _nn_second_loop(ps.points, nn, offsets, flat)
    else:
        nn = _nearest_csr_numpy(ps.points, offsets, flat)
        second = _nn_second_numpy(ps.points, nn, offsets, flat)
    return _with_second_edges(ps, nn, second)


def hnn_crust(ps):
    """Variant of nn_crust whose second edge goes to the half neighbor: the
    nearest point lying strictly on this point's side of the perpendicular
    bisector of the nearest-neighbor edge.  Admits corners down to ~60 deg
    where the dot-product rule of nn_crust stops at 90."""
    ps = _as_ps(ps)
    if len(ps) < 3:
        raise ValueError("hnn_crust needs at least 3 points")
    offsets, flat = _neighbor_csr(ps)
    if _accel.use_numba():
        nn = _nearest_csr_loop(ps.points, offsets, flat)
        second = _hnn_second_loop(ps.points, nn, offsets, flat)
    else:
        nn = _nearest_csr_numpy(ps.points, offsets, flat)
        second = _hnn_second_numpy(ps.points, nn, offsets, flat)
    return _with_second_edges(ps, nn, second)


def crust(ps):
    """Two-stage Voronoi filter: triangulate the samples together with their
    Voronoi vertices and keep the edges joining two original samples."""
    ps = _as_ps(ps)
    if len(ps) < 3:
        raise ValueError("crust needs at least 3 points")
    n = len(ps)
    t = delaunay(ps)
    vv = voronoi_vertices(t)
    # the second triangulation needs distinct rows: collapse coincident
    # circumcenters (common around symmetric inputs) and drop any that land
    # exactly on a sample
    taken = {(float(x), float(y)) for x, y in ps.points}
    extra = []
    for x, y in vv:
        key = (float(x), float(y))
        if key not in taken and np.isfinite(x) and np.isfinite(y):
            taken.add(key)
            extra.append(key)
    if extra:
        stacked = np.vstack([ps.points, np.array(extra)])
    else:
        stacked = ps.points
    tri = _triangulate_raw(stacked)
    e = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
    e = np.sort(e, axis=1)
    e = np.unique(e, axis=0)
    return PolyCurve(ps, e[(e < n).all(axis=1)])


@_accel.jit
def _alpha_keep_loop(pts, edges, r):
    m = edges.shape[0]
    n = pts.shape[0]
    keep = np.zeros(m, dtype=np.bool_)
    r2 = r * r
    for e in range(m):
        i = edges[e, 0]
        j = edges[e, 1]
        ex = pts[j, 0] - pts[i, 0]
        ey = pts[j, 1] - pts[i, 1]
        l2 = ex * ex + ey * ey
        if l2 > 4.0 * r2:
            continue
        mx = (pts[i, 0] + pts[j, 0]) * 0.5
        my = (pts[i, 1] + pts[j, 1]) * 0.5
        l = np.sqrt(l2)
        h = np.sqrt(max(r2 - 0.25 * l2, 0.0))
        # unit perpendicular of the edge
        px = -ey / l
        py = ex / l
        for side in range(2):
            sgn = 1.0 if side == 0 else -1.0
            cx = mx + sgn * h * px
            cy = my + sgn * h * py
            empty = True
            for k in range(n):
                if k == i or k == j:
                    continue
                d2 = (pts[k, 0] - cx) ** 2 + (pts[k, 1] - cy) ** 2
                if d2 < r2:
                    empty = False
                    break
            if empty:
                keep[e] = True
                break
    return keep


def _alpha_keep_numpy(pts, edges, r):
    keep = np.zeros(len(edges), dtype=bool)
    r2 = r * r
    for e, (i, j) in enumerate(edges):
        ev = pts[j] - pts[i]
        l2 = float(ev @ ev)
        if l2 > 4.0 * r2:
            continue
        mid = (pts[i] + pts[j]) * 0.5
        l = np.sqrt(l2)
        h = np.sqrt(max(r2 - 0.25 * l2, 0.0))
        perp = np.array([-ev[1], ev[0]]) / l
        for sgn in (1.0, -1.0):
            c = mid + sgn * h * perp
            d2 = ((pts - c) ** 2).sum(axis=1)
            d2[i] = d2[j] = np.inf
            if not (d2 < r2).any():
                keep[e] = True
                break
    return keep


def alpha_disc(ps, r):
    """Pivoting-disk filter: keep a Delaunay edge iff it is no longer than
    2r and at least one of the two radius-r disks through its endpoints has
    an empty open interior."""
    ps = _as_ps(ps)
    r = float(r)
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    if len(ps) < 3:
        raise ValueError("alpha_disc needs at least 3 points")
    t = delaunay(ps)
    if _accel.use_numba():
        keep = _alpha_keep_loop(ps.points, t.edges, r)
    else:
        keep = _alpha_keep_numpy(ps.points, t.edges, r)
    return PolyCurve(ps, t.edges[keep])


def emst_curve(ps):
    """Euclidean minimum spanning tree as a curve; reconstructs open curves,
    and by construction never closes a loop."""
    ps = _as_ps(ps)
    g = emst(ps)
    return PolyCurve(ps, g.edges)


def eps_to_rho(eps):
    """Convert an epsilon-sampling bound to the equivalent reach-based bound
    rho = eps / (1 - eps)."""
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return eps / (1.0 - eps)


def _as_ps(ps):
    return ps if isinstance(ps, PointSet) else PointSet(ps)
