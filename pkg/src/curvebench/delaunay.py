"""Delaunay triangulation with exact predicate decisions.

The construction is incremental Bowyer-Watson over a "closed" triangulation:
every hull edge carries a ghost triangle sharing a virtual vertex ``gv = n``,
which removes all outside-the-hull special cases (topologically the structure
is a triangulated sphere).  The insertion kernel exists in two builds of the
same source, produced by :func:`_make_kernel`:

* a numba-compiled fast path whose predicates are float filters; the filter
  either certifies a sign or the kernel aborts,
* a plain-python exact path whose predicates fall back to rational arithmetic
  and break cocircular ties by the index-ordered symbolic perturbation of
  :func:`curvebench.predicates.incircle_sos`.

``delaunay`` runs the fast path and reruns the exact one whenever any single
decision could not be certified, so results never depend on rounding and the
two paths agree wherever the fast path completes.
"""

import numpy as np

from . import _accel
from .errors import DegenerateInputError
from .geom import PointSet, circumcenters
from .predicates import (incircle_filtered, incircle_sos, orient2d,
                         orient2d_filtered)

_WALK_CAP_FACTOR = 32


def _orient_exact_idx(pts, i, j, k):
    return orient2d(pts[i, 0], pts[i, 1], pts[j, 0], pts[j, 1],
                    pts[k, 0], pts[k, 1]), True


def _incircle_sos_idx(pts, ia, ib, ic, id_):
    return incircle_sos(pts, ia, ib, ic, id_), True


def _make_kernel(orient, incirc, compile_it):
    """Build the insertion kernel against a predicate pair.

    Predicates return ``(sign, ok)``; ``ok=False`` aborts the kernel, which
    then reports failure through its own ``ok`` flag.
    """

    def kernel(pts):
        n = pts.shape[0]
        gv = n
        cap = 4 * n + 64
        tv = np.empty((cap, 3), dtype=np.int64)
        tn = np.empty((cap, 3), dtype=np.int64)
        alive = np.zeros(cap, dtype=np.bool_)
        member_stamp = np.zeros(cap, dtype=np.int64)
        member_in = np.zeros(cap, dtype=np.bool_)
        by_second = np.zeros(n + 1, dtype=np.int64)
        by_third = np.zeros(n + 1, dtype=np.int64)
        second_stamp = np.zeros(n + 1, dtype=np.int64)
        third_stamp = np.zeros(n + 1, dtype=np.int64)
        stack = np.empty(cap, dtype=np.int64)
        carved = np.empty(cap, dtype=np.int64)
        bnd_u = np.empty(cap + 8, dtype=np.int64)
        bnd_v = np.empty(cap + 8, dtype=np.int64)
        bnd_nb = np.empty(cap + 8, dtype=np.int64)
        free = np.empty(cap, dtype=np.int64)
        nfree = 0
        ntri = 0

        # Bootstrap: first non-collinear triple (0, 1, k).
        i2 = -1
        ccw = 0
        for k in range(2, n):
            s, ok = orient(pts, 0, 1, k)
            if not ok:
                return tv, tn, alive, np.int64(0), False
            if s != 0:
                i2 = k
                ccw = s
                break
        if i2 < 0:
            # every point collinear with (0, 1); certified exactly
            return tv, tn, alive, np.int64(0), True

        a, b = (0, 1) if ccw > 0 else (1, 0)
        c = i2
        # real triangle plus its three hull ghosts; a ghost (u, v, gv) covers
        # the hull edge whose outside lies strictly left of u->v
        tv[0, 0], tv[0, 1], tv[0, 2] = a, b, c
        tv[1, 0], tv[1, 1], tv[1, 2] = b, a, gv
        tv[2, 0], tv[2, 1], tv[2, 2] = c, b, gv
        tv[3, 0], tv[3, 1], tv[3, 2] = a, c, gv
        tn[0, 0], tn[0, 1], tn[0, 2] = 2, 3, 1
        tn[1, 0], tn[1, 1], tn[1, 2] = 3, 2, 0
        tn[2, 0], tn[2, 1], tn[2, 2] = 1, 3, 0
        tn[3, 0], tn[3, 1], tn[3, 2] = 2, 1, 0
        alive[0] = alive[1] = alive[2] = alive[3] = True
        ntri = 4
        last_real = 0
        walk_cap = _WALK_CAP_FACTOR * (n + 8)

        for p in range(2, n):
            if p == i2:
                continue
            px = pts[p, 0]
            py = pts[p, 1]

            # -- locate: visibility walk from the last created real triangle
            t = last_real
            steps = 0
            while True:
                steps += 1
                if steps > walk_cap:
                    return tv, tn, alive, np.int64(0), False
                if tv[t, 0] == gv or tv[t, 1] == gv or tv[t, 2] == gv:
                    break  # p lies beyond this hull edge
                va, vb, vc = tv[t, 0], tv[t, 1], tv[t, 2]
                s, ok = orient(pts, va, vb, p)
                if not ok:
                    return tv, tn, alive, np.int64(0), False
                if s < 0:
                    t = tn[t, 2]
                    continue
                s, ok = orient(pts, vb, vc, p)
                if not ok:
                    return tv, tn, alive, np.int64(0), False
                if s < 0:
                    t = tn[t, 0]
                    continue
                s, ok = orient(pts, vc, va, p)
                if not ok:
                    return tv, tn, alive, np.int64(0), False
                if s < 0:
                    t = tn[t, 1]
                    continue
                break  # inside or on the boundary of t

            # -- grow the cavity: triangles whose (perturbed) circumdisk
            #    contains p; a ghost is carved when p lies beyond its hull
            #    edge, or exactly on the hull line strictly between the ends
            member_in[t] = True
            member_stamp[t] = p
            carved[0] = t
            ncarved = 1
            stack[0] = t
            nstack = 1
            while nstack > 0:
                nstack -= 1
                cur = stack[nstack]
                for k in range(3):
                    nb = tn[cur, k]
                    if member_stamp[nb] == p:
                        continue
                    member_stamp[nb] = p
                    g = -1
                    if tv[nb, 0] == gv:
                        g = 0
                    elif tv[nb, 1] == gv:
                        g = 1
                    elif tv[nb, 2] == gv:
                        g = 2
                    if g >= 0:
                        u = tv[nb, (g + 1) % 3]
                        v = tv[nb, (g + 2) % 3]
                        s, ok = orient(pts, u, v, p)
                        if not ok:
                            return tv, tn, alive, np.int64(0), False
                        if s > 0:
                            inside = True
                        elif s < 0:
                            inside = False
                        else:
                            # exact comparisons on the dominant axis
                            ux, uy = pts[u, 0], pts[u, 1]
                            vx, vy = pts[v, 0], pts[v, 1]
                            if abs(vx - ux) >= abs(vy - uy):
                                lo, hi = (ux, vx) if ux < vx else (vx, ux)
                                inside = lo < px < hi
                            else:
                                lo, hi = (uy, vy) if uy < vy else (vy, uy)
                                inside = lo < py < hi
                    else:
                        s, ok = incirc(pts, tv[nb, 0], tv[nb, 1], tv[nb, 2], p)
                        if not ok:
                            return tv, tn, alive, np.int64(0), False
                        inside = s > 0
                    member_in[nb] = inside
                    if inside:
                        carved[ncarved] = nb
                        ncarved += 1
                        stack[nstack] = nb
                        nstack += 1

            # -- boundary fan: every carved-triangle edge that faces a kept
            #    triangle spawns the new triangle (p, u, v).  A certified
            #    cavity is a disk, so nbnd == ncarved + 2; the bound check is
            #    armor against ever writing past the preallocated arrays
            nbnd = 0
            for ci in range(ncarved):
                ct = carved[ci]
                for k in range(3):
                    nb = tn[ct, k]
                    if member_stamp[nb] == p and member_in[nb]:
                        continue
                    if nbnd >= bnd_u.shape[0]:
                        return tv, tn, alive, np.int64(0), False
                    bnd_u[nbnd] = tv[ct, (k + 1) % 3]
                    bnd_v[nbnd] = tv[ct, (k + 2) % 3]
                    bnd_nb[nbnd] = nb
                    nbnd += 1
                alive[ct] = False
                free[nfree] = ct
                nfree += 1

            for e in range(nbnd):
                if nfree > 0:
                    nfree -= 1
                    slot = free[nfree]
                else:
                    if ntri >= cap:
                        newcap = 2 * cap
                        tv2 = np.empty((newcap, 3), dtype=np.int64)
                        tn2 = np.empty((newcap, 3), dtype=np.int64)
                        alive2 = np.zeros(newcap, dtype=np.bool_)
                        ms2 = np.zeros(newcap, dtype=np.int64)
                        mi2 = np.zeros(newcap, dtype=np.bool_)
                        st2 = np.empty(newcap, dtype=np.int64)
                        cv2 = np.empty(newcap, dtype=np.int64)
                        bu2 = np.empty(newcap + 8, dtype=np.int64)
                        bv2 = np.empty(newcap + 8, dtype=np.int64)
                        bn2 = np.empty(newcap + 8, dtype=np.int64)
                        fr2 = np.empty(newcap, dtype=np.int64)
                        tv2[:cap] = tv
                        tn2[:cap] = tn
                        alive2[:cap] = alive
                        ms2[:cap] = member_stamp
                        mi2[:cap] = member_in
                        bu2[:nbnd] = bnd_u[:nbnd]
                        bv2[:nbnd] = bnd_v[:nbnd]
                        bn2[:nbnd] = bnd_nb[:nbnd]
                        fr2[:nfree] = free[:nfree]
                        tv, tn, alive = tv2, tn2, alive2
                        member_stamp, member_in = ms2, mi2
                        stack, carved, free = st2, cv2, fr2
                        bnd_u, bnd_v, bnd_nb = bu2, bv2, bn2
                        cap = newcap
                    slot = ntri
                    ntri += 1
                u = bnd_u[e]
                v = bnd_v[e]
                tv[slot, 0] = p
                tv[slot, 1] = u
                tv[slot, 2] = v
                tn[slot, 0] = bnd_nb[e]
                alive[slot] = True
                by_second[u] = slot
                second_stamp[u] = p
                by_third[v] = slot
                third_stamp[v] = p
                nb = bnd_nb[e]
                for k in range(3):
                    if tv[nb, (k + 1) % 3] == v and tv[nb, (k + 2) % 3] == u:
                        tn[nb, k] = slot
                        break
                if u != gv and v != gv:
                    last_real = slot
            for e in range(nbnd):
                u = bnd_u[e]
                v = bnd_v[e]
                if second_stamp[v] != p or third_stamp[u] != p:
                    return tv, tn, alive, np.int64(0), False
                slot = by_second[u]
                tn[slot, 1] = by_second[v]
                tn[slot, 2] = by_third[u]

        return tv, tn, alive, np.int64(ntri), True

    if compile_it:
        return _accel.jit(cache=False)(kernel)
    return kernel


_kernel_exact = _make_kernel(_orient_exact_idx, _incircle_sos_idx, False)
_kernel_fast = None
if _accel.HAVE_NUMBA:
    _kernel_fast = _make_kernel(orient2d_filtered, incircle_filtered, True)

# The compiled kernel cannot be disk-cached (numba does not cache closures),
# so compilation costs a few seconds per process.  Small inputs go straight
# to the exact path, which beats the compile time outright; once the fast
# kernel is built it serves everything.  Both paths return identical
# triangulations wherever the fast one completes.
_FAST_PATH_MIN = 200
_fast_ready = False


def _triangulate_raw(pts):
    """Triangulate an (n, 2) float64 array; fast path first, exact on abort.

    Returns the (m, 3) CCW triangle index array in canonical order (lowest
    vertex first within each row, rows lexicographically sorted).
    """
    global _fast_ready
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    n = pts.shape[0]
    if n < 3:
        raise DegenerateInputError(f"need at least 3 points, got {n}")
    res = None
    if _accel.use_numba() and _kernel_fast is not None \
            and (_fast_ready or n >= _FAST_PATH_MIN):
        tv, tn, alive, ntri, ok = _kernel_fast(pts)
        _fast_ready = True
        if ok:
            res = (tv, alive, int(ntri))
    if res is None:
        tv, tn, alive, ntri, ok = _kernel_exact(pts)
        if not ok:
            raise RuntimeError("triangulation failed on the exact path")
        res = (tv, alive, int(ntri))
    tv, alive, ntri = res
    if ntri == 0:
        raise DegenerateInputError("all points are collinear")
    tri = np.asarray(tv[:ntri])[np.asarray(alive[:ntri])]
    tri = tri[(tri != n).all(axis=1)]
    rot = tri.argmin(axis=1)
    rows = np.arange(len(tri))
    tri = np.stack([tri[rows, rot], tri[rows, (rot + 1) % 3],
                    tri[rows, (rot + 2) % 3]], axis=1)
    return tri[np.lexsort((tri[:, 2], tri[:, 1], tri[:, 0]))]


class Triangulation:
    """Result of :func:`delaunay`: CCW triangles over a PointSet."""

    __slots__ = ("vertices", "triangles", "_edges", "_edge_tris")

    def __init__(self, vertices, triangles):
        self.vertices = vertices
        tri = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        tri.setflags(write=False)
        self.triangles = tri
        self._edges = None
        self._edge_tris = None

    def __repr__(self):
        return (f"Triangulation({len(self.vertices)} vertices, "
                f"{len(self.triangles)} triangles)")

    def _build_edges(self):
        tri = self.triangles
        e = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
        tid = np.tile(np.arange(len(tri)), 3)
        e = np.sort(e, axis=1)
        order = np.lexsort((e[:, 1], e[:, 0]))
        e = e[order]
        tid = tid[order]
        uniq, start = np.unique(e, axis=0, return_index=True)
        counts = np.diff(np.append(start, len(e)))
        if np.any(counts > 2):
            raise AssertionError("edge incident to more than two triangles")
        adj = np.full((len(uniq), 2), -1, dtype=np.int64)
        adj[:, 0] = tid[start]
        two = counts == 2
        adj[two, 1] = tid[start[two] + 1]
        uniq.setflags(write=False)
        adj.setflags(write=False)
        self._edges = uniq
        self._edge_tris = adj

    @property
    def edges(self):
        """Unique undirected edges (E, 2), i < j, lexicographically sorted."""
        if self._edges is None:
            self._build_edges()
        return self._edges

    @property
    def edge_triangles(self):
        """(E, 2) incident triangle ids per edge; -1 on the hull side."""
        if self._edge_tris is None:
            self._build_edges()
        return self._edge_tris

    def edge_set(self):
        return {(int(i), int(j)) for i, j in self.edges}


def delaunay(ps):
    """Delaunay triangulation of a PointSet (>= 3 points, not all collinear).

    Every triangle's open circumdisk is empty of other input points under
    exact arithmetic.  Cocircular configurations resolve deterministically:
    for a cocircular quad the diagonal through the lowest vertex index wins.
    """
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    tri = _triangulate_raw(ps.points)
    return Triangulation(ps, tri)


def voronoi_vertices(t):
    """Circumcenters of the triangulation's triangles, in triangle order."""
    centers, _ = circumcenters(t.vertices.points, t.triangles)
    return centers
