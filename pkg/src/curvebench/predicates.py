"""Exact planar orientation and in-circle tests.

Both predicates evaluate a floating-point determinant first and accept its
sign whenever the magnitude clears a forward error bound (the bounds are the
standard first-stage constants derived from the unit roundoff).  Inconclusive
cases fall back to rational arithmetic over ``fractions.Fraction``, which is
exact because every float is a dyadic rational.  The decision therefore never
depends on rounding.

``incircle_sos`` additionally breaks exact cocircular ties by an index-ordered
symbolic perturbation: conceptually every point ``i`` is lifted onto the
paraboloid and pulled down by an infinitesimal ``delta_i`` with
``delta_0 >> delta_1 >> ...``.  For a single cocircular quad this picks the
diagonal through the lowest vertex index, and it is globally consistent, so
the triangulation needs no degenerate special cases.
"""

from fractions import Fraction

import numpy as np

from ._accel import jit

_EPS = float(np.finfo(np.float64).eps) / 2.0  # unit roundoff 2**-53
CCW_ERR_A = (3.0 + 16.0 * _EPS) * _EPS
ICC_ERR_A = (10.0 + 96.0 * _EPS) * _EPS


def _check_finite(*vals):
    for v in vals:
        if not np.isfinite(v):
            raise ValueError(f"non-finite coordinate {v!r}")


def orient2d(ax, ay, bx, by, cx, cy):
    """Sign of the signed area of (a, b, c): +1 if c lies strictly left of
    the directed line a->b, -1 if right, 0 if collinear.  Exact."""
    _check_finite(ax, ay, bx, by, cx, cy)
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    if abs(det) > CCW_ERR_A * detsum:
        return 1 if det > 0 else -1
    return _orient2d_exact(ax, ay, bx, by, cx, cy)


def _orient2d_exact(ax, ay, bx, by, cx, cy):
    det = (Fraction(ax) - Fraction(cx)) * (Fraction(by) - Fraction(cy)) \
        - (Fraction(ay) - Fraction(cy)) * (Fraction(bx) - Fraction(cx))
    return (det > 0) - (det < 0)


def incircle(ax, ay, bx, by, cx, cy, dx, dy):
    """Sign test for d against the circumcircle of CCW (a, b, c): +1 strictly
    inside, -1 strictly outside, 0 cocircular.  Exact."""
    _check_finite(ax, ay, bx, by, cx, cy, dx, dy)
    adx = ax - dx
    bdx = bx - dx
    cdx = cx - dx
    ady = ay - dy
    bdy = by - dy
    cdy = cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = alift * (bdxcdy - cdxbdy) \
        + blift * (cdxady - adxcdy) \
        + clift * (adxbdy - bdxady)
    permanent = (abs(bdxcdy) + abs(cdxbdy)) * alift \
        + (abs(cdxady) + abs(adxcdy)) * blift \
        + (abs(adxbdy) + abs(bdxady)) * clift
    if abs(det) > ICC_ERR_A * permanent:
        return 1 if det > 0 else -1
    return _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy):
    fax, fay = Fraction(ax) - Fraction(dx), Fraction(ay) - Fraction(dy)
    fbx, fby = Fraction(bx) - Fraction(dx), Fraction(by) - Fraction(dy)
    fcx, fcy = Fraction(cx) - Fraction(dx), Fraction(cy) - Fraction(dy)
    det = (fax * fax + fay * fay) * (fbx * fcy - fcx * fby) \
        + (fbx * fbx + fby * fby) * (fcx * fay - fax * fcy) \
        + (fcx * fcx + fcy * fcy) * (fax * fby - fbx * fay)
    return (det > 0) - (det < 0)


def incircle_sos(pts, ia, ib, ic, id_):
    """Exact in-circle test that never returns 0.

    ``pts`` is the (n, 2) coordinate array; the arguments are row indices,
    with (ia, ib, ic) counter-clockwise.  Cocircular ties resolve as if point
    ``i`` sat at height ``x**2 + y**2 - delta_i`` on the lifting paraboloid,
    ``delta`` decreasing steeply in index.
    """
    s = incircle(pts[ia, 0], pts[ia, 1], pts[ib, 0], pts[ib, 1],
                 pts[ic, 0], pts[ic, 1], pts[id_, 0], pts[id_, 1])
    if s != 0:
        return s
    # Tie: the 4x4 lifted determinant vanishes.  Its derivative w.r.t.
    # delta at row k is (-1)**(k+1) times the orientation minor of the other
    # three rows; the smallest index with a nonzero minor decides.  Any four
    # distinct cocircular points have a non-collinear triple, so this always
    # terminates.
    rows = (ia, ib, ic, id_)
    row_sign = (-1, 1, -1, 1)
    for idx in sorted(range(4), key=lambda k: rows[k]):
        others = [rows[k] for k in range(4) if k != idx]
        m = _orient2d_exact(pts[others[0], 0], pts[others[0], 1],
                            pts[others[1], 0], pts[others[1], 1],
                            pts[others[2], 0], pts[others[2], 1])
        if m != 0:
            return row_sign[idx] * m
    raise AssertionError("degenerate cocircular quad with duplicate points")


# Filtered variants for the jitted triangulation kernel.  They return
# (sign, ok); ok=False means the float filter could not certify the sign and
# the caller must retry on the exact path above.

@jit
def orient2d_filtered(pts, i, j, k):
    detleft = (pts[i, 0] - pts[k, 0]) * (pts[j, 1] - pts[k, 1])
    detright = (pts[i, 1] - pts[k, 1]) * (pts[j, 0] - pts[k, 0])
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    if abs(det) > CCW_ERR_A * detsum:
        if det > 0.0:
            return 1, True
        return -1, True
    return 0, detsum == 0.0  # det exactly zero only when all terms vanish


@jit
def incircle_filtered(pts, ia, ib, ic, id_):
    adx = pts[ia, 0] - pts[id_, 0]
    bdx = pts[ib, 0] - pts[id_, 0]
    cdx = pts[ic, 0] - pts[id_, 0]
    ady = pts[ia, 1] - pts[id_, 1]
    bdy = pts[ib, 1] - pts[id_, 1]
    cdy = pts[ic, 1] - pts[id_, 1]

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = alift * (bdxcdy - cdxbdy) \
        + blift * (cdxady - adxcdy) \
        + clift * (adxbdy - bdxady)
    permanent = (abs(bdxcdy) + abs(cdxbdy)) * alift \
        + (abs(cdxady) + abs(adxcdy)) * blift \
        + (abs(adxbdy) + abs(bdxady)) * clift
    if abs(det) > ICC_ERR_A * permanent:
        if det > 0.0:
            return 1, True
        return -1, True
    return 0, False
