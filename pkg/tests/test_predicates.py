"""Orientation / in-circle predicate tests against a rational oracle."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvebench.predicates import incircle, incircle_sos, orient2d

coord = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False,
                  allow_infinity=False)


def orient_oracle(ax, ay, bx, by, cx, cy):
    det = (Fraction(ax) - Fraction(cx)) * (Fraction(by) - Fraction(cy)) \
        - (Fraction(ay) - Fraction(cy)) * (Fraction(bx) - Fraction(cx))
    return (det > 0) - (det < 0)


def incircle_oracle(ax, ay, bx, by, cx, cy, dx, dy):
    fax, fay = Fraction(ax) - Fraction(dx), Fraction(ay) - Fraction(dy)
    fbx, fby = Fraction(bx) - Fraction(dx), Fraction(by) - Fraction(dy)
    fcx, fcy = Fraction(cx) - Fraction(dx), Fraction(cy) - Fraction(dy)
    det = (fax * fax + fay * fay) * (fbx * fcy - fcx * fby) \
        + (fbx * fbx + fby * fby) * (fcx * fay - fax * fcy) \
        + (fcx * fcx + fcy * fcy) * (fax * fby - fbx * fay)
    return (det > 0) - (det < 0)


def test_orient2d_unit_cases():
    assert orient2d(0, 0, 1, 0, 0, 1) == 1
    assert orient2d(0, 0, 1, 0, 2, 0) == 0
    # tiny below the axis: must not be flipped by rounding
    assert orient2d(0, 0, 1, 0, 0.5, -1e-12) == -1
    assert orient_oracle(0, 0, 1, 0, 0.5, -1e-12) == -1


def test_orient2d_near_degenerate_matches_oracle():
    # points nearly on the line y = x, offsets at the last few ulps
    base = 1.0
    for k in range(-5, 6):
        c = (0.5, 0.5 + k * np.spacing(0.5))
        got = orient2d(0.0, 0.0, base, base, c[0], c[1])
        want = orient_oracle(0.0, 0.0, base, base, c[0], c[1])
        assert got == want


def test_orient2d_rejects_non_finite():
    with pytest.raises(ValueError):
        orient2d(0, 0, 1, np.nan, 2, 2)
    with pytest.raises(ValueError):
        orient2d(np.inf, 0, 1, 0, 2, 2)


@given(coord, coord, coord, coord, coord, coord)
@settings(max_examples=200)
def test_orient2d_antisymmetry(ax, ay, bx, by, cx, cy):
    assert orient2d(ax, ay, bx, by, cx, cy) == -orient2d(bx, by, ax, ay, cx, cy)


@given(coord, coord, coord, coord, coord, coord)
@settings(max_examples=200)
def test_orient2d_matches_oracle(ax, ay, bx, by, cx, cy):
    assert orient2d(ax, ay, bx, by, cx, cy) == orient_oracle(ax, ay, bx, by, cx, cy)


def test_incircle_unit_right_triangle():
    # circumcircle of (0,0),(1,0),(0,1) passes through (1,1)
    assert incircle(0, 0, 1, 0, 0, 1, 1, 1) == 0
    assert incircle(0, 0, 1, 0, 0, 1, 0.5, 0.5) == 1
    assert incircle(0, 0, 1, 0, 0, 1, 2, 2) == -1
    assert incircle_oracle(0, 0, 1, 0, 0, 1, 2, 2) == -1


def test_incircle_rejects_non_finite():
    with pytest.raises(ValueError):
        incircle(0, 0, 1, 0, 0, 1, np.nan, 0)


@given(coord, coord, coord, coord, coord, coord, coord, coord)
@settings(max_examples=200)
def test_incircle_matches_oracle(ax, ay, bx, by, cx, cy, dx, dy):
    assert incircle(ax, ay, bx, by, cx, cy, dx, dy) == \
        incircle_oracle(ax, ay, bx, by, cx, cy, dx, dy)


@given(coord, coord, coord, coord, coord, coord, coord, coord)
@settings(max_examples=200)
def test_incircle_cyclic_invariance(ax, ay, bx, by, cx, cy, dx, dy):
    s1 = incircle(ax, ay, bx, by, cx, cy, dx, dy)
    s2 = incircle(bx, by, cx, cy, ax, ay, dx, dy)
    s3 = incircle(cx, cy, ax, ay, bx, by, dx, dy)
    assert s1 == s2 == s3


def test_incircle_near_cocircular_matches_oracle():
    # d walks across the circumcircle of the unit right triangle in ulps
    for k in range(-4, 5):
        dy = 1.0 + k * np.spacing(1.0)
        got = incircle(0, 0, 1, 0, 0, 1, 1.0, dy)
        want = incircle_oracle(0, 0, 1, 0, 0, 1, 1.0, dy)
        assert got == want


def test_incircle_sos_square_prefers_lowest_index():
    # cocircular quad: the perturbed test pulls the lowest index inward, so
    # the kept diagonal passes through it
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    assert incircle(0, 0, 1, 0, 1, 1, 0, 1) == 0
    # triangle (0,1,2) must NOT swallow vertex 3 -> diagonal (0,2) survives
    assert incircle_sos(pts, 0, 1, 2, 3) == -1
    # triangle (1,2,3) would be carved by vertex 0
    assert incircle_sos(pts, 1, 2, 3, 0) == 1


def test_incircle_sos_never_zero_on_cocircular_polygon():
    th = np.linspace(0, 2 * np.pi, 12, endpoint=False)
    pts = np.stack([np.cos(th), np.sin(th)], axis=1)
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b, c, d = map(int, rng.choice(12, size=4, replace=False))
        if orient2d(*pts[a], *pts[b], *pts[c]) < 0:
            a, b = b, a
        s = incircle_sos(pts, a, b, c, d)
        assert s in (-1, 1)
