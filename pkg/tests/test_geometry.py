from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from exppairs.geometry import (DegenerateHullError, Polygon, ProjectiveMap, SingularMapError, clip_halfplane,
                               convex_hull, cross, orientation, segment_image_is_segment)
from exppairs.hull import vertex
from exppairs.pairs import A_MAP, B_MAP

from .strategies import points

IDENTITY = ProjectiveMap(((1, 0, 0), (0, 0, 1), (0, 1, 0)))


def test_square_drops_centre():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2))]
    assert convex_hull(sq) == [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_collinear_boundary_points_dropped():
    pts = [(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 2)]
    assert convex_hull(pts) == [(0, 0), (2, 0), (2, 2), (0, 2)]


def test_triangle_keeps_its_points():
    tri = [(F(3, 7), F(1, 5)), (F(-2, 3), F(4, 9)), (F(1, 11), F(-5, 2))]
    hull = convex_hull(tri)
    assert sorted(hull) == sorted(tri)
    assert hull[0] == min(tri)


def test_degenerate_inputs():
    with pytest.raises(DegenerateHullError):
        convex_hull([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(DegenerateHullError):
        convex_hull([(0, 0), (1, 1)])


def test_membership_examples():
    poly = Polygon.hull_of([(0, 0), (4, 0), (4, 2), (0, 2)])
    assert poly.contains((4, 2))
    assert not poly.contains((4, 2), strict=True)
    assert poly.contains((2, 1), strict=True)
    cx = sum(v[0] for v in poly.vertices) / len(poly)
    cy = sum(v[1] for v in poly.vertices) / len(poly)
    assert poly.contains((cx, cy))
    assert not poly.contains((F(41, 10), 1))
    assert poly.vertex_index((4, 0)) == 1


def test_clip_halfplane_square():
    sq = [(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1))]
    # keep k <= 1/2, written as g*k + h*l >= t
    out = clip_halfplane(sq, F(-1), F(0), F(-1, 2))
    assert sorted(out) == [(0, 0), (0, 1), (F(1, 2), 0), (F(1, 2), 1)]
    assert clip_halfplane(sq, F(1), F(1), F(2)) == [(1, 1)]
    assert clip_halfplane(sq, F(1), F(0), F(2)) == []


def test_map_examples():
    assert IDENTITY((F(1, 3), F(2, 3))) == (F(1, 3), F(2, 3))
    assert A_MAP((F(13, 84), F(55, 84))) == (F(13, 194), F(76, 97))
    assert B_MAP((0, 1)) == (F(1, 2), F(1, 2))


def test_singular_map_point():
    pm = ProjectiveMap(((1, 0, 0), (1, -1, 0), (0, 1, 0)))
    with pytest.raises(SingularMapError):
        pm((1, 1))


def test_segment_image_examples():
    affine = ProjectiveMap(((2, 1, 3), (0, 0, 1), (-1, 4, F(1, 2))))
    assert segment_image_is_segment(affine, (0, 0), (3, -7), 10)
    assert segment_image_is_segment(A_MAP, vertex(0), vertex(1), 20)
    pm = ProjectiveMap(((1, 0, 0), (1, 0, -1), (0, 1, 0)))  # phi2 = k - 1 vanishes at k = 1
    with pytest.raises(SingularMapError):
        segment_image_is_segment(pm, (0, 0), (2, 0), 8)


def test_compose_matches_sequential_application():
    ab = A_MAP.compose(B_MAP)
    p = (F(2, 13), F(35, 52))
    assert ab(p) == A_MAP(B_MAP(p))
    assert B_MAP.compose(B_MAP)(p) == p


@given(st.lists(points, min_size=3, max_size=40))
def test_hull_idempotent_convex_and_covering(pts):
    try:
        hull = convex_hull(pts)
    except DegenerateHullError:
        return
    assert convex_hull(hull) == hull
    n = len(hull)
    assert all(orientation(hull[i], hull[(i + 1) % n], hull[(i + 2) % n]) == 1 for i in range(n))
    poly = Polygon(tuple(hull))
    for p in pts:
        assert poly.contains(p)


@given(st.lists(points, min_size=3, max_size=25), points)
def test_binary_search_membership_matches_linear(pts, q):
    try:
        poly = Polygon.hull_of(pts)
    except DegenerateHullError:
        return
    for strict in (False, True):
        assert poly.contains(q, strict) == poly.contains_linear(q, strict)


coef = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(st.lists(coef, min_size=9, max_size=9), points, points)
def test_projective_quasilinearity(c, p1, p2):
    pm = ProjectiveMap((tuple(c[0:3]), tuple(c[3:6]), tuple(c[6:9])))
    d1, d2 = pm.phi(1, p1), pm.phi(1, p2)
    assume(d1 != 0 and d2 != 0 and (d1 > 0) == (d2 > 0))
    assert segment_image_is_segment(pm, p1, p2, 12)


def test_cross_sign_convention():
    assert cross((0, 0), (1, 0), (0, 1)) == 1
    assert orientation((0, 0), (0, 1), (1, 0)) == -1
