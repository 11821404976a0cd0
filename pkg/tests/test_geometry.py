import math
import random
from fractions import Fraction

import numpy as np
import pytest

from billiards.core.errors import InvalidPolygon
from billiards.core.geometry import (
    HitClass,
    Location,
    Segment,
    contains,
    direction,
    dot,
    on_segment,
    orient,
    point,
    polygon,
    ray_hit,
    reflect_direction,
    segments_intersect,
)
from billiards.core.qfield import SQRT2, qel, to_float

SEED = 0


def P(x, y):
    return point(x, y, SQRT2)


def D(dx, dy):
    return direction(dx, dy, SQRT2)


@pytest.fixture
def square():
    return polygon([P(0, 0), P(1, 0), P(1, 1), P(0, 1)])


def test_reflection_examples():
    assert reflect_direction(D(1, 1), D(1, 0)) == D(1, -1)
    assert reflect_direction(D(1, 1), D(0, 1)) == D(-1, 1)
    # A wall along the diagonal swaps the components.
    assert reflect_direction(D(SQRT2.alpha, 1), D(1, 1)) == direction(1, SQRT2.alpha, SQRT2)


def test_reflection_is_an_involution_and_keeps_length():
    rng = random.Random(SEED)
    for _ in range(100):
        d = D(qel(rng.randint(-9, 9), rng.randint(-9, 9)), qel(rng.randint(1, 9), rng.randint(-9, 9)))
        w = D(qel(rng.randint(-9, 9), rng.randint(-9, 9)), qel(rng.randint(1, 9), 0))
        r = reflect_direction(d, w)
        assert reflect_direction(r, w) == d
        assert r.norm2() == d.norm2()
        assert dot(r, w) == dot(d, w)


def test_ray_hit_interior():
    hit = ray_hit(P(0, 0), D(1, 0), Segment(P(1, -1), P(1, 1)))
    assert hit is not None
    assert hit.t == 1
    assert hit.point == P(1, 0)
    assert hit.hit_class is HitClass.INTERIOR


def test_ray_hit_endpoint_and_miss():
    hit = ray_hit(P(0, 0), D(1, 0), Segment(P(1, 0), P(1, 2)))
    assert hit.hit_class is HitClass.ENDPOINT
    assert hit.point == P(1, 0)
    assert ray_hit(P(0, 0), D(1, 0), Segment(P(-1, -1), P(-1, 1))) is None
    assert ray_hit(P(0, 0), D(1, 0), Segment(P(1, 1), P(2, 1))) is None


def test_ray_hit_collinear_reports_nearest_endpoint():
    hit = ray_hit(P(0, 0), D(1, 0), Segment(P(3, 0), P(2, 0)))
    assert hit.hit_class is HitClass.ENDPOINT
    assert hit.point == P(2, 0)
    assert hit.t == 2


def test_ray_hit_irrational_crossing():
    # Slope 1/(1 + sqrt2) from the origin meets x = sqrt2 at height 2 - sqrt2.
    a = SQRT2.alpha
    hit = ray_hit(P(0, 0), direction(1 + a, 1, SQRT2), Segment(P(a, -1), P(a, 1)))
    assert hit.point == point(a, 2 - a, SQRT2)


def test_orient_and_on_segment():
    assert orient(P(0, 0), P(1, 0), P(0, 1)) == 1
    assert orient(P(0, 0), P(0, 1), P(1, 0)) == -1
    assert orient(P(0, 0), P(1, 1), P(2, 2)) == 0
    seg = Segment(P(0, 0), P(2, 2))
    assert on_segment(P(1, 1), seg)
    assert on_segment(P(2, 2), seg)
    assert not on_segment(P(3, 3), seg)
    assert segments_intersect(seg, Segment(P(0, 2), P(2, 0)))
    assert not segments_intersect(seg, Segment(P(0, 1), P(-1, 2)))


def test_contains_square(square):
    assert contains(square, P(Fraction(1, 2), Fraction(1, 2))) is Location.INSIDE
    assert contains(square, P(1, Fraction(1, 2))) is Location.BOUNDARY
    assert contains(square, P(0, 0)) is Location.BOUNDARY
    assert contains(square, P(2, Fraction(1, 2))) is Location.OUTSIDE
    assert contains(square, P(Fraction(1, 2), 1)) is Location.BOUNDARY


def test_contains_family_table(table):
    a = SQRT2.alpha
    poly = table.polygon
    assert contains(poly, P(0, 0)) is Location.INSIDE
    assert contains(poly, P(0, 2)) is Location.INSIDE
    assert contains(poly, point(a - 1, 1, SQRT2)) is Location.INSIDE
    assert contains(poly, P(Fraction(6, 5), Fraction(3, 2))) is Location.OUTSIDE
    assert contains(poly, point(a, 0, SQRT2)) is Location.BOUNDARY
    assert contains(poly, P(Fraction(6, 5), 1)) is Location.BOUNDARY


def test_polygon_validation():
    with pytest.raises(InvalidPolygon):
        polygon([P(0, 0), P(1, 0)])
    with pytest.raises(InvalidPolygon):
        polygon([P(0, 0), P(0, 1), P(1, 1), P(1, 0)])  # clockwise
    with pytest.raises(InvalidPolygon):
        polygon([P(0, 0), P(1, 0), P(2, 0), P(1, 1)])  # collinear triple
    with pytest.raises(InvalidPolygon):
        polygon([P(0, 0), P(1, 0), P(1, 0), P(0, 1)])  # repeated vertex
    with pytest.raises(InvalidPolygon):
        # Counterclockwise overall but the last edge crosses the second.
        polygon([P(0, 0), P(4, 0), P(4, 4), P(1, -1), P(0, 4)])


def test_family_polygon_area(table):
    # Lower chamber 2*sqrt2 x 2 plus upper chamber 2 x 2.
    assert table.polygon.double_area() == 2 * (4 * SQRT2.alpha + 4)


def _float_inside(verts: np.ndarray, q: np.ndarray) -> bool:
    x, y = q
    a, b = verts, np.roll(verts, -1, axis=0)
    straddle = (a[:, 1] > y) != (b[:, 1] > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = a[:, 0] + (y - a[:, 1]) * (b[:, 0] - a[:, 0]) / (b[:, 1] - a[:, 1])
    return bool(np.count_nonzero(straddle & (xs > x)) % 2)


def _star_polygon(rng: random.Random):
    n = rng.randint(5, 12)
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
    if min(gaps) < 0.05 or max(gaps) > 3.0:
        return None
    verts = []
    for t in angles:
        r = rng.uniform(0.5, 3.0)
        verts.append(
            (Fraction(r * math.cos(t)).limit_denominator(1000), Fraction(r * math.sin(t)).limit_denominator(1000))
        )
    try:
        return polygon([P(x, y) for x, y in verts])
    except InvalidPolygon:
        return None


def _distance_to_boundary(verts: np.ndarray, q: np.ndarray) -> float:
    a, b = verts, np.roll(verts, -1, axis=0)
    e = b - a
    t = np.clip(np.einsum("ij,ij->i", q - a, e) / np.einsum("ij,ij->i", e, e), 0.0, 1.0)
    return float(np.min(np.linalg.norm(a + t[:, None] * e - q, axis=1)))


def test_contains_matches_float_crossing_on_star_polygons():
    rng = random.Random(SEED)
    checked = 0
    for _ in range(40):
        poly = _star_polygon(rng)
        if poly is None:
            continue
        verts = np.array([[to_float(v.x), to_float(v.y)] for v in poly.vertices])
        for _ in range(25):
            x = qel(Fraction(rng.randint(-400, 400), 100), Fraction(rng.randint(-20, 20), 100))
            y = qel(Fraction(rng.randint(-400, 400), 100), 0)
            q = np.array([to_float(x), to_float(y)])
            if _distance_to_boundary(verts, q) < 1e-6:
                continue
            expected = Location.INSIDE if _float_inside(verts, q) else Location.OUTSIDE
            assert contains(poly, point(x, y, SQRT2)) is expected
            checked += 1
    assert checked > 50


def test_predicates_accept_coincident_points(table):
    a = SQRT2.alpha
    p, q = P(1, 2), P(3, 5)
    assert orient(p, q, p) == 0
    assert orient(p, p, q) == 0
    assert (p - p).dx == 0
    seg = Segment(P(0, 0), P(2, 2))
    assert on_segment(P(0, 0), seg)
    corner = point(a, 1, SQRT2)
    assert contains(table.polygon, corner) is Location.BOUNDARY
    assert sorted(table.polygon.edges_containing(corner)) == [1, 2]
    with pytest.raises(ValueError):
        direction(0, 0, SQRT2)
