"""Exact planar primitives over Q(alpha)."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import List, NamedTuple, Optional, Sequence, Tuple

from billiards.core.errors import InvalidPolygon
from billiards.core.qfield import AlphaSpec, QElement, RationalLike, qel, sign


@dataclass(frozen=True)
class Point:
    x: QElement
    y: QElement

    def __add__(self, other: "Direction") -> "Point":
        return Point(self.x + other.dx, self.y + other.dy)

    def __sub__(self, other: "Point") -> "Direction":
        return _vector(self.x - other.x, self.y - other.y)

    def moved(self, d: "Direction", t: QElement) -> "Point":
        return Point(self.x + t * d.dx, self.y + t * d.dy)

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class Direction:
    """Unnormalized; unit vectors would leave the field."""

    dx: QElement
    dy: QElement

    def __post_init__(self):
        if not self.dx and not self.dy:
            raise ValueError("direction must be non-zero")

    def __neg__(self) -> "Direction":
        return _vector(-self.dx, -self.dy)

    def scaled(self, k: QElement) -> "Direction":
        return Direction(k * self.dx, k * self.dy)

    def norm2(self) -> QElement:
        return self.dx * self.dx + self.dy * self.dy

    def __str__(self) -> str:
        return f"<{self.dx}, {self.dy}>"


def _vector(dx: QElement, dy: QElement) -> Direction:
    """Displacement between points; may be zero, unlike a public Direction."""
    v = object.__new__(Direction)
    object.__setattr__(v, "dx", dx)
    object.__setattr__(v, "dy", dy)
    return v


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("segment endpoints must differ")

    @cached_property
    def direction(self) -> Direction:
        return Direction(self.b.x - self.a.x, self.b.y - self.a.y)


class HitClass(str, Enum):
    INTERIOR = "INTERIOR"
    ENDPOINT = "ENDPOINT"


class Location(str, Enum):
    INSIDE = "INSIDE"
    BOUNDARY = "BOUNDARY"
    OUTSIDE = "OUTSIDE"


class Hit(NamedTuple):
    t: QElement
    point: Point
    hit_class: HitClass


def point(x: RationalLike | QElement, y: RationalLike | QElement, spec: AlphaSpec) -> Point:
    """Point from QElements or plain rationals."""
    return Point(_lift(x, spec), _lift(y, spec))


def direction(dx: RationalLike | QElement, dy: RationalLike | QElement, spec: AlphaSpec) -> Direction:
    return Direction(_lift(dx, spec), _lift(dy, spec))


def _lift(value, spec: AlphaSpec) -> QElement:
    if isinstance(value, QElement):
        return value
    return qel(value, 0, spec)


def cross(u: Direction, v: Direction) -> QElement:
    return u.dx * v.dy - u.dy * v.dx


def dot(u: Direction, v: Direction) -> QElement:
    return u.dx * v.dx + u.dy * v.dy


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of (q - p) x (r - p): +1 counterclockwise, 0 collinear, -1 clockwise."""
    return sign(cross(q - p, r - p))


def on_segment(p: Point, seg: Segment) -> bool:
    """p lies on the closed segment: inside its bounding box and collinear."""
    a, b = seg.a, seg.b
    if sign(p.y - a.y) * sign(p.y - b.y) > 0 or sign(p.x - a.x) * sign(p.x - b.x) > 0:
        return False
    return orient(a, b, p) == 0


def segments_intersect(s1: Segment, s2: Segment) -> bool:
    """Closed segments share at least one point."""
    o1 = orient(s1.a, s1.b, s2.a)
    o2 = orient(s1.a, s1.b, s2.b)
    o3 = orient(s2.a, s2.b, s1.a)
    o4 = orient(s2.a, s2.b, s1.b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        on_segment(s2.a, s1)
        or on_segment(s2.b, s1)
        or on_segment(s1.a, s2)
        or on_segment(s1.b, s2)
    )


def reflect_direction(d: Direction, w: Direction) -> Direction:
    """Specular reflection of d at a wall with direction w: 2*proj_w(d) - d."""
    if not w.dx:
        return Direction(-d.dx, d.dy)
    if not w.dy:
        return Direction(d.dx, -d.dy)
    k = 2 * dot(d, w) / w.norm2()
    return Direction(k * w.dx - d.dx, k * w.dy - d.dy)


def ray_hit(origin: Point, d: Direction, seg: Segment) -> Optional[Hit]:
    """Smallest t > 0 with origin + t*d on seg.

    Collinear overlap reports the nearest endpoint ahead as an ENDPOINT hit.
    """
    if seg.a.x == seg.b.x and d.dx:
        return _axis_hit(origin, d, seg, vertical=True)
    if seg.a.y == seg.b.y and d.dy:
        return _axis_hit(origin, d, seg, vertical=False)
    e = seg.b - seg.a
    ao = seg.a - origin
    denom = cross(d, e)
    sd = sign(denom)
    if sd == 0:
        if sign(cross(ao, d)) != 0:
            return None
        dd = d.norm2()
        best: Optional[Hit] = None
        for end in (seg.a, seg.b):
            t = dot(end - origin, d) / dd
            if sign(t) > 0 and (best is None or sign(t - best.t) < 0):
                best = Hit(t, end, HitClass.ENDPOINT)
        return best
    num_t = cross(ao, e)
    if sign(num_t) != sd:
        return None
    num_u = cross(ao, d)
    su = sign(num_u)
    if su == -sd:
        return None
    rest = sign(denom - num_u)
    if rest == -sd:
        return None
    t = num_t / denom
    if su == 0:
        return Hit(t, seg.a, HitClass.ENDPOINT)
    if rest == 0:
        return Hit(t, seg.b, HitClass.ENDPOINT)
    return Hit(t, origin.moved(d, t), HitClass.INTERIOR)


def _axis_hit(origin: Point, d: Direction, seg: Segment, vertical: bool) -> Optional[Hit]:
    """ray_hit for an edge parallel to a coordinate axis and not parallel to d."""
    a, b = seg.a, seg.b
    if vertical:
        t = (a.x - origin.x) / d.dx
        if sign(t) <= 0:
            return None
        other, lo, hi = origin.y + t * d.dy, a.y, b.y
    else:
        t = (a.y - origin.y) / d.dy
        if sign(t) <= 0:
            return None
        other, lo, hi = origin.x + t * d.dx, a.x, b.x
    s_lo, s_hi = sign(other - lo), sign(other - hi)
    if s_lo == 0:
        return Hit(t, a, HitClass.ENDPOINT)
    if s_hi == 0:
        return Hit(t, b, HitClass.ENDPOINT)
    if s_lo == s_hi:
        return None
    p = Point(a.x, other) if vertical else Point(other, a.y)
    return Hit(t, p, HitClass.INTERIOR)


@dataclass(frozen=True)
class Polygon:
    """Simple counterclockwise polygon, validated exactly at construction."""

    vertices: Tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 3:
            raise InvalidPolygon(f"polygon needs at least 3 vertices, got {n}")
        for i in range(n):
            if verts[i] == verts[(i + 1) % n]:
                raise InvalidPolygon(f"consecutive vertices {i} and {(i + 1) % n} coincide")
        for i in range(n):
            if orient(verts[i - 1], verts[i], verts[(i + 1) % n]) == 0:
                raise InvalidPolygon(f"vertices around index {i} are collinear")
        if sign(self.double_area()) <= 0:
            raise InvalidPolygon("polygon must be counterclockwise")
        edges = self.edges
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    # Adjacent edges only meet at their shared vertex (no collinear triples).
                    continue
                if segments_intersect(edges[i], edges[j]):
                    raise InvalidPolygon(f"edges {i} and {j} intersect; polygon is not simple")

    @cached_property
    def edges(self) -> Tuple[Segment, ...]:
        n = len(self.vertices)
        return tuple(Segment(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n))

    def double_area(self) -> QElement:
        verts = self.vertices
        total = verts[0].x * 0
        for i, v in enumerate(verts):
            w = verts[(i + 1) % len(verts)]
            total = total + (v.x * w.y - v.y * w.x)
        return total

    @property
    def spec(self) -> AlphaSpec:
        return self.vertices[0].x.spec

    def edges_containing(self, p: Point) -> List[int]:
        return [i for i, seg in enumerate(self.edges) if on_segment(p, seg)]


def polygon(vertices: Sequence[Point]) -> Polygon:
    return Polygon(tuple(vertices))


def contains(poly: Polygon, p: Point) -> Location:
    """Boundary test first, then crossing number with half-open edge rule."""
    if poly.edges_containing(p):
        return Location.BOUNDARY
    inside = False
    for seg in poly.edges:
        a, b = seg.a, seg.b
        a_above = sign(a.y - p.y) > 0
        b_above = sign(b.y - p.y) > 0
        if a_above == b_above:
            continue
        o = orient(a, b, p)
        if b_above and o > 0:
            inside = not inside
        elif a_above and o < 0:
            inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE
