"""
Billiard tracer.

Iterated specular reflection inside a polygon table. Every decision is exact:
a ray that runs into a vertex (or ties between two edges) ends the trace with a
CornerHit value, since reflection at a corner is undefined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

from billiards.core.errors import (
    AmbiguousCrossing,
    BilliardError,
    CoincidentMarkedPoints,
    DirectionOutward,
    PointOutsideTable,
)
from billiards.core.geometry import (
    Direction,
    Hit,
    HitClass,
    Location,
    Point,
    Polygon,
    Segment,
    contains,
    cross,
    dot,
    on_segment,
    ray_hit,
    reflect_direction,
)
from billiards.core.qfield import QElement, sign
from billiards.core.utils.logging import get_logger

logger = get_logger("billiards.billiard")

DEFAULT_MAX_BOUNCES = 1_000_000

# Margins of the float screen, relative to the table's coordinate scale.
# Double rounding error on these inputs is around 1e-15.
SCREEN_TOL = 1e-9
SCREEN_PARALLEL = 1e-6


@dataclass(frozen=True)
class Table:
    polygon: Polygon
    origin_O: Point
    target_A: Point

    @property
    def spec(self):
        return self.polygon.spec


class TraceStatus(str, Enum):
    REACHED_TARGET = "REACHED_TARGET"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"


@dataclass(frozen=True)
class Bounce:
    point: Point
    edge_index: int
    incoming: Direction
    outgoing: Direction


@dataclass(frozen=True)
class Trajectory:
    start: Point
    initial: Direction
    bounces: Tuple[Bounce, ...]
    terminal: Point
    status: TraceStatus

    @property
    def final_direction(self) -> Direction:
        return self.bounces[-1].outgoing if self.bounces else self.initial

    def points(self) -> List[Point]:
        """Vertices of the chain: start, bounce points, terminal (not repeated)."""
        pts = [self.start] + [b.point for b in self.bounces]
        if self.terminal != pts[-1]:
            pts.append(self.terminal)
        return pts

    def segments(self) -> List[Tuple[Point, Point]]:
        pts = self.points()
        return list(zip(pts, pts[1:]))


@dataclass(frozen=True)
class CornerHit:
    at: Point
    after_bounces: int


TraceResult = Union[Trajectory, CornerHit]


def build_table(poly: Polygon, O: Point, A: Point) -> Table:
    for name, p in (("O", O), ("A", A)):
        if contains(poly, p) is Location.OUTSIDE:
            raise PointOutsideTable(f"marked point {name}={p} lies outside the table")
    if O == A:
        raise CoincidentMarkedPoints(f"O and A coincide at {O}")
    return Table(polygon=poly, origin_O=O, target_A=A)


def departure_edges(poly: Polygon, start: Point, d: Direction) -> List[int]:
    """Edges containing a boundary start point; d must point strictly inward from each."""
    edges = poly.edges_containing(start)
    for i in edges:
        # Interior lies to the left of every edge of a counterclockwise polygon.
        if sign(cross(poly.edges[i].direction, d)) <= 0:
            raise DirectionOutward(
                f"direction {d} leaves the table at {start} (edge {i})",
                hint="start on the boundary must head strictly inward",
            )
    return edges


def ray_parameter(origin: Point, d: Direction, p: Point) -> Optional[QElement]:
    """t > 0 with origin + t*d == p, or None."""
    offset = p - origin
    if sign(cross(offset, d)) != 0:
        return None
    along = dot(offset, d)
    if sign(along) <= 0:
        return None
    return along / d.norm2()


def nearest_hits(
    edges: Sequence[Segment], origin: Point, d: Direction, skip: Sequence[int]
) -> List[Tuple[int, Hit]]:
    """All edge hits sharing the minimal positive parameter."""
    best: List[Tuple[int, Hit]] = []
    for i, seg in enumerate(edges):
        if i in skip:
            continue
        hit = ray_hit(origin, d, seg)
        if hit is None:
            continue
        if not best:
            best = [(i, hit)]
            continue
        c = sign(hit.t - best[0][1].t)
        if c < 0:
            best = [(i, hit)]
        elif c == 0:
            best.append((i, hit))
    return best


class EdgeScreen:
    """Double-precision pre-selection of the next wall.

    A step is taken from the screen only when one edge is nearest by a clear
    margin, is hit well inside its span, and the target is clearly off the
    segment. The bounce point itself is always computed exactly; every other
    step goes through the exact search.
    """

    def __init__(self, poly: Polygon):
        self.tol = SCREEN_TOL * max(
            [1.0] + [abs(float(c)) for v in poly.vertices for c in (v.x, v.y)]
        )
        self.edges = []
        self.axis = []
        for e in poly.edges:
            ax, ay, bx, by = float(e.a.x), float(e.a.y), float(e.b.x), float(e.b.y)
            self.edges.append((ax, ay, bx - ax, by - ay, math.hypot(bx - ax, by - ay)))
            self.axis.append("x" if e.a.x == e.b.x else "y" if e.a.y == e.b.y else None)

    def ray(self, origin: Point, d: Direction) -> Optional[Tuple[float, float, float, float, float]]:
        try:
            x0, y0, dx, dy = float(origin.x), float(origin.y), float(d.dx), float(d.dy)
        except OverflowError:
            return None
        norm = math.hypot(dx, dy)
        if not norm or not math.isfinite(norm) or not math.isfinite(x0 + y0):
            return None
        return x0, y0, dx / norm, dy / norm, norm

    def nearest(self, ray, skip: Sequence[int]) -> Optional[int]:
        x0, y0, ux, uy, _ = ray
        tol = self.tol
        found = []
        for i, (ax, ay, ex, ey, length) in enumerate(self.edges):
            if i in skip:
                continue
            denom = ux * ey - uy * ex
            if abs(denom) <= SCREEN_PARALLEL * length:
                return None
            ox, oy = ax - x0, ay - y0
            t = (ox * ey - oy * ex) / denom
            w = (ox * uy - oy * ux) / denom * length
            if t < -tol or w < -tol or w > length + tol:
                continue
            found.append((t, i, t > tol and tol < w < length - tol))
        if not found:
            return None
        found.sort()
        t0, i0, clear = found[0]
        if not clear or (len(found) > 1 and found[1][0] - t0 <= tol):
            return None
        return i0

    def misses(self, ray, p: Point, end: Point) -> bool:
        """p is clearly off the segment from the ray origin to end."""
        x0, y0, ux, uy, _ = ray
        ox, oy = float(p.x) - x0, float(p.y) - y0
        if abs(ux * oy - uy * ox) > self.tol:
            return True
        along = ux * ox + uy * oy
        reach = ux * (float(end.x) - x0) + uy * (float(end.y) - y0)
        return along < -self.tol or along > reach + self.tol


def _screened_step(
    screen: EdgeScreen,
    edges: Sequence[Segment],
    pos: Point,
    heading: Direction,
    ratios: Tuple[Optional[QElement], Optional[QElement]],
    target: Point,
    skip: Sequence[int],
) -> Optional[Tuple[int, Point]]:
    """(edge, exact interior bounce point) when the screen settles the step, else None."""
    ray = screen.ray(pos, heading)
    if ray is None:
        return None
    i = screen.nearest(ray, skip)
    if i is None:
        return None
    seg = edges[i]
    axis = screen.axis[i]
    if axis == "x" and ratios[0] is not None:
        hit_point = Point(seg.a.x, pos.y + (seg.a.x - pos.x) * ratios[0])
    elif axis == "y" and ratios[1] is not None:
        hit_point = Point(pos.x + (seg.a.y - pos.y) * ratios[1], seg.a.y)
    else:
        hit = ray_hit(pos, heading, seg)
        if hit is None or hit.hit_class is not HitClass.INTERIOR:
            return None
        hit_point = hit.point
    if not screen.misses(ray, target, hit_point):
        return None
    return i, hit_point


def _ratios(d: Direction) -> Tuple[Optional[QElement], Optional[QElement]]:
    """dy/dx and dx/dy, None where undefined."""
    return (d.dy / d.dx if d.dx else None, d.dx / d.dy if d.dy else None)


def trace(
    table: Table,
    start: Point,
    d: Direction,
    max_bounces: int = DEFAULT_MAX_BOUNCES,
) -> TraceResult:
    poly = table.polygon
    edges = poly.edges
    target = table.target_A
    skip = departure_edges(poly, start, d)
    pos, heading = start, d
    bounces: List[Bounce] = []
    screen = EdgeScreen(poly)
    ratios = _ratios(heading)

    while True:
        step = _screened_step(screen, edges, pos, heading, ratios, target, skip)
        if step is not None:
            if len(bounces) >= max_bounces:
                logger.debug("trace_budget_exhausted", bounces=len(bounces))
                return Trajectory(start, d, tuple(bounces), pos, TraceStatus.BUDGET_EXHAUSTED)
            edge_index, hit_point = step
            outgoing = reflect_direction(heading, edges[edge_index].direction)
            bounces.append(Bounce(hit_point, edge_index, heading, outgoing))
            # Reflection in an axis-parallel wall only flips the sign of both ratios.
            if screen.axis[edge_index] is None:
                ratios = _ratios(outgoing)
            else:
                ratios = tuple(None if k is None else -k for k in ratios)
            pos, heading, skip = hit_point, outgoing, (edge_index,)
            continue

        best = nearest_hits(edges, pos, heading, skip)
        if not best:
            raise BilliardError(f"ray from {pos} along {heading} escaped the table")
        t_hit = best[0][1].t
        t_target = ray_parameter(pos, heading, target)
        if t_target is not None and sign(t_target - t_hit) <= 0:
            logger.debug("trace_reached_target", bounces=len(bounces))
            return Trajectory(start, d, tuple(bounces), target, TraceStatus.REACHED_TARGET)
        edge_index, hit = best[0]
        if len(best) > 1 or hit.hit_class is HitClass.ENDPOINT:
            logger.debug("trace_corner_hit", bounces=len(bounces), at=str(hit.point))
            return CornerHit(at=hit.point, after_bounces=len(bounces))
        if len(bounces) >= max_bounces:
            logger.debug("trace_budget_exhausted", bounces=len(bounces))
            return Trajectory(start, d, tuple(bounces), pos, TraceStatus.BUDGET_EXHAUSTED)
        outgoing = reflect_direction(heading, edges[edge_index].direction)
        bounces.append(Bounce(hit.point, edge_index, heading, outgoing))
        pos, heading, skip = hit.point, outgoing, (edge_index,)
        ratios = _ratios(heading)


def reverse(table: Table, traj: Trajectory) -> TraceResult:
    """Trace back from the terminal toward the start, aiming at the start.

    A trajectory that stopped on its last bounce is walked back from that wall
    along the reversed incoming heading.
    """
    back = replace(table, origin_O=traj.terminal, target_A=traj.start)
    if traj.bounces and traj.terminal == traj.bounces[-1].point:
        heading, budget = -traj.bounces[-1].incoming, len(traj.bounces) - 1
    else:
        heading, budget = -traj.final_direction, len(traj.bounces)
    return trace(back, traj.terminal, heading, budget)


def passes_through(traj: Trajectory, p: Point) -> bool:
    pts = traj.points()
    if len(pts) == 1:
        return pts[0] == p
    return any(on_segment(p, Segment(a, b)) for a, b in zip(pts, pts[1:]))


def crossing_at_height(traj: Trajectory, y0: QElement) -> List[Point]:
    found: List[Point] = []
    pts = traj.points()
    sides = [sign(p.y - y0) for p in pts]
    for a, b, da, db in zip(pts, pts[1:], sides, sides[1:]):
        if da * db > 0:
            continue
        if da == 0 and db == 0:
            candidates = [a, b]
        elif da == 0:
            candidates = [a]
        elif db == 0:
            candidates = [b]
        else:
            t = (y0 - a.y) / (b.y - a.y)
            candidates = [Point(a.x + t * (b.x - a.x), y0)]
        for c in candidates:
            if not found or found[-1] != c:
                found.append(c)
    return found


def split_at(traj: Trajectory, p: Point) -> Optional[Tuple[int, int]]:
    """Bounces strictly before and strictly after the first visit of p, or None."""
    pts = traj.points()
    m = len(traj.bounces)
    for k, (a, b) in enumerate(zip(pts, pts[1:])):
        if not on_segment(p, Segment(a, b)):
            continue
        # Segment k runs from chain point k to k+1; bounce j is chain point j+1.
        if p == a and 1 <= k <= m:
            return k - 1, m - k
        if p == b and k + 1 <= m:
            return k, m - k - 1
        before = min(k, m)
        return before, m - before
    return None


def bounce_counts_split(traj: Trajectory, y0: QElement) -> Tuple[int, int]:
    crossings = crossing_at_height(traj, y0)
    if len(crossings) != 1:
        raise AmbiguousCrossing(
            f"trajectory crosses y={y0} {len(crossings)} times, expected exactly once"
        )
    split = split_at(traj, crossings[0])
    if split is None:
        raise BilliardError("crossing point is not on the trajectory")
    return split
