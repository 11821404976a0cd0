"""
Unfolding: a folded billiard path becomes a straight line across reflected
copies of the table, and back again.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from billiards.core.billiard import (
    DEFAULT_MAX_BOUNCES,
    Bounce,
    CornerHit,
    Table,
    TraceResult,
    TraceStatus,
    Trajectory,
    departure_edges,
    nearest_hits,
    ray_parameter,
)
from billiards.core.errors import BilliardError, InvalidParams
from billiards.core.geometry import (
    Direction,
    HitClass,
    Point,
    Segment,
    reflect_direction,
)
from billiards.core.qfield import AlphaSpec, QElement, floor, sign

Matrix = Tuple[Tuple[QElement, QElement], Tuple[QElement, QElement]]


class IsometryKind(str, Enum):
    IDENTITY = "IDENTITY"
    COMPOSED = "COMPOSED"


@dataclass(frozen=True)
class Isometry:
    """p -> linear @ p + translation, linear orthogonal with determinant +-1."""

    linear: Matrix
    translation: Tuple[QElement, QElement]

    @classmethod
    def identity(cls, spec: AlphaSpec) -> "Isometry":
        one, zero = spec.one, spec.zero
        return cls(((one, zero), (zero, one)), (zero, zero))

    @classmethod
    def reflection(cls, a: Point, w: Direction) -> "Isometry":
        """Mirror in the line through a with direction w."""
        ww = w.norm2()
        xx = 2 * w.dx * w.dx / ww - 1
        xy = 2 * w.dx * w.dy / ww
        yy = 2 * w.dy * w.dy / ww - 1
        linear = ((xx, xy), (xy, yy))
        tx = a.x - (xx * a.x + xy * a.y)
        ty = a.y - (xy * a.x + yy * a.y)
        return cls(linear, (tx, ty))

    @property
    def kind(self) -> IsometryKind:
        (a, b), (c, d) = self.linear
        tx, ty = self.translation
        if a == 1 and d == 1 and not b and not c and not tx and not ty:
            return IsometryKind.IDENTITY
        return IsometryKind.COMPOSED

    def determinant(self) -> QElement:
        (a, b), (c, d) = self.linear
        return a * d - b * c

    def apply(self, p: Point) -> Point:
        (a, b), (c, d) = self.linear
        tx, ty = self.translation
        return Point(a * p.x + b * p.y + tx, c * p.x + d * p.y + ty)

    def apply_vector(self, v: Direction) -> Direction:
        (a, b), (c, d) = self.linear
        return Direction(a * v.dx + b * v.dy, c * v.dx + d * v.dy)

    def compose(self, inner: "Isometry") -> "Isometry":
        """self after inner."""
        (a, b), (c, d) = self.linear
        (e, f), (g, h) = inner.linear
        linear = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        tx, ty = inner.translation
        return Isometry(linear, (a * tx + b * ty + self.translation[0], c * tx + d * ty + self.translation[1]))

    def inverse(self) -> "Isometry":
        # Orthogonal linear part: inverse is the transpose.
        (a, b), (c, d) = self.linear
        tx, ty = self.translation
        return Isometry(((a, c), (b, d)), (-(a * tx + c * ty), -(b * tx + d * ty)))


@dataclass(frozen=True)
class UnfoldedLine:
    origin: Point
    direction: Direction
    copies: Tuple[Isometry, ...]
    terminal: Point

    def frames(self) -> List[Isometry]:
        """Identity frame followed by one cumulative frame per bounce."""
        return [Isometry.identity(self.origin.x.spec), *self.copies]

    @property
    def run(self) -> QElement:
        return self.terminal.x - self.origin.x

    @property
    def rise(self) -> QElement:
        return self.terminal.y - self.origin.y


@dataclass(frozen=True)
class FoldingWitness:
    epsilon: int
    k: int
    anchor: str = "O"


def wall_direction(b: Bounce) -> Direction:
    """Wall direction recovered from a bounce: incoming + outgoing, or normal to a head-on hit."""
    dx = b.incoming.dx + b.outgoing.dx
    dy = b.incoming.dy + b.outgoing.dy
    if dx or dy:
        return Direction(dx, dy)
    return Direction(-b.incoming.dy, b.incoming.dx)


def unfold(traj: Trajectory) -> UnfoldedLine:
    frame = Isometry.identity(traj.start.x.spec)
    copies = []
    for b in traj.bounces:
        frame = frame.compose(Isometry.reflection(b.point, wall_direction(b)))
        copies.append(frame)
    return UnfoldedLine(
        origin=traj.start,
        direction=traj.initial,
        copies=tuple(copies),
        terminal=frame.apply(traj.terminal),
    )


def fold(
    table: Table,
    origin: Point,
    d: Direction,
    rise: QElement,
    max_bounces: int = DEFAULT_MAX_BOUNCES,
) -> TraceResult:
    """Walk the straight unfolded segment through reflected table copies.

    Works in unfolded coordinates: each step maps the table by the current
    frame and intersects the fixed line with the copy's edges.
    """
    if sign(d.dy) <= 0:
        raise InvalidParams("fold needs an upward direction (dy > 0)")
    spec = origin.x.spec
    poly = table.polygon
    folded_edges = poly.edges
    frame = Isometry.identity(spec)
    back = frame
    t_end = rise / d.dy
    travelled = spec.zero
    pos = origin
    skip = tuple(departure_edges(poly, origin, d))
    bounces: List[Bounce] = []

    while True:
        copy_edges = [Segment(frame.apply(e.a), frame.apply(e.b)) for e in folded_edges]
        best = nearest_hits(copy_edges, pos, d, skip)
        remaining = t_end - travelled
        t_target = ray_parameter(pos, d, frame.apply(table.target_A))
        limit = best[0][1].t if best else remaining
        if t_target is not None and sign(t_target - limit) <= 0 and sign(t_target - remaining) <= 0:
            return Trajectory(origin, d, tuple(bounces), table.target_A, TraceStatus.REACHED_TARGET)
        if not best:
            raise BilliardError(f"unfolded line left copy {len(bounces)} of the table")
        t_hit = best[0][1].t
        if sign(t_hit - remaining) > 0:
            end = back.apply(pos.moved(d, remaining))
            status = TraceStatus.REACHED_TARGET if end == table.target_A else TraceStatus.BUDGET_EXHAUSTED
            return Trajectory(origin, d, tuple(bounces), end, status)
        edge_index, hit = best[0]
        if len(best) > 1 or hit.hit_class is HitClass.ENDPOINT:
            return CornerHit(at=back.apply(hit.point), after_bounces=len(bounces))
        if len(bounces) >= max_bounces:
            return Trajectory(origin, d, tuple(bounces), back.apply(pos), TraceStatus.BUDGET_EXHAUSTED)
        wall = folded_edges[edge_index]
        incoming = back.apply_vector(d)
        folded_point = back.apply(hit.point)
        bounces.append(Bounce(folded_point, edge_index, incoming, reflect_direction(incoming, wall.direction)))
        frame = frame.compose(Isometry.reflection(wall.a, wall.direction))
        back = frame.inverse()
        travelled = travelled + t_hit
        if sign(t_hit - remaining) == 0:
            return Trajectory(origin, d, tuple(bounces), folded_point, TraceStatus.BUDGET_EXHAUSTED)
        pos, skip = hit.point, (edge_index,)


def corridor_position(
    y: QElement, p: int, q: int, lam: QElement
) -> Tuple[QElement, QElement]:
    """Both parity candidates for the folded lower-chamber x at height y.

    y*(p + q*alpha) is reduced mod 2*alpha into [-alpha, alpha); an even number
    of wall hits keeps the sign, an odd number flips it.
    """
    spec = lam.spec
    alpha = spec.alpha
    x_unfolded = y * (p + q * alpha)
    k = floor((x_unfolded + alpha) / (2 * alpha))
    reduced = x_unfolded - 2 * k * alpha
    return reduced, -reduced
