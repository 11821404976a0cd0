"""Wire models for every JSON surface. Exact values travel as decimal-string rationals."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from billiards.core.billiard import Bounce, CornerHit, Table, TraceStatus, Trajectory, build_table
from billiards.core.blocking import BlockingSet, EvasionResult, NotFoundWithinBudget
from billiards.core.family import ApproximationRow, GammaReport
from billiards.core.geometry import Direction, Point, Polygon, reflect_direction
from billiards.core.qfield import AlphaSpec, QElement, to_decimal
from billiards.core.unfolding import Isometry, UnfoldedLine

try:
    import orjson as _orjson
except Exception:
    _orjson = None


def dumps(obj: Any) -> str:
    if isinstance(obj, BaseModel):
        obj = obj.model_dump(mode="json", by_alias=True, exclude_none=True)
    if _orjson:
        return _orjson.dumps(obj, option=_orjson.OPT_INDENT_2).decode("utf-8")
    return json.dumps(obj, indent=2)


def _pair(q: Fraction) -> List[str]:
    return [str(q.numerator), str(q.denominator)]


def _rational(pair: List[str]) -> Fraction:
    return Fraction(int(pair[0]), int(pair[1]))


class _Wire(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")


def _check_pair(v: List[str]) -> List[str]:
    if len(v) != 2:
        raise ValueError("rational must be [numerator, denominator]")
    num, den = int(v[0]), int(v[1])
    if den <= 0:
        raise ValueError("denominator must be positive")
    q = Fraction(num, den)
    return _pair(q)


class QElementModel(_Wire):
    r: List[str]
    s: List[str]
    decimal: Optional[str] = None

    @field_validator("r", "s")
    @classmethod
    def canonical_pair(cls, v: List[str]) -> List[str]:
        return _check_pair(v)

    @classmethod
    def from_domain(cls, q: QElement, digits: Optional[int] = None) -> "QElementModel":
        return cls(r=_pair(q.r), s=_pair(q.s), decimal=to_decimal(q, digits) if digits else None)

    def to_domain(self, spec: AlphaSpec) -> QElement:
        return QElement(_rational(self.r), _rational(self.s), spec)


class AlphaSpecModel(_Wire):
    u: List[str]
    v: List[str]

    @field_validator("u", "v")
    @classmethod
    def canonical_pair(cls, v: List[str]) -> List[str]:
        return _check_pair(v)

    @classmethod
    def from_domain(cls, spec: AlphaSpec) -> "AlphaSpecModel":
        return cls(u=_pair(spec.u), v=_pair(spec.v))

    def to_domain(self) -> AlphaSpec:
        return AlphaSpec(_rational(self.u), _rational(self.v))


class PointModel(_Wire):
    x: QElementModel
    y: QElementModel

    @classmethod
    def from_domain(cls, p: Point, digits: Optional[int] = None) -> "PointModel":
        return cls(x=QElementModel.from_domain(p.x, digits), y=QElementModel.from_domain(p.y, digits))

    def to_domain(self, spec: AlphaSpec) -> Point:
        return Point(self.x.to_domain(spec), self.y.to_domain(spec))


class DirectionModel(_Wire):
    dx: QElementModel
    dy: QElementModel

    @classmethod
    def from_domain(cls, d: Direction, digits: Optional[int] = None) -> "DirectionModel":
        return cls(dx=QElementModel.from_domain(d.dx, digits), dy=QElementModel.from_domain(d.dy, digits))

    def to_domain(self, spec: AlphaSpec) -> Direction:
        return Direction(self.dx.to_domain(spec), self.dy.to_domain(spec))


class PolygonModel(_Wire):
    vertices: List[PointModel]

    @classmethod
    def from_domain(cls, poly: Polygon, digits: Optional[int] = None) -> "PolygonModel":
        return cls(vertices=[PointModel.from_domain(v, digits) for v in poly.vertices])

    def to_domain(self, spec: AlphaSpec) -> Polygon:
        return Polygon(tuple(v.to_domain(spec) for v in self.vertices))


class TableModel(_Wire):
    alpha: AlphaSpecModel
    polygon: PolygonModel
    O: PointModel
    A: PointModel

    @classmethod
    def from_domain(cls, table: Table, digits: Optional[int] = None) -> "TableModel":
        return cls(
            alpha=AlphaSpecModel.from_domain(table.spec),
            polygon=PolygonModel.from_domain(table.polygon, digits),
            O=PointModel.from_domain(table.origin_O, digits),
            A=PointModel.from_domain(table.target_A, digits),
        )

    def to_domain(self) -> Table:
        spec = self.alpha.to_domain()
        return build_table(self.polygon.to_domain(spec), self.O.to_domain(spec), self.A.to_domain(spec))


class BounceModel(_Wire):
    point: PointModel
    edge: int


class TrajectoryModel(_Wire):
    start: PointModel
    direction: DirectionModel
    bounces: List[BounceModel]
    terminal: PointModel
    status: TraceStatus

    @classmethod
    def from_domain(cls, traj: Trajectory, digits: Optional[int] = None) -> "TrajectoryModel":
        return cls(
            start=PointModel.from_domain(traj.start, digits),
            direction=DirectionModel.from_domain(traj.initial, digits),
            bounces=[BounceModel(point=PointModel.from_domain(b.point, digits), edge=b.edge_index) for b in traj.bounces],
            terminal=PointModel.from_domain(traj.terminal, digits),
            status=traj.status,
        )

    def to_domain(self, table: Table) -> Trajectory:
        """Headings are recomputed from the table's walls."""
        spec = table.spec
        edges = table.polygon.edges
        heading = self.direction.to_domain(spec)
        initial = heading
        bounces = []
        for b in self.bounces:
            outgoing = reflect_direction(heading, edges[b.edge].direction)
            bounces.append(Bounce(b.point.to_domain(spec), b.edge, heading, outgoing))
            heading = outgoing
        return Trajectory(
            self.start.to_domain(spec), initial, tuple(bounces), self.terminal.to_domain(spec), self.status
        )


class CornerHitModel(_Wire):
    error: Literal["corner_hit"] = "corner_hit"
    at: PointModel
    after_bounces: int

    @classmethod
    def from_domain(cls, corner: CornerHit, digits: Optional[int] = None) -> "CornerHitModel":
        return cls(at=PointModel.from_domain(corner.at, digits), after_bounces=corner.after_bounces)


class IsometryModel(_Wire):
    linear: List[List[QElementModel]]
    translation: List[QElementModel]

    @classmethod
    def from_domain(cls, iso: Isometry) -> "IsometryModel":
        return cls(
            linear=[[QElementModel.from_domain(c) for c in row] for row in iso.linear],
            translation=[QElementModel.from_domain(c) for c in iso.translation],
        )

    def to_domain(self, spec: AlphaSpec) -> Isometry:
        (a, b), (c, d) = [[q.to_domain(spec) for q in row] for row in self.linear]
        tx, ty = [q.to_domain(spec) for q in self.translation]
        return Isometry(((a, b), (c, d)), (tx, ty))


class UnfoldedLineModel(_Wire):
    origin: PointModel
    direction: DirectionModel
    copies: List[IsometryModel]
    terminal: PointModel

    @classmethod
    def from_domain(cls, line: UnfoldedLine, digits: Optional[int] = None) -> "UnfoldedLineModel":
        return cls(
            origin=PointModel.from_domain(line.origin, digits),
            direction=DirectionModel.from_domain(line.direction, digits),
            copies=[IsometryModel.from_domain(c) for c in line.copies],
            terminal=PointModel.from_domain(line.terminal, digits),
        )


class GammaReportModel(_Wire):
    n: Optional[int] = None
    q: Optional[int] = None
    p: Optional[int] = None
    lambda_: Optional[QElementModel] = Field(default=None, alias="lambda")
    lower_bounces: Optional[int] = None
    crossing: Optional[PointModel] = None
    upper_bounces: Optional[int] = None
    terminal: Optional[PointModel] = None
    ok: bool
    error: Optional[str] = None

    @classmethod
    def from_domain(cls, report: GammaReport, digits: Optional[int] = None) -> "GammaReportModel":
        idx = report.index
        return cls(
            n=idx.n if idx else None,
            q=idx.q if idx else None,
            p=idx.p if idx else None,
            lambda_=QElementModel.from_domain(idx.lam, digits) if idx else None,
            lower_bounces=report.lower_bounces,
            crossing=PointModel.from_domain(report.crossing, digits) if report.crossing else None,
            upper_bounces=report.upper_bounces,
            terminal=PointModel.from_domain(report.terminal, digits) if report.terminal else None,
            ok=report.ok,
            error=report.error,
        )


class ApproximationRowModel(_Wire):
    n: int
    q: int
    p: int
    lambda_: QElementModel = Field(alias="lambda")
    ratio_error: QElementModel
    bound: List[str]
    bound_ok: bool

    @classmethod
    def from_domain(cls, row: ApproximationRow, digits: Optional[int] = None) -> "ApproximationRowModel":
        return cls(
            n=row.n,
            q=row.q,
            p=row.p,
            lambda_=QElementModel.from_domain(row.lam, digits),
            ratio_error=QElementModel.from_domain(row.ratio_error, digits),
            bound=_pair(row.bound),
            bound_ok=row.bound_ok,
        )


class BlockingSetModel(_Wire):
    points: List[PointModel] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, B: BlockingSet, digits: Optional[int] = None) -> "BlockingSetModel":
        return cls(points=[PointModel.from_domain(p, digits) for p in B.points])

    def to_points(self, spec: AlphaSpec) -> List[Point]:
        return [p.to_domain(spec) for p in self.points]


class EvasionResultModel(_Wire):
    witness_n: int
    checked_up_to: int
    trajectory: TrajectoryModel

    @classmethod
    def from_domain(cls, result: EvasionResult, digits: Optional[int] = None) -> "EvasionResultModel":
        return cls(
            witness_n=result.witness_n,
            checked_up_to=result.checked_up_to,
            trajectory=TrajectoryModel.from_domain(result.trajectory, digits),
        )


class BlockerTally(_Wire):
    blocker: int
    hits: int


class NotFoundModel(_Wire):
    error: Literal["not_found_within_budget"] = "not_found_within_budget"
    checked_up_to: int
    hit_tallies: List[BlockerTally]

    @classmethod
    def from_domain(cls, result: NotFoundWithinBudget) -> "NotFoundModel":
        return cls(
            checked_up_to=result.checked_up_to,
            hit_tallies=[BlockerTally(blocker=i, hits=c) for i, c in sorted(result.hit_tallies.items())],
        )


def parse_json(text: str) -> Dict[str, Any]:
    if _orjson:
        return _orjson.loads(text)
    return json.loads(text)


class FamilyReportModel(_Wire):
    ok: bool
    failed: List[int]
    reports: List[GammaReportModel]

    @classmethod
    def from_domain(cls, reports: List[GammaReport], digits: Optional[int] = None) -> "FamilyReportModel":
        failed = [r.index.n for r in reports if not r.ok]
        return cls(
            ok=not failed,
            failed=failed,
            reports=[GammaReportModel.from_domain(r, digits) for r in reports],
        )


class ApproximationReportModel(_Wire):
    ok: bool
    rows: List[ApproximationRowModel]

    @classmethod
    def from_domain(cls, rows: List[ApproximationRow], digits: Optional[int] = None) -> "ApproximationReportModel":
        return cls(
            ok=all(r.bound_ok for r in rows),
            rows=[ApproximationRowModel.from_domain(r, digits) for r in rows],
        )
