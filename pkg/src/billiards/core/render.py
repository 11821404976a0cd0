"""
SVG figures: the table, a folded trajectory, and the unfolded straight line
across reflected copies of the table.

Exact coordinates are printed through to_decimal; the y axis is flipped by a
single group transform so drawing code keeps mathematical orientation.
"""
from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

from billiards.core.billiard import Table, Trajectory
from billiards.core.geometry import Point
from billiards.core.qfield import to_decimal
from billiards.core.unfolding import UnfoldedLine

FONT = "'Segoe UI', Arial, sans-serif"
TABLE_FILL = "#F8FAFC"
TABLE_STROKE = "#1E293B"
COPY_STROKE = "#94A3B8"
PATH_STROKE = "#2563EB"
MARK_FILL = "#EAB308"
MARGIN = 0.25


def _num(value, digits: int) -> str:
    return to_decimal(value, digits)


def _xy(p: Point, digits: int) -> str:
    return f"{_num(p.x, digits)},{_num(p.y, digits)}"


def _bounds(points: Iterable[Point], digits: int) -> Tuple[float, float, float, float]:
    xs, ys = [], []
    for p in points:
        xs.append(float(_num(p.x, digits)))
        ys.append(float(_num(p.y, digits)))
    return min(xs), min(ys), max(xs), max(ys)


def _svg_open(points: Sequence[Point], digits: int) -> str:
    x0, y0, x1, y1 = _bounds(points, digits)
    w, h = x1 - x0 + 2 * MARGIN, y1 - y0 + 2 * MARGIN
    # After the flip, world y maps to -y, so the box starts at -(y1 + margin).
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{x0 - MARGIN:.6f} {-(y1 + MARGIN):.6f} {w:.6f} {h:.6f}" '
        f'font-family="{FONT}">\n'
        f'  <g transform="scale(1,-1)" stroke-linejoin="round">\n'
    )


def _svg_close() -> str:
    return "  </g>\n</svg>\n"


def _polygon_path(vertices: Sequence[Point], digits: int, *, stroke: str, fill: str) -> str:
    head, *rest = vertices
    cmds = [f"M {_xy(head, digits)}"] + [f"L {_xy(v, digits)}" for v in rest] + ["Z"]
    return f'    <path d="{" ".join(cmds)}" fill="{fill}" stroke="{stroke}" stroke-width="0.01"/>\n'


def _polyline(points: Sequence[Point], digits: int) -> str:
    coords = " ".join(_xy(p, digits) for p in points)
    return f'    <polyline points="{coords}" fill="none" stroke="{PATH_STROKE}" stroke-width="0.012"/>\n'


def _marker(p: Point, label: str, digits: int) -> str:
    return (
        f'    <circle cx="{_num(p.x, digits)}" cy="{_num(p.y, digits)}" r="0.03" fill="{MARK_FILL}">'
        f"<title>{label}</title></circle>\n"
    )


def render_table(table: Table, digits: int = 12) -> str:
    verts = list(table.polygon.vertices)
    return (
        _svg_open(verts, digits)
        + _polygon_path(verts, digits, stroke=TABLE_STROKE, fill=TABLE_FILL)
        + _marker(table.origin_O, "O", digits)
        + _marker(table.target_A, "A", digits)
        + _svg_close()
    )


def render_trajectory(table: Table, traj: Trajectory, digits: int = 12) -> str:
    verts = list(table.polygon.vertices)
    pts = traj.points()
    return (
        _svg_open(verts + pts, digits)
        + _polygon_path(verts, digits, stroke=TABLE_STROKE, fill=TABLE_FILL)
        + _polyline(pts, digits)
        + _marker(table.origin_O, "O", digits)
        + _marker(table.target_A, "A", digits)
        + _svg_close()
    )


def render_unfolded(table: Table, line: UnfoldedLine, digits: int = 12) -> str:
    """One closed path per table copy crossed, one straight polyline."""
    copies: List[List[Point]] = [
        [frame.apply(v) for v in table.polygon.vertices] for frame in line.frames()
    ]
    everything = [p for copy in copies for p in copy] + [line.origin, line.terminal]
    body = "".join(
        _polygon_path(copy, digits, stroke=COPY_STROKE if i else TABLE_STROKE, fill="none")
        for i, copy in enumerate(copies)
    )
    return (
        _svg_open(everything, digits)
        + body
        + _polyline([line.origin, line.terminal], digits)
        + _marker(line.origin, "O", digits)
        + _marker(line.terminal, "A'", digits)
        + _svg_close()
    )
