"""
Double-precision cross-oracle.

An independent floating-point tracer, sharing no code with the exact kernel,
used only to cross-check bounce counts and evasion witnesses.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from billiards.core.billiard import Trajectory
from billiards.core.family import FamilyIndex, FamilyParams
from billiards.core.geometry import Point
from billiards.core.qfield import to_float

SNAP = 1e-9


class FloatCorner(Exception):
    pass


def family_polygon(params: FamilyParams) -> np.ndarray:
    a = params.alpha.to_float()
    low, high = 1.0 - float(params.L1), 1.0 + float(params.L2)
    return np.array(
        [(-a, low), (a, low), (a, 1.0), (1.0, 1.0), (1.0, high), (-1.0, high), (-1.0, 1.0), (-a, 1.0)],
        dtype=float,
    )


def float_trace(
    vertices: np.ndarray,
    start: Sequence[float],
    direction: Sequence[float],
    target: Sequence[float],
    max_bounces: int,
    eps: float = SNAP,
) -> Tuple[np.ndarray, bool]:
    """Chain of points from start; second value says whether target was reached."""
    a = vertices
    b = np.roll(vertices, -1, axis=0)
    e = b - a
    pos = np.asarray(start, dtype=float)
    d = np.asarray(direction, dtype=float)
    tgt = np.asarray(target, dtype=float)
    chain: List[np.ndarray] = [pos]
    skip: Optional[int] = None

    for _ in range(max_bounces + 1):
        denom = d[0] * e[:, 1] - d[1] * e[:, 0]
        ao = a - pos
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (ao[:, 0] * e[:, 1] - ao[:, 1] * e[:, 0]) / denom
            u = (ao[:, 0] * d[1] - ao[:, 1] * d[0]) / denom
        valid = (np.abs(denom) > 1e-15) & (t > eps) & (u >= -eps) & (u <= 1 + eps)
        if skip is not None:
            valid[skip] = False
        if not valid.any():
            raise FloatCorner("ray escaped the polygon")
        k = int(np.argmin(np.where(valid, t, np.inf)))
        hit = pos + t[k] * d

        rel = tgt - pos
        along = rel @ d
        if abs(rel[0] * d[1] - rel[1] * d[0]) <= eps * np.linalg.norm(d) and 0 < along <= t[k] * (d @ d) + eps:
            chain.append(tgt)
            return np.array(chain), True
        if np.min(np.linalg.norm(vertices - hit, axis=1)) <= eps:
            raise FloatCorner(f"vertex hit near {hit}")

        w = e[k]
        d = 2 * (d @ w) / (w @ w) * w - d
        pos, skip = hit, k
        chain.append(hit)
    return np.array(chain), False


def float_trace_counts(params: FamilyParams, idx: FamilyIndex, slit: float = 1.0) -> Tuple[int, int]:
    """(bounces below, bounces above) the slit for gamma_idx in double precision."""
    a = params.alpha.to_float()
    chain, reached = float_trace(
        family_polygon(params),
        (0.0, 0.0),
        (idx.p + idx.q * a, 1.0),
        (0.0, 2.0),
        max_bounces=4 * (idx.p + idx.q) + 16,
    )
    if not reached:
        raise FloatCorner(f"gamma_{idx.n} did not reach A in double precision")
    bounce_heights = chain[1:-1, 1]
    return int(np.sum(bounce_heights < slit)), int(np.sum(bounce_heights > slit))


def _as_float(p: Point) -> np.ndarray:
    return np.array([to_float(p.x), to_float(p.y)])


def float_evades(traj: Trajectory, blockers: Sequence[Point], tol: float = SNAP) -> bool:
    """No blocker lies within tol of the trajectory's float image."""
    pts = np.array([_as_float(p) for p in traj.points()])
    starts, ends = pts[:-1], pts[1:]
    seg = ends - starts
    seg_len2 = np.maximum(np.einsum("ij,ij->i", seg, seg), 1e-300)
    for b in blockers:
        q = _as_float(b)
        t = np.clip(np.einsum("ij,ij->i", q - starts, seg) / seg_len2, 0.0, 1.0)
        nearest = starts + t[:, None] * seg
        if np.min(np.linalg.norm(nearest - q, axis=1)) <= tol:
            return False
    return True
