"""
Finite-blocking analyzer.

A finite blocking set for (O, A) would have to meet every trajectory from O to
A. For P_alpha each candidate set is evaded by some gamma_n; `evade` finds the
smallest such n by exact incidence tests.
"""
from __future__ import annotations

import concurrent.futures
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from billiards.core.billiard import Table, Trajectory, passes_through, split_at
from billiards.core.errors import InvalidBlockingSet
from billiards.core.family import FamilyIndex, gamma
from billiards.core.geometry import Location, Point, contains, point
from billiards.core.qfield import QElement, sign
from billiards.core.unfolding import FoldingWitness
from billiards.core.utils.logging import get_logger

logger = get_logger("billiards.blocking")


@dataclass(frozen=True)
class BlockingSet:
    points: Tuple[Point, ...] = ()


@dataclass(frozen=True)
class EvasionResult:
    witness_n: int
    trajectory: Trajectory
    checked_up_to: int


@dataclass(frozen=True)
class NotFoundWithinBudget:
    checked_up_to: int
    # blocker position in the set -> number of checked trajectories it met
    hit_tallies: Dict[int, int] = field(default_factory=dict)


EvasionOutcome = Union[EvasionResult, NotFoundWithinBudget]


def build_blocking_set(table: Table, points: Sequence[Point]) -> BlockingSet:
    for i, p in enumerate(points):
        if p == table.origin_O or p == table.target_A:
            raise InvalidBlockingSet(
                f"blocker #{i} at {p} coincides with O or A",
                hint="blocking points must be different from O and A",
            )
        if contains(table.polygon, p) is Location.OUTSIDE:
            raise InvalidBlockingSet(f"blocker #{i} at {p} lies outside the table")
    return BlockingSet(tuple(points))


def _blocked_by(table: Table, idx: FamilyIndex, points: Tuple[Point, ...]) -> Tuple[Trajectory, List[int]]:
    traj = gamma(table, idx)
    return traj, [i for i, b in enumerate(points) if passes_through(traj, b)]


def evade(
    table: Table,
    family: Sequence[FamilyIndex],
    B: BlockingSet,
    jobs: int = 1,
) -> EvasionOutcome:
    """Smallest family member that meets no blocker; exhaustive, in index order."""
    tallies: Dict[int, int] = {i: 0 for i in range(len(B.points))}
    checked = -1
    if jobs > 1 and len(family) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_blocked_by, [table] * len(family), family, [B.points] * len(family)))
    else:
        results = None

    for pos, idx in enumerate(family):
        traj, hits = results[pos] if results is not None else _blocked_by(table, idx, B.points)
        checked = idx.n
        if not hits:
            logger.info("evasion_witness_found", witness_n=idx.n, blockers=len(B.points))
            return EvasionResult(witness_n=idx.n, trajectory=traj, checked_up_to=checked)
        for i in hits:
            tallies[i] += 1
    logger.info("evasion_budget_exhausted", checked_up_to=checked, blockers=len(B.points))
    return NotFoundWithinBudget(checked_up_to=checked, hit_tallies=tallies)


def hit_indices(table: Table, family: Sequence[FamilyIndex], p: Point, N: int) -> Set[int]:
    return {idx.n for idx in family if idx.n <= N and passes_through(gamma(table, idx), p)}


def folding_witnesses(
    table: Table,
    idx: FamilyIndex,
    p: Point,
    trajectory: Optional[Trajectory] = None,
) -> Optional[FoldingWitness]:
    """(epsilon, k) with x = epsilon*h*(p + q*alpha) + k*period for a point on gamma.

    For 0 < y <= 1 the anchor is O: h = y, period 2*alpha (lower chamber width).
    For 1 < y < 2 the anchor is A: h = 2 - y, period 2 (upper chamber width).
    epsilon follows the parity of the bounces between the anchor and the point.
    """
    traj = trajectory if trajectory is not None else gamma(table, idx)
    split = split_at(traj, p)
    if split is None:
        return None
    spec = table.spec
    y = p.y
    if sign(y) > 0 and sign(y - 1) <= 0:
        anchor, height, period = "O", y, 2 * spec.alpha
        heading, parity = sign(traj.initial.dx), split[0]
    elif sign(y - 1) > 0 and sign(y - 2) < 0:
        anchor, height, period = "A", 2 - y, spec.one * 2
        heading, parity = -sign(traj.final_direction.dx), split[1]
    else:
        return None
    preferred = (heading or 1) * (-1) ** parity
    for eps in (preferred, -preferred):
        k = (p.x - eps * height * idx.run) / period
        if k.is_integer:
            return FoldingWitness(epsilon=eps, k=int(k.r), anchor=anchor)
    return None


def random_blocking_set(table: Table, size: int, rng: random.Random) -> BlockingSet:
    """Seeded random blockers with Q(alpha) coordinates strictly inside the table."""
    spec = table.spec
    pts: List[Point] = []
    while len(pts) < size:
        x = _random_element(rng, spec, 2)
        y = _random_element(rng, spec, 4) - 1
        p = point(x, y, spec)
        if p in (table.origin_O, table.target_A) or p in pts:
            continue
        if contains(table.polygon, p) is Location.INSIDE:
            pts.append(p)
    return BlockingSet(tuple(pts))


def _random_element(rng: random.Random, spec, span: int) -> QElement:
    """r + s*alpha with small denominators, landing roughly in [-span, span]."""
    s = Fraction(rng.randint(-6, 6), rng.randint(1, 7))
    r = Fraction(rng.randint(-span * 12, span * 12), rng.randint(1, 12))
    e = spec.element(r, s)
    while abs(e) > span:
        e = e / 2
    return e
