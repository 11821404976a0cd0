"""
The table P_alpha and its trajectory family gamma_n.

P_alpha is two stacked axis-aligned chambers joined by the open slit
-1 < x < 1 at height 1: the lower chamber [-alpha, alpha] x [1 - L1, 1] and the
upper chamber [-1, 1] x [1, 1 + L2], with O = (0, 0) and A = (0, 2).
gamma_n leaves O with slope 1 / (p_n + q_n*alpha).
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from billiards.core.billiard import (
    DEFAULT_MAX_BOUNCES,
    CornerHit,
    Table,
    TraceStatus,
    Trajectory,
    bounce_counts_split,
    build_table,
    crossing_at_height,
    trace,
)
from billiards.core.errors import BilliardError, CornerHitError, InvalidParams
from billiards.core.geometry import Direction, Point, point, polygon
from billiards.core.qfield import AlphaSpec, QElement, RationalLike, as_rational, floor, sign
from billiards.core.utils.logging import get_logger

logger = get_logger("billiards.family")

SLIT_HEIGHT = 1


@dataclass(frozen=True)
class FamilyParams:
    alpha: AlphaSpec
    L1: Fraction
    L2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "L1", as_rational(self.L1))
        object.__setattr__(self, "L2", as_rational(self.L2))
        if self.L1 <= 1 or self.L2 <= 1:
            raise InvalidParams(
                f"L1={self.L1}, L2={self.L2}: both chamber heights must exceed 1",
                hint="O and A must sit strictly inside their chambers",
            )
        if sign(self.alpha.alpha - 1) <= 0:
            raise InvalidParams(
                f"alpha for {self.alpha} must exceed 1",
                hint="the slit crossing |lambda| < 1 must fit inside the lower chamber",
            )


def family_params(u: RationalLike = 2, v: RationalLike = 0, L1: RationalLike = 2, L2: RationalLike = 2) -> FamilyParams:
    return FamilyParams(AlphaSpec(u, v), as_rational(L1), as_rational(L2))


@dataclass(frozen=True)
class FamilyIndex:
    n: int
    q: int
    p: int
    lam: QElement

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise InvalidParams(f"index n={self.n}: p={self.p}, q={self.q} must be positive")
        if self.lam != self.p - self.q * self.lam.spec.alpha:
            raise InvalidParams(f"index n={self.n}: lambda={self.lam} is not p - q*alpha")
        if not self.lam or sign(abs(self.lam) - 1) >= 0:
            raise InvalidParams(f"index n={self.n}: need 0 < |lambda| < 1, got {self.lam}")

    @property
    def run(self) -> QElement:
        """p + q*alpha, the reciprocal slope of gamma_n."""
        return self.p + self.q * self.lam.spec.alpha

    def slope_identity_holds(self) -> bool:
        alpha = self.lam.spec.alpha
        run = self.run
        return run == 2 * self.q * alpha + self.lam and run == 2 * self.p - self.lam

    def direction(self) -> Direction:
        spec = self.lam.spec
        return Direction(self.run, spec.one)


@dataclass(frozen=True)
class GammaReport:
    index: Optional[FamilyIndex]
    lower_bounces: Optional[int]
    crossing: Optional[Point]
    upper_bounces: Optional[int]
    terminal: Optional[Point]
    ok: bool
    error: Optional[str] = None


@dataclass(frozen=True)
class ApproximationRow:
    n: int
    q: int
    p: int
    lam: QElement
    ratio_error: QElement
    bound: Fraction
    bound_ok: bool


def build_polygon(params: FamilyParams) -> Table:
    spec = params.alpha
    a = spec.alpha
    low, high = 1 - params.L1, 1 + params.L2
    verts = [
        point(-a, low, spec),
        point(a, low, spec),
        point(a, 1, spec),
        point(1, 1, spec),
        point(1, high, spec),
        point(-1, high, spec),
        point(-1, 1, spec),
        point(-a, 1, spec),
    ]
    return build_table(polygon(verts), point(0, 0, spec), point(0, 2, spec))


def index_from_pair(params: FamilyParams, n: int, p: int, q: int) -> FamilyIndex:
    """Any p, q >= 1 with |p - q*alpha| < 1 defines a valid member."""
    lam = p - q * params.alpha.alpha
    return FamilyIndex(n=n, q=q, p=p, lam=lam)


def approximants(params: FamilyParams, N: int) -> List[FamilyIndex]:
    """q_n = n + 1, p_n = floor(q_n * alpha) for n = 0..N."""
    if N < 0:
        raise InvalidParams(f"family size N={N} must be >= 0")
    alpha = params.alpha.alpha
    out: List[FamilyIndex] = []
    for n in range(N + 1):
        q = n + 1
        idx = index_from_pair(params, n, floor(q * alpha), q)
        if out and idx.q <= out[-1].q:
            raise InvalidParams("q_n must be strictly increasing")
        out.append(idx)
    return out


def approximation_report(indices: Sequence[FamilyIndex]) -> List[ApproximationRow]:
    rows = []
    for idx in indices:
        alpha = idx.lam.spec.alpha
        err = abs(alpha - Fraction(idx.p, idx.q))
        bound = Fraction(1, idx.q)
        rows.append(ApproximationRow(idx.n, idx.q, idx.p, idx.lam, err, bound, sign(err - bound) < 0))
    return rows


def gamma(table: Table, idx: FamilyIndex, max_bounces: int = DEFAULT_MAX_BOUNCES) -> Trajectory:
    result = trace(table, table.origin_O, idx.direction(), max_bounces)
    if isinstance(result, CornerHit):
        raise CornerHitError(result, hint=f"gamma_{idx.n} (p={idx.p}, q={idx.q}) ran into a vertex")
    return result


def summarize(table: Table, traj: Trajectory, idx: Optional[FamilyIndex] = None) -> GammaReport:
    """Lower/upper bounce split at the slit height for any trajectory."""
    y0 = table.spec.one * SLIT_HEIGHT
    lower, upper = bounce_counts_split(traj, y0)
    crossing = crossing_at_height(traj, y0)[0]
    ok = False
    if idx is not None:
        ok = (
            traj.status is TraceStatus.REACHED_TARGET
            and lower == idx.q
            and abs(crossing.x) == abs(idx.lam)
            and crossing.y == y0
            and upper == idx.p
            and traj.terminal == table.target_A
        )
    return GammaReport(idx, lower, crossing, upper, traj.terminal, ok)


def verify_gamma(table: Table, idx: FamilyIndex, max_bounces: int = DEFAULT_MAX_BOUNCES) -> GammaReport:
    return summarize(table, gamma(table, idx, max_bounces), idx)


def _verify_one(table: Table, idx: FamilyIndex, max_bounces: int) -> GammaReport:
    try:
        return verify_gamma(table, idx, max_bounces)
    except BilliardError as e:
        return GammaReport(idx, None, None, None, None, False, error=f"{e.code.value}: {e.message}")


def verify_family(
    table: Table,
    indices: Sequence[FamilyIndex],
    jobs: int = 1,
    max_bounces: int = DEFAULT_MAX_BOUNCES,
) -> List[GammaReport]:
    """verify_gamma over many indices; failures are reported, never dropped."""
    if jobs > 1 and len(indices) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_verify_one, table, idx, max_bounces) for idx in indices]
            reports = [f.result() for f in futures]
    else:
        reports = [_verify_one(table, idx, max_bounces) for idx in indices]
    failed = [r.index.n for r in reports if not r.ok]
    if failed:
        logger.warning("family_verification_failed", failed=failed[:20], total=len(reports))
    else:
        logger.info("family_verified", total=len(reports))
    return reports
