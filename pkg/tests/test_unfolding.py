import random
from fractions import Fraction

import pytest

from billiards.core.billiard import CornerHit, TraceStatus, Trajectory, crossing_at_height, trace
from billiards.core.errors import InvalidParams
from billiards.core.geometry import cross, direction, point
from billiards.core.qfield import SQRT2, qel
from billiards.core.unfolding import Isometry, IsometryKind, corridor_position, fold, unfold

SEED = 0
A = SQRT2.alpha


def P(x, y):
    return point(x, y, SQRT2)


def D(dx, dy):
    return direction(dx, dy, SQRT2)


def test_isometry_basics():
    ident = Isometry.identity(SQRT2)
    assert ident.kind is IsometryKind.IDENTITY
    mirror = Isometry.reflection(P(A, 0), D(0, 1))
    assert mirror.kind is IsometryKind.COMPOSED
    assert mirror.determinant() == -1
    assert mirror.apply(P(0, 0)) == P(2 * A, 0)
    assert mirror.compose(mirror).kind is IsometryKind.IDENTITY
    assert mirror.inverse() == mirror
    assert mirror.apply_vector(D(1, 1)) == D(-1, 1)


def test_unfold_gamma0(gammas):
    line = unfold(gammas(0))
    assert len(line.copies) == 2
    assert len(line.frames()) == 3
    assert line.terminal == P(2 + 2 * A, 2)
    assert line.run == 2 * (1 + A)
    assert line.rise == 2


def test_unfolded_line_is_straight(gammas):
    for n in range(8):
        g = gammas(n)
        line = unfold(g)
        frames = line.frames()
        assert not cross(line.terminal - line.origin, g.initial)
        for k, b in enumerate(g.bounces):
            image = frames[k].apply(b.point)
            assert image == frames[k + 1].apply(b.point)
            assert not cross(image - line.origin, g.initial)
            assert frames[k + 1].determinant() == (-1) ** (k + 1)


def test_fold_reproduces_gamma(table, family, gammas):
    for n in range(8):
        idx = family[n]
        folded = fold(table, table.origin_O, idx.direction(), rise=SQRT2.one * 2)
        assert folded == gammas(n)


def test_fold_stops_at_requested_rise(table, family):
    folded = fold(table, table.origin_O, family[0].direction(), rise=SQRT2.one)
    assert isinstance(folded, Trajectory)
    assert folded.status is TraceStatus.BUDGET_EXHAUSTED
    assert len(folded.bounces) == 1
    assert folded.terminal == P(A - 1, 1)


def test_fold_rejects_downward_lines(table):
    with pytest.raises(InvalidParams):
        fold(table, table.origin_O, D(1, -1), rise=SQRT2.one)


def test_fold_agrees_with_trace_on_random_directions(table):
    rng = random.Random(SEED)
    for _ in range(20):
        d = D(qel(Fraction(rng.randint(-40, 40), 7), Fraction(rng.randint(-20, 20), 9)), 1)
        traced = trace(table, table.origin_O, d, max_bounces=10)
        folded = fold(table, table.origin_O, d, rise=SQRT2.one * 1000, max_bounces=10)
        assert folded == traced
        if isinstance(traced, CornerHit):
            continue
        assert fold(table, table.origin_O, d, rise=unfold(traced).rise, max_bounces=10) == traced


def test_corridor_position():
    lam = 1 - A
    assert corridor_position(SQRT2.one, 1, 1, lam) == (1 - A, A - 1)
    half = SQRT2.one / 2
    assert corridor_position(half, 1, 1, lam) == ((1 + A) / 2, -(1 + A) / 2)
    assert corridor_position(SQRT2.zero, 1, 1, lam) == (SQRT2.zero, SQRT2.zero)
    # 7 - 5*sqrt(2) for the (p, q) = (7, 5) member.
    assert corridor_position(SQRT2.one, 7, 5, 7 - 5 * A) == (7 - 5 * A, 5 * A - 7)


def test_corridor_position_matches_gamma_crossings(family, gammas):
    for n in range(10):
        idx = family[n]
        candidates = corridor_position(SQRT2.one, idx.p, idx.q, idx.lam)
        (crossing,) = crossing_at_height(gammas(n), SQRT2.one)
        # q lower bounces: an even count keeps the reduced sign.
        assert crossing.x == candidates[0 if idx.q % 2 == 0 else 1]


@pytest.mark.slow
@pytest.mark.gate
def test_fold_and_unfold_agree_across_the_family(table, family, gammas):
    for n in range(201):
        idx, g = family[n], gammas(n)
        line = unfold(g)
        assert line.run == 2 * (idx.p + idx.q * A), n
        assert line.rise == 2
        assert fold(table, table.origin_O, idx.direction(), rise=line.rise) == g, n


@pytest.mark.slow
@pytest.mark.gate
def test_fold_agrees_with_trace_on_five_hundred_directions(table):
    rng = random.Random(SEED)
    for _ in range(500):
        d = D(qel(Fraction(rng.randint(-60, 60), 7), Fraction(rng.randint(-30, 30), 11)), 1)
        traced = trace(table, table.origin_O, d, max_bounces=100)
        assert fold(table, table.origin_O, d, rise=SQRT2.one * 1000, max_bounces=100) == traced


@pytest.mark.slow
@pytest.mark.gate
def test_corridor_position_holds_across_the_family(family, gammas):
    for n in range(201):
        idx = family[n]
        candidates = corridor_position(SQRT2.one, idx.p, idx.q, idx.lam)
        (crossing,) = crossing_at_height(gammas(n), SQRT2.one)
        assert crossing.x == candidates[0 if idx.q % 2 == 0 else 1], n
