import time
from fractions import Fraction

import pytest

from billiards.core.billiard import TraceStatus, build_table
from billiards.core.errors import CornerHitError, InvalidAlpha, InvalidParams
from billiards.core.family import (
    FamilyIndex,
    approximants,
    approximation_report,
    build_polygon,
    family_params,
    gamma,
    index_from_pair,
    summarize,
    verify_family,
    verify_gamma,
)
from billiards.core.geometry import point
from billiards.core.qfield import SQRT2, sign

A = SQRT2.alpha


def P(x, y):
    return point(x, y, SQRT2)


def test_build_polygon_vertices(table):
    assert table.polygon.vertices == (
        P(-A, -1),
        P(A, -1),
        P(A, 1),
        P(1, 1),
        P(1, 3),
        P(-1, 3),
        P(-1, 1),
        P(-A, 1),
    )
    assert table.origin_O == P(0, 0)
    assert table.target_A == P(0, 2)


def test_family_params_validation():
    with pytest.raises(InvalidParams):
        family_params(2, 0, 1, 2)
    with pytest.raises(InvalidParams):
        family_params(2, 0, 2, Fraction(1, 2))
    with pytest.raises(InvalidParams):
        family_params("1/2", 0)  # alpha = sqrt(1/2) < 1
    with pytest.raises(InvalidAlpha):
        family_params(4, 0)


def test_first_approximants(family):
    assert [(i.n, i.q, i.p) for i in family[:5]] == [(0, 1, 1), (1, 2, 2), (2, 3, 4), (3, 4, 5), (4, 5, 7)]
    assert family[0].lam == 1 - A
    assert len(family) == 201


def test_approximants_rejects_negative_size(params):
    with pytest.raises(InvalidParams):
        approximants(params, -1)


def test_index_invariants(family):
    runs = set()
    for idx in family:
        assert 0 < abs(idx.lam) < 1
        assert idx.slope_identity_holds()
        assert idx.run == 2 * idx.q * A + idx.lam == 2 * idx.p - idx.lam
        runs.add(idx.run)
    assert len(runs) == len(family)


def test_index_rejects_bad_pairs(params):
    with pytest.raises(InvalidParams):
        index_from_pair(params, 0, 3, 1)  # |3 - sqrt2| > 1
    with pytest.raises(InvalidParams):
        index_from_pair(params, 0, 0, 0)
    with pytest.raises(InvalidParams):
        FamilyIndex(n=0, q=1, p=1, lam=A - 1)


def test_ceiling_index_is_also_a_member(table, params):
    idx = index_from_pair(params, 0, 2, 1)
    assert sign(idx.lam) > 0
    report = verify_gamma(table, idx)
    assert report.ok
    assert (report.lower_bounces, report.upper_bounces) == (1, 2)


def test_gamma0_report(table, family):
    report = verify_gamma(table, family[0])
    assert report.ok
    assert report.lower_bounces == 1
    assert report.upper_bounces == 1
    assert report.crossing == P(A - 1, 1)
    assert report.terminal == P(0, 2)


def test_gamma_examples(table, family):
    for n in range(25):
        report = verify_gamma(table, family[n])
        assert report.ok, n
        assert report.lower_bounces == family[n].q
        assert report.upper_bounces == family[n].p
        assert abs(report.crossing.x) == abs(family[n].lam)


def test_summarize_without_index(table, gammas):
    report = summarize(table, gammas(2))
    assert not report.ok
    assert (report.lower_bounces, report.upper_bounces) == (3, 4)


def test_gamma_corner_hit_raises(table, params):
    idx = index_from_pair(params, 0, 1, 1)
    corrupted = build_table(table.polygon, table.origin_O, P(0, Fraction(5, 2)))
    assert gamma(corrupted, idx, max_bounces=3).status is TraceStatus.BUDGET_EXHAUSTED
    # From (-1, 0) the slope of gamma_0 runs straight into the vertex (sqrt2, 1).
    shifted = build_table(table.polygon, P(-1, 0), table.target_A)
    with pytest.raises(CornerHitError) as e:
        gamma(shifted, idx)
    assert e.value.corner.at == P(A, 1)
    assert e.value.corner.after_bounces == 0


def test_approximation_report(family):
    rows = approximation_report(family)
    assert len(rows) == 201
    assert all(r.bound_ok for r in rows)
    assert rows[0].ratio_error == A - 1
    assert rows[0].bound == 1


def test_sqrt3_family():
    sqrt3 = family_params(3, 0, 2, 2)
    table = build_polygon(sqrt3)
    reports = verify_family(table, approximants(sqrt3, 8))
    assert all(r.ok for r in reports)


def test_verify_family_reports_failures_without_dropping(table, family):
    corrupted = build_table(table.polygon, table.origin_O, P(0, Fraction(5, 2)))
    reports = verify_family(corrupted, family[:3], max_bounces=6)
    assert len(reports) == 3
    assert not any(r.ok for r in reports)


def test_verify_family_in_parallel_matches_serial(table, family):
    serial = verify_family(table, family[:6])
    parallel = verify_family(table, family[:6], jobs=2)
    assert [(r.index.n, r.ok, r.lower_bounces, r.upper_bounces) for r in parallel] == [
        (r.index.n, r.ok, r.lower_bounces, r.upper_bounces) for r in serial
    ]


@pytest.mark.slow
@pytest.mark.gate
def test_full_family_is_verified(table, family):
    reports = verify_family(table, family)
    assert len(reports) == 201
    assert [r.index.n for r in reports if not r.ok] == []


@pytest.mark.slow
@pytest.mark.gate
def test_full_family_verifies_within_ten_seconds(table, family):
    started = time.perf_counter()
    reports = verify_family(table, family)
    elapsed = time.perf_counter() - started
    assert all(r.ok for r in reports)
    assert elapsed < 10.0
