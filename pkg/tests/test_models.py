import pytest
from pydantic import ValidationError

from billiards.core.blocking import BlockingSet, NotFoundWithinBudget
from billiards.core.family import approximation_report, verify_gamma
from billiards.core.geometry import point
from billiards.core.models import (
    ApproximationRowModel,
    BlockingSetModel,
    CornerHitModel,
    GammaReportModel,
    NotFoundModel,
    QElementModel,
    TableModel,
    TrajectoryModel,
    UnfoldedLineModel,
    dumps,
    parse_json,
)
from billiards.core.billiard import CornerHit
from billiards.core.qfield import SQRT2, qel
from billiards.core.unfolding import unfold


def test_qelement_wire_format():
    model = QElementModel.from_domain(qel(-1, 1), digits=4)
    data = parse_json(dumps(model))
    assert data == {"r": ["-1", "1"], "s": ["1", "1"], "decimal": "0.4142"}
    assert QElementModel.model_validate(data).to_domain(SQRT2) == qel(-1, 1)


def test_qelement_rejects_bad_pairs():
    with pytest.raises(ValidationError):
        QElementModel(r=["1", "0"], s=["0", "1"])
    with pytest.raises(ValidationError):
        QElementModel(r=["1"], s=["0", "1"])
    # Non-canonical pairs are reduced.
    assert QElementModel(r=["2", "4"], s=["0", "3"]).r == ["1", "2"]


def test_table_round_trip(table):
    text = dumps(TableModel.from_domain(table, digits=12))
    assert len(parse_json(text)["polygon"]["vertices"]) == 8
    assert TableModel.model_validate_json(text).to_domain() == table


def test_trajectory_round_trip(table, gammas):
    for n in range(4):
        g = gammas(n)
        text = dumps(TrajectoryModel.from_domain(g))
        assert TrajectoryModel.model_validate_json(text).to_domain(table) == g


def test_blocking_set_round_trip(table):
    pts = (point(SQRT2.alpha - 1, 1, SQRT2), point(0, 1, SQRT2))
    text = dumps(BlockingSetModel.from_domain(BlockingSet(pts)))
    assert tuple(BlockingSetModel.model_validate_json(text).to_points(SQRT2)) == pts
    assert BlockingSetModel.model_validate_json('{"points": []}').points == []
    with pytest.raises(ValidationError):
        BlockingSetModel.model_validate_json('{"points": [], "extra": 1}')


def test_gamma_report_uses_lambda_key(table, family):
    data = parse_json(dumps(GammaReportModel.from_domain(verify_gamma(table, family[0]), digits=6)))
    assert data["lambda"]["decimal"] == "-0.414214"
    assert (data["n"], data["q"], data["p"], data["ok"]) == (0, 1, 1, True)
    assert data["lower_bounces"] == 1 and data["upper_bounces"] == 1
    assert "error" not in data


def test_error_values_serialize(table):
    corner = parse_json(dumps(CornerHitModel.from_domain(CornerHit(table.target_A, 3))))
    assert corner["error"] == "corner_hit"
    assert corner["after_bounces"] == 3
    missing = parse_json(dumps(NotFoundModel.from_domain(NotFoundWithinBudget(7, {0: 8, 1: 2}))))
    assert missing == {
        "error": "not_found_within_budget",
        "checked_up_to": 7,
        "hit_tallies": [{"blocker": 0, "hits": 8}, {"blocker": 1, "hits": 2}],
    }


def test_unfolded_line_and_rows_serialize(family, gammas):
    line = parse_json(dumps(UnfoldedLineModel.from_domain(unfold(gammas(0)))))
    assert len(line["copies"]) == 2
    assert len(line["copies"][0]["linear"]) == 2
    row = parse_json(dumps(ApproximationRowModel.from_domain(approximation_report(family[:1])[0])))
    assert row["bound"] == ["1", "1"]
    assert row["bound_ok"] is True
