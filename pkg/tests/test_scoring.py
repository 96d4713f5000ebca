import json
from datetime import datetime, timezone

import jsonschema
import pytest

from pcef.criteria import CRITERION_IDS, PERSPECTIVE_OF, AssessmentConfig, CriterionResult, Status, evaluate_all, not_evaluable
from pcef.errors import AllWeightsZero, IncompleteResults
from pcef.scoring import REPORT_SCHEMA, build_scorecard, from_json, render

from conftest import make_log

STAMP = datetime(2020, 1, 2, 3, 4, 5, tzinfo=timezone.utc)


def all_not_evaluable():
    return [not_evaluable(cid, "test") for cid in CRITERION_IDS]


def with_scores(scores):
    out = []
    for cid in CRITERION_IDS:
        if cid in scores:
            out.append(CriterionResult(cid, PERSPECTIVE_OF[cid], Status.COMPUTED, {"x": 1}, scores[cid]))
        else:
            out.append(not_evaluable(cid, "test"))
    return out


def test_all_not_evaluable():
    card = build_scorecard(all_not_evaluable(), generated_at=STAMP)
    assert card.aggregate is None and card.evaluable_count == 0
    assert json.loads(render(card, "json"))["aggregate"] is None


def test_equal_weights_mean():
    card = build_scorecard(with_scores({"frequency": 0.4, "urgency": 0.8}))
    assert card.aggregate == pytest.approx(0.6)
    assert card.evaluable_count == 2


def test_weighted_mean():
    # (3*0.9 + 1*0.3) / 4 = 3.0 / 4
    card = build_scorecard(with_scores({"frequency": 0.9, "urgency": 0.3}), {"frequency": 3, "urgency": 1})
    assert card.aggregate == pytest.approx(0.75)


def test_incomplete_results():
    with pytest.raises(IncompleteResults):
        build_scorecard(all_not_evaluable()[:12])
    dup = all_not_evaluable()
    dup[1] = dup[0]
    with pytest.raises(IncompleteResults):
        build_scorecard(dup)


def test_all_weights_zero():
    with pytest.raises(AllWeightsZero):
        build_scorecard(with_scores({"frequency": 0.5}), {"frequency": 0})


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        build_scorecard(with_scores({"frequency": 0.5}), {"frequency": -1})


def test_results_sorted_by_framework_order():
    card = build_scorecard(list(reversed(all_not_evaluable())))
    assert [r.criterion_id for r in card.results] == list(CRITERION_IDS)


def _real_card():
    log = make_log([("A", "T", "B"), ("A", "T", "T", "B"), ("A", "B")])
    config = AssessmentConfig("T", failure_terminal_activities={"Del"})
    return build_scorecard(evaluate_all(log, config), activity="T", generated_at=STAMP, log_fingerprint=log.fingerprint())


def test_json_round_trip_and_schema():
    card = _real_card()
    raw = render(card, "json")
    jsonschema.validate(json.loads(raw), REPORT_SCHEMA)
    assert from_json(raw) == card
    assert render(from_json(raw), "json") == raw


def test_json_key_order_and_version():
    data = json.loads(render(_real_card(), "json"))
    assert list(data)[:2] == ["schema_version", "activity"]
    assert data["schema_version"] == "1"
    assert data["generated_at"] == "2020-01-02T03:04:05.000Z"


def test_markdown_has_five_perspective_headings():
    text = render(_real_card(), "markdown").decode()
    headings = [line for line in text.splitlines() if line.startswith("## ")]
    assert headings == [f"## {p} perspective" for p in ("Task", "Time", "Data", "System", "Human")]


def test_render_is_deterministic():
    card = _real_card()
    assert render(card, "json") == render(card, "json")
    assert render(card, "markdown") == render(card, "markdown")
