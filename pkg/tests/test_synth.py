import json
from collections import Counter
from datetime import datetime, timezone

import pytest

from pcef.context import build_dfg
from pcef.criteria import eval_failure_rate, eval_resources, eval_urgency
from pcef.errors import InvalidSpec
from pcef.event_log import parse_csv, parse_xes, write_xes
from pcef.synth import SYNTH_MAPPING, SynthSpec, generate, load_spec, spec_from_dict, write_outputs
from pcef.variants import build_variant_table

from specs import random_spec, spec_config


def test_single_case_no_plantings():
    spec = SynthSpec(n_cases=1, variant_templates=((("A", "B"), 1.0),), target_activity="B")
    log, ledger = generate(spec)
    assert [c.activities for c in log.cases] == [("A", "B")]
    assert dict(ledger.variant_counts) == {("A", "B"): 1}


def test_same_seed_same_output():
    spec = random_spec(7)
    a, la = generate(spec)
    b, lb = generate(spec)
    assert a == b
    assert la.to_dict() == lb.to_dict()
    c, _ = generate(random_spec(8))
    assert a != c


def test_planted_variant_counts_recovered():
    log, ledger = generate(random_spec(3))
    table = build_variant_table(log)
    assert {v.sequence: v.count for v in table} == dict(ledger.variant_counts)


def test_planted_dfg_recovered():
    log, ledger = generate(random_spec(4))
    assert dict(build_dfg(log)) == dict(ledger.dfg)


def test_rework_planting_matches_evaluator():
    spec = SynthSpec(n_cases=100, rework_probability=0.2, seed=11)
    log, ledger = generate(spec)
    r = eval_failure_rate(log, spec_config(spec))
    assert r.metrics["rework_ratio"] * 100 == pytest.approx(len(ledger.rework_cases), rel=1e-12)
    assert 0 < len(ledger.rework_cases) < 100


def test_out_of_hours_share():
    spec = SynthSpec(n_cases=200, out_of_hours_share=0.3, inter_event_gap=(0, 86400), seed=5)
    log, ledger = generate(spec)
    ratio = eval_urgency(log, spec_config(spec)).metrics["out_of_hours_ratio"]
    assert ratio == len(ledger.out_of_hours_events) / ledger.target_executions
    assert abs(len(ledger.out_of_hours_events) - 0.3 * 200) < 20


def test_user_pool_all_active():
    spec = SynthSpec(n_cases=400, user_pool=tuple(f"u{i:02d}" for i in range(12)), seed=2)
    log, ledger = generate(spec)
    assert eval_resources(log, spec_config(spec)).metrics["n_distinct_users_on_activity"] == len(ledger.user_activity) == 12


def test_rework_and_terminal_sets_disjoint():
    log, ledger = generate(SynthSpec(n_cases=300, rework_probability=0.3, terminal_failure_probability=0.3, seed=9))
    assert ledger.rework_cases and ledger.terminal_cases
    assert not ledger.rework_cases & ledger.terminal_cases


@pytest.mark.parametrize(
    "kw, field",
    [
        ({"n_cases": 0}, "n_cases"),
        ({"variant_templates": ((("A",), 0.5),)}, "variant_templates"),
        ({"rework_probability": 1.5}, "rework_probability"),
        ({"variant_templates": ((("Change Quantity", "Change Quantity"), 1.0),)}, "variant_templates"),
        ({"inter_event_gap": (5, 1)}, "inter_event_gap"),
        ({"seed": -1}, "seed"),
    ],
)
def test_invalid_spec(kw, field):
    with pytest.raises(InvalidSpec) as exc:
        SynthSpec(**kw)
    assert exc.value.field == field


def test_xes_round_trip_of_synthetic_log(tmp_path):
    log, _ = generate(random_spec(21))
    write_xes(log, tmp_path / "s.xes")
    again = parse_xes(tmp_path / "s.xes")
    assert again == log
    assert [c.case_attributes for c in again.cases] == [c.case_attributes for c in log.cases]
    assert [e.resource for e in again.events()] == [e.resource for e in log.events()]


def test_write_outputs(tmp_path):
    spec = random_spec(1)
    paths = write_outputs(spec, tmp_path / "out")
    log, ledger = generate(spec)
    assert parse_csv(paths["log"], SYNTH_MAPPING) == log
    data = json.loads(paths["ledger"].read_text())
    assert data["n_cases"] == spec.n_cases
    assert sum(v["count"] for v in data["variants"]) == spec.n_cases
    assert "[assessment]" in paths["config"].read_text()


def test_spec_from_toml(tmp_path):
    path = tmp_path / "s.toml"
    path.write_text(
        'n_cases = 5\nseed = 3\nstart_window = ["2018-01-01T00:00:00Z", "2018-02-01T00:00:00Z"]\n'
        '[[variant_templates]]\nsequence = ["A", "Change Quantity"]\nprobability = 0.5\n'
        '[[variant_templates]]\nsequence = ["A", "B"]\nprobability = 0.5\n'
        '[business_hours]\nstart = "09:00"\nend = "17:00"\n'
    )
    spec = load_spec(path)
    assert spec.n_cases == 5 and spec.variant_templates[1] == (("A", "B"), 0.5)
    assert spec.start_window[1] == datetime(2018, 2, 1, tzinfo=timezone.utc)
    with pytest.raises(InvalidSpec):
        spec_from_dict({"bogus": 1})
