"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``. The P2P reproduction
needs the public purchase-to-pay log; point ``PCEF_P2P_LOG`` at the CSV or XES
file (see the README for the mapping variables). Without it that test skips.
"""
import contextlib
import math
import os
import random
import re
import time
from pathlib import Path

import pytest

from pcef.cli import main
from pcef.config import FilterSpec, load_mapping
from pcef.context import activity_context, build_dfg
from pcef.criteria import (
    EXTERNAL_CRITERIA,
    AssessmentConfig,
    Evidence,
    Status,
    eval_maturity,
    evaluate_all,
    occurrences_per_bucket,
)
from pcef.event_log import END, START, ColumnMapping, read_log, year_window
from pcef.synth import SynthSpec, generate, write_outputs
from pcef.variants import build_variant_table

import oracles
from conftest import make_log
import test_properties
from specs import random_spec, spec_config

REL = 1e-9


@pytest.fixture
def criterion(capsys):
    """Yields a context manager that prints one PASS/FAIL line for a criterion."""

    @contextlib.contextmanager
    def run(number, title):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            status = "SKIP" if isinstance(exc, pytest.skip.Exception) else "FAIL"
            with capsys.disabled():
                print(f"\n[criterion {number}] {status}: {title} ({exc.__class__.__name__}: {str(exc)[:200]})")
            raise
        with capsys.disabled():
            print(f"\n[criterion {number}] PASS: {title} ({time.perf_counter() - t0:.2f}s)")

    return run


def _same(expected, actual, where):
    if isinstance(expected, int) and not isinstance(expected, bool):
        assert actual == expected, f"{where}: expected {expected}, got {actual}"
    else:
        assert math.isclose(actual, expected, rel_tol=REL, abs_tol=0.0) or actual == expected, (
            f"{where}: expected {expected!r}, got {actual!r}"
        )


# --- 1 --------------------------------------------------------------------


def _ledger_coverage(ledger, target, labels, direction):
    if direction == "in":
        counts = {a: n for (a, b), n in ledger.dfg.items() if b == target}
    else:
        counts = {b: n for (a, b), n in ledger.dfg.items() if a == target}
    return sum(n for k, n in counts.items() if k in labels) / sum(counts.values())


def test_criterion_1_synthetic_oracle(criterion):
    with criterion(1, "synthetic logs match the generator ledger"):
        t0 = time.perf_counter()
        checked = 0
        seed = 0
        while checked < 25:
            spec = random_spec(seed)
            seed += 1
            log, ledger = generate(spec)
            if not ledger.target_cases:
                continue
            config = spec_config(spec)
            results = {r.criterion_id: r for r in evaluate_all(log, config)}
            for cid, expected in ledger.expected_metrics().items():
                for key, value in expected.items():
                    _same(value, results[cid].metrics[key], f"seed {spec.seed} {cid}.{key}")
            preds, succs = spec.template_neighbours()
            std = results["standardization"].metrics
            _same(_ledger_coverage(ledger, spec.target_activity, preds, "in"), std["pred_coverage"], "pred_coverage")
            _same(_ledger_coverage(ledger, spec.target_activity, succs, "out"), std["succ_coverage"], "succ_coverage")
            for bucket in ("week", "month"):
                config_b = spec_config(spec, frequency_bucket=bucket)
                got = evaluate_all(log, config_b)[4].metrics
                for key, value in ledger.expected_frequency(bucket).items():
                    _same(value, got[key], f"seed {spec.seed} frequency[{bucket}].{key}")
            checked += 1
        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0, f"took {elapsed:.1f}s"


def test_criterion_1_planted_splits(criterion):
    with criterion(1, "planted 80/20 predecessor split and 4/2 compliant split"):
        spec = SynthSpec(
            n_cases=100,
            variant_templates=((("A", "T", "Z"), 0.8), (("B", "T", "Z"), 0.2)),
            target_activity="T",
            seed=1,
        )
        log, ledger = generate(spec)
        share = ledger.variant_counts[("A", "T", "Z")] / 100
        r = evaluate_all(log, AssessmentConfig("T", valid_predecessors={"A"}, valid_successors={"Z"}))[0]
        _same(share, r.metrics["pred_coverage"], "pred_coverage")
        assert abs(share - 0.8) < 0.1

        good = [("S", f"P{i}", "T", "E") for i in range(4)]
        rework = [("S", "P0", "T", "T", "E"), ("S", "P1", "T", "T", "E")]
        log = make_log(good * 3 + rework)
        cfg = AssessmentConfig("T", valid_predecessors={f"P{i}" for i in range(4)}, valid_successors={"E"})
        m = eval_maturity(log, cfg).metrics
        assert (m["n_compliant_variants"], m["n_incompliant_variants"]) == (4, 2)


# --- 2 --------------------------------------------------------------------


def test_criterion_2_brute_force(criterion):
    with criterion(2, "naive recomputation equals module output on logs of at most 50 cases"):
        rng = random.Random(2024)
        checked = 0
        seed = 1000
        while checked < 30:
            spec = random_spec(seed, n_cases=rng.randint(1, 50))
            seed += 1
            log, _ = generate(spec)
            target = spec.target_activity
            if not any(target in c.activities for c in log.cases):
                continue
            config = spec_config(spec)
            results = {r.criterion_id: r for r in evaluate_all(log, config)}

            assert {v.sequence: v.count for v in build_variant_table(log)} == oracles.variant_counts(log)
            rename = {START: "<s>", END: "<e>"}
            module_dfg = {(rename.get(a, a), rename.get(b, b)): n for (a, b), n in build_dfg(log).items()}
            assert module_dfg == oracles.dfg(log)

            fail = oracles.failure(log, target, {spec.failure_activity})
            for key, value in fail.items():
                assert results["failure_rate"].metrics[key] == value, key

            days = oracles.daily_counts(log, target)
            assert list(occurrences_per_bucket(log, config, "day").values()) == list(days.values())
            assert results["frequency"].metrics["mean_per_day"] == sum(days.values()) / len(days)

            for key, value in oracles.duration(log, target).items():
                assert results["duration"].metrics[key] == value, key

            assert results["urgency"].metrics["out_of_hours_ratio"] == oracles.out_of_hours_ratio(log, target)

            for key, value in oracles.resources(log, target).items():
                assert results["resources"].metrics[key] == value, key
            checked += 1


# --- 3 --------------------------------------------------------------------

PROPERTIES = [
    test_properties.test_variant_partition,
    test_properties.test_dfg_conservation,
    test_properties.test_coverage_filter_monotone,
    test_properties.test_aggregate_scale_invariant,
    test_properties.test_scorecard_always_thirteen,
]


def test_criterion_3_structural_invariants(criterion):
    with criterion(3, "variant partition, DFG conservation, coverage filter, weight scaling, 13 results"):
        for prop in PROPERTIES:
            prop()


# --- 4 --------------------------------------------------------------------

P2P_ENV = "PCEF_P2P_LOG"
CATEGORY = "3-way match, invoice before GR"


@pytest.mark.dataset
def test_criterion_4_p2p_reproduction(criterion):
    with criterion(4, "P2P reproduction of the Change Quantity assessment"):
        path = os.environ.get(P2P_ENV)
        if not path or not Path(path).exists():
            pytest.skip(f"P2P dataset not available (set {P2P_ENV})")
        t0 = time.perf_counter()
        mapping = None
        if os.environ.get("PCEF_P2P_MAPPING"):
            mapping = load_mapping(os.environ["PCEF_P2P_MAPPING"])
        elif path.lower().endswith(".csv"):
            mapping = ColumnMapping(
                "Case ID", "Activity", "Complete Timestamp", resource_column="Resource",
                case_attribute_columns=("(case) Item Category", "(case) Source"),
            )
        category_attr = os.environ.get(
            "PCEF_P2P_CATEGORY_ATTRIBUTE",
            "Item Category" if path.lower().endswith(".xes") else "(case) Item Category",
        )
        log = read_log(path, mapping)
        log = FilterSpec({category_attr: CATEGORY}, year_window(2018), 0.9).apply(log)
        config = AssessmentConfig(
            "Change Quantity",
            failure_terminal_activities={"Delete Purchase Order Item"},
            frequency_window=year_window(2018),
        )
        r = {x.criterion_id: x.metrics for x in evaluate_all(log, config)}

        f = r["failure_rate"]
        assert abs(f["rework_ratio"] - 0.0391) <= 0.005, f
        assert abs(f["terminal_failure_ratio"] - 0.0142) <= 0.005, f
        assert abs(f["failure_rate"] - 0.0533) <= 0.007, f
        m = r["maturity"]
        assert abs(m["n_variants_containing"] - 25) <= 3, m
        assert abs(m["n_compliant_variants"] - 22) <= 3 and abs(m["n_incompliant_variants"] - 3) <= 3, m
        assert abs(r["resources"]["n_distinct_users_on_activity"] - 138) <= 5, r["resources"]
        assert r["frequency"]["mean_per_day"] == pytest.approx(31, rel=0.10), r["frequency"]
        assert min(occurrences_per_bucket(log, config, "month").values()) >= 340
        d = r["duration"]
        assert d["mean_throughput_with"] == pytest.approx(93, rel=0.10), d
        assert d["mean_throughput_without"] == pytest.approx(64, rel=0.10), d
        s = r["standardization"]
        assert s["pred_coverage"] == pytest.approx(0.95, abs=0.01), s
        assert 0.93 - 1e-9 <= s["succ_coverage"] <= 0.95 + 1e-9, s
        assert time.perf_counter() - t0 < 60.0


# --- 5 --------------------------------------------------------------------


def test_criterion_5_non_evaluable_honesty(criterion):
    with criterion(5, "UI-dependent criteria are not evaluable unless evidence is supplied"):
        for seed in range(5):
            spec = random_spec(seed)
            log, ledger = generate(spec)
            if not ledger.target_cases:
                continue
            results = {r.criterion_id: r for r in evaluate_all(log, spec_config(spec))}
            for cid in EXTERNAL_CRITERIA:
                assert results[cid].status is Status.NOT_EVALUABLE
                assert results[cid].normalized_score is None and not results[cid].metrics
            evidence = {cid: Evidence(0.1 * (i + 2), f"note {cid}") for i, cid in enumerate(EXTERNAL_CRITERIA)}
            results = {r.criterion_id: r for r in evaluate_all(log, spec_config(spec, external_evidence=evidence))}
            for cid, ev in evidence.items():
                assert results[cid].status is Status.EXTERNAL
                assert results[cid].normalized_score == ev.value
        assert set(EXTERNAL_CRITERIA) == {"determinism", "structuredness", "interfaces", "stability"}


# --- 6 --------------------------------------------------------------------

_STAMP = re.compile(rb'("generated_at": ")[^"]*(")|(Generated: )\S+')


def _strip(data: bytes) -> bytes:
    return _STAMP.sub(lambda m: (m.group(1) or m.group(3)) + b"<t>" + (m.group(2) or b""), data)


def test_criterion_6_determinism(criterion, tmp_path):
    with criterion(6, "analyze output is byte-identical across runs"):
        paths = write_outputs(random_spec(42), tmp_path / "gen")
        for fmt in ("json", "markdown"):
            outputs = []
            for run in range(2):
                out = tmp_path / f"r{run}.{fmt}"
                code = main([
                    "-q", "analyze", "--log", str(paths["log"]),
                    "--config", str(paths["config"]), "--format", fmt, "-o", str(out),
                ])
                assert code == 0
                outputs.append(out.read_bytes())
                time.sleep(0.01)
            assert _strip(outputs[0]) == _strip(outputs[1])
            assert outputs[0]
