import pytest

from pcef.errors import EmptyLog, InvalidFraction
from pcef.event_log import EventLog
from pcef.variants import build_variant_table, coverage_filter, variant_tsv, variants_containing

from conftest import make_log


def case_ids(log):
    return {c.case_id for c in log.cases}


def test_counts_and_order():
    table = build_variant_table(make_log([("A", "B"), ("A", "C"), ("A", "B")]))
    assert [(v.sequence, v.count) for v in table] == [(("A", "B"), 2), (("A", "C"), 1)]
    assert table.variants[0].case_ids == ("c0", "c2")
    assert table.total_cases == 3


def test_single_case():
    table = build_variant_table(make_log([("A",)]))
    assert len(table) == 1 and table.variants[0].count == 1


def test_ties_broken_by_sequence():
    table = build_variant_table(make_log([("B",), ("A", "Z"), ("A",)]))
    assert [v.sequence for v in table] == [("A",), ("A", "Z"), ("B",)]


def test_empty_log_rejected():
    with pytest.raises(EmptyLog):
        build_variant_table(EventLog(()))


def _six_three_one():
    return make_log([("A", "B")] * 6 + [("A", "C")] * 3 + [("A", "D")])


def test_full_coverage_is_identity():
    log = _six_three_one()
    assert case_ids(coverage_filter(build_variant_table(log), log, 1.0)) == case_ids(log)


@pytest.mark.parametrize("fraction, n_cases", [(0.9, 9), (0.5, 6), (0.6, 6), (0.61, 9), (0.95, 10)])
def test_coverage_prefix(fraction, n_cases):
    # hand enumeration of prefix shares: 6/10, 9/10, 10/10
    log = _six_three_one()
    assert len(coverage_filter(build_variant_table(log), log, fraction).cases) == n_cases


@pytest.mark.parametrize("fraction", [0.0, -0.1, 1.01])
def test_invalid_fraction(fraction):
    log = _six_three_one()
    with pytest.raises(InvalidFraction):
        coverage_filter(build_variant_table(log), log, fraction)


def test_variants_containing():
    table = build_variant_table(make_log([("A", "B"), ("A", "C", "B"), ("A",)]))
    assert [v.sequence for v in variants_containing(table, "B")] == [("A", "B"), ("A", "C", "B")]
    assert variants_containing(table, "nope") == []


def test_tsv():
    text = variant_tsv(build_variant_table(make_log([("A", "B"), ("A", "B"), ("C",)])))
    assert text.splitlines() == [
        "rank\tcount\tshare\tsequence",
        "1\t2\t0.6667\tA→B",
        "2\t1\t0.3333\tC",
    ]
