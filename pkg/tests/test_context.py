import pytest

from pcef.context import activity_context, build_dfg, context_tables, coverage
from pcef.errors import UnknownActivity, ZeroTotal
from pcef.event_log import END, START

from conftest import make_log


def test_dfg_single_case():
    dfg = build_dfg(make_log([("A", "B", "A")]))
    assert dict(dfg) == {(START, "A"): 1, ("A", "B"): 1, ("B", "A"): 1, ("A", END): 1}


def test_dfg_additive():
    one = build_dfg(make_log([("A", "B")]))
    two = build_dfg(make_log([("A", "B"), ("A", "B")]))
    assert dict(two) == {k: 2 * v for k, v in one.items()}


def test_activity_context_projection():
    ctx = activity_context(build_dfg(make_log([("A", "B", "A")])), "A")
    assert dict(ctx.predecessors) == {START: 1, "B": 1}
    assert dict(ctx.successors) == {"B": 1, END: 1}
    assert ctx.total_in == ctx.total_out == 2


def test_unknown_activity():
    with pytest.raises(UnknownActivity):
        activity_context(build_dfg(make_log([("A",)])), "Z")


def test_coverage_ratios():
    log = make_log([("X", "T")] * 3 + [("Y", "T")])
    ctx = activity_context(build_dfg(log), "T")
    assert coverage(ctx, {"X"}, "in") == 0.75
    assert coverage(ctx, {"X", "Y"}, "in") == 1.0
    assert coverage(ctx, {"Q"}, "in") == 0.0
    assert coverage(ctx, {END}, "out") == 1.0


def test_coverage_needs_valid_set_and_transitions():
    ctx = activity_context(build_dfg(make_log([("A",)])), "A")
    with pytest.raises(ValueError):
        coverage(ctx, set(), "in")
    from pcef.context import ActivityContext

    with pytest.raises(ZeroTotal):
        coverage(ActivityContext("Q", {}, {}), {"A"}, "in")


def test_ranked_and_top():
    log = make_log([("X", "T")] * 3 + [("Y", "T")] + [("A", "T")])
    ctx = activity_context(build_dfg(log), "T")
    assert ctx.ranked("in")[0] == ("X", 3, 0.6)
    assert ctx.top("in", 2) == {"X", "A"}  # tie between A and Y resolved by label
    assert "predecessors of T" in context_tables(ctx)
