"""Directly-follows relations and per-activity predecessor/successor context."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping

from .errors import EmptyLog, UnknownActivity, ZeroTotal
from .event_log import END, START, EventLog

DFG = Mapping[tuple[str, str], int]
Direction = Literal["in", "out"]


def build_dfg(log: EventLog) -> Counter:
    """Count strictly adjacent activity pairs, with START/END boundary edges."""
    if not log.cases:
        raise EmptyLog("cannot build a directly-follows graph from an empty log")
    dfg: Counter = Counter()
    for case in log.cases:
        acts = case.activities
        dfg[(START, acts[0])] += 1
        for a, b in zip(acts, acts[1:]):
            dfg[(a, b)] += 1
        dfg[(acts[-1], END)] += 1
    return dfg


@dataclass(frozen=True)
class ActivityContext:
    activity: str
    predecessors: Mapping[str, int] = field(default_factory=dict)
    successors: Mapping[str, int] = field(default_factory=dict)

    @property
    def total_in(self) -> int:
        return sum(self.predecessors.values())

    @property
    def total_out(self) -> int:
        return sum(self.successors.values())

    def ranked(self, direction: Direction) -> list[tuple[str, int, float]]:
        """``(label, count, share)`` rows, most frequent first, ties by label."""
        counts = self.predecessors if direction == "in" else self.successors
        total = sum(counts.values())
        rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [(label, n, n / total if total else 0.0) for label, n in rows]

    def top(self, direction: Direction, k: int) -> frozenset[str]:
        return frozenset(label for label, _, _ in self.ranked(direction)[:k])


def activity_context(dfg: DFG, activity: str) -> ActivityContext:
    preds: dict[str, int] = {}
    succs: dict[str, int] = {}
    for (a, b), n in dfg.items():
        if b == activity:
            preds[a] = preds.get(a, 0) + n
        if a == activity:
            succs[b] = succs.get(b, 0) + n
    if not preds and not succs:
        raise UnknownActivity(activity)
    return ActivityContext(activity, preds, succs)


def coverage(context: ActivityContext, valid_set: Iterable[str], direction: Direction) -> float:
    """Share of incoming (``"in"``) or outgoing (``"out"``) transitions drawn from ``valid_set``."""
    valid = set(valid_set)
    if not valid:
        raise ValueError("valid_set must be non-empty")
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    counts = context.predecessors if direction == "in" else context.successors
    total = sum(counts.values())
    if total == 0:
        raise ZeroTotal(f"activity {context.activity!r} has no {direction}going transitions")
    return sum(n for label, n in counts.items() if label in valid) / total


def context_tables(context: ActivityContext) -> str:
    """Plain-text predecessor and successor tables with shares."""
    out = []
    for title, direction in (("predecessors", "in"), ("successors", "out")):
        out.append(f"# {title} of {context.activity}")
        out.append("rank\tcount\tshare\tlabel")
        for rank, (label, n, share) in enumerate(context.ranked(direction), 1):
            out.append(f"{rank}\t{n}\t{share:.4f}\t{label}")
        out.append("")
    return "\n".join(out)
