"""The thirteen RPA-suitability criteria and their evaluators.

Nine criteria are computed from the event log.  Determinism,
structuredness, interfaces and stability need evidence that back-end event
logs do not carry (user-interface interaction data, exception records); they
are evidence slots that either hold a manually supplied score or report that
they cannot be evaluated.

Every evaluator is a pure function of ``(log, config)`` and returns a
:class:`CriterionResult`.  Ratios are in ``[0, 1]``; durations are in days.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta
from typing import Literal, Mapping, Optional, Sequence

from .context import ActivityContext, activity_context, build_dfg, coverage
from .errors import UnknownActivity, UnknownCriterion
from .event_log import END, RESERVED_LABELS, START, Case, EventLog, resolve_zone
from .variants import VariantTable, build_variant_table, variants_containing

Bucket = Literal["day", "week", "month"]

#: (criterion id, perspective) in framework order.
CRITERIA: tuple[tuple[str, str], ...] = (
    ("standardization", "task"),
    ("maturity", "task"),
    ("determinism", "task"),
    ("failure_rate", "task"),
    ("frequency", "time"),
    ("duration", "time"),
    ("urgency", "time"),
    ("structuredness", "data"),
    ("interfaces", "system"),
    ("stability", "system"),
    ("number_of_systems", "system"),
    ("resources", "human"),
    ("human_error_proneness", "human"),
)
CRITERION_IDS = tuple(cid for cid, _ in CRITERIA)
PERSPECTIVE_OF = dict(CRITERIA)
PERSPECTIVES = ("task", "time", "data", "system", "human")
EXTERNAL_CRITERIA = ("determinism", "structuredness", "interfaces", "stability")

_EXTERNAL_REASONS = {
    "determinism": "requires user-interface interaction data",
    "structuredness": "requires user-interface interaction data",
    "interfaces": "requires user-interface interaction data",
    "stability": "requires user-interface interaction data",
}
_EXTERNAL_DETAIL = {
    "determinism": "the log does not show how the activity is performed on the presentation layer",
    "structuredness": "the log carries no information about the data objects the activity reads or writes",
    "interfaces": "the log carries no information about application interfaces or execution steps",
    "stability": "the log carries no information about software or hardware exceptions and their causes",
}

WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")


class Status(str, enum.Enum):
    COMPUTED = "computed"
    EXTERNAL = "external"
    NOT_EVALUABLE = "not_evaluable"


@dataclass(frozen=True)
class CriterionResult:
    criterion_id: str
    perspective: str
    status: Status
    metrics: Mapping[str, float] = field(default_factory=dict)
    normalized_score: Optional[float] = None
    narrative: str = ""
    reason: Optional[str] = None

    def __post_init__(self):
        if self.criterion_id not in PERSPECTIVE_OF:
            raise UnknownCriterion(self.criterion_id)
        if PERSPECTIVE_OF[self.criterion_id] != self.perspective:
            raise ValueError(f"{self.criterion_id} belongs to the {PERSPECTIVE_OF[self.criterion_id]} perspective")
        object.__setattr__(self, "status", Status(self.status))
        if self.status is Status.COMPUTED and not self.metrics:
            raise ValueError(f"{self.criterion_id}: computed result without metrics")
        if self.status is Status.NOT_EVALUABLE:
            if self.normalized_score is not None:
                raise ValueError(f"{self.criterion_id}: not-evaluable result cannot carry a score")
            if self.metrics:
                raise ValueError(f"{self.criterion_id}: not-evaluable result cannot carry metrics")
        if self.normalized_score is not None and not (0.0 <= self.normalized_score <= 1.0):
            raise ValueError(f"{self.criterion_id}: score {self.normalized_score} outside [0, 1]")

    @property
    def evaluable(self) -> bool:
        return self.status is not Status.NOT_EVALUABLE


def not_evaluable(criterion_id: str, reason: str, narrative: str = "") -> CriterionResult:
    return CriterionResult(
        criterion_id, PERSPECTIVE_OF[criterion_id], Status.NOT_EVALUABLE,
        narrative=narrative or f"Not evaluable: {reason}.", reason=reason,
    )


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ScoreMap:
    """Piecewise-linear map from a metric value onto ``[0, 1]``.

    ``points`` are ``(x, y)`` breakpoints with strictly increasing ``x``;
    values outside the breakpoint range are clamped to the end values.
    """

    metric: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        if len(pts) < 2:
            raise ValueError(f"score map for {self.metric!r} needs at least two breakpoints")
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            raise ValueError(f"score map for {self.metric!r}: x must be strictly increasing")
        if any(not 0.0 <= y <= 1.0 for _, y in pts):
            raise ValueError(f"score map for {self.metric!r}: y must lie in [0, 1]")
        object.__setattr__(self, "points", pts)

    def __call__(self, value: float) -> float:
        pts = self.points
        if value <= pts[0][0]:
            return pts[0][1]
        if value >= pts[-1][0]:
            return pts[-1][1]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 <= value <= x1:
                return y0 + (y1 - y0) * (value - x0) / (x1 - x0)
        raise AssertionError("unreachable")


#: Defaults; higher score means a stronger automation case.
DEFAULT_SCORE_MAPS: Mapping[str, ScoreMap] = {
    "standardization": ScoreMap("mean_coverage", ((0.5, 0.0), (1.0, 1.0))),
    "maturity": ScoreMap("compliant_variant_share", ((0.0, 0.0), (1.0, 1.0))),
    "failure_rate": ScoreMap("failure_rate", ((0.0, 1.0), (0.2, 0.0))),
    "frequency": ScoreMap("mean_per_day", ((0.0, 0.0), (20.0, 1.0))),
    "duration": ScoreMap("delta", ((0.0, 0.0), (30.0, 1.0))),
    "urgency": ScoreMap("out_of_hours_ratio", ((0.0, 0.0), (0.5, 1.0))),
    "number_of_systems": ScoreMap("n_distinct_systems", ((1.0, 0.0), (5.0, 1.0))),
    "resources": ScoreMap("n_distinct_users_on_activity", ((1.0, 0.0), (50.0, 1.0))),
    "human_error_proneness": ScoreMap("human_error_rate", ((0.0, 0.0), (0.2, 1.0))),
}


@dataclass(frozen=True)
class BusinessHours:
    weekdays: frozenset[int] = frozenset(range(5))  # Monday == 0
    start: time = time(8, 0)
    end: time = time(18, 0)
    zone: str = "UTC"

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError("business hours start must be before end")
        if any(d not in range(7) for d in self.weekdays):
            raise ValueError("weekdays must be integers 0 (Monday) .. 6 (Sunday)")
        resolve_zone(self.zone)
        object.__setattr__(self, "weekdays", frozenset(self.weekdays))

    def contains(self, ts: datetime) -> bool:
        local = ts.astimezone(resolve_zone(self.zone))
        return local.weekday() in self.weekdays and self.start <= local.time() < self.end


@dataclass(frozen=True)
class Evidence:
    value: float
    note: str = ""

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"external evidence value {self.value} outside [0, 1]")


@dataclass(frozen=True)
class AssessmentConfig:
    """Everything an assessment of one activity needs besides the log.

    When ``valid_predecessors``/``valid_successors`` are omitted, the top
    ``top_k_predecessors``/``top_k_successors`` labels by transition count
    are taken as the compliant sets.
    """

    target_activity: str
    valid_predecessors: Optional[frozenset[str]] = None
    valid_successors: Optional[frozenset[str]] = None
    top_k_predecessors: int = 5
    top_k_successors: int = 2
    failure_terminal_activities: frozenset[str] = frozenset()
    rework_counts_as_failure: bool = True
    business_hours: BusinessHours = BusinessHours()
    frequency_bucket: Bucket = "day"
    frequency_window: Optional[tuple[datetime, datetime]] = None
    robot_resource_patterns: tuple[str, ...] = ()
    system_attribute: str = "(case) Source"
    external_evidence: Mapping[str, Evidence] = field(default_factory=dict)
    score_maps: Mapping[str, ScoreMap] = field(default_factory=lambda: dict(DEFAULT_SCORE_MAPS))

    def __post_init__(self):
        target = (self.target_activity or "").strip()
        if not target:
            raise ValueError("target_activity must be non-empty")
        if target in RESERVED_LABELS:
            raise ValueError(f"target_activity cannot be the reserved label {target!r}")
        object.__setattr__(self, "target_activity", target)
        for name in ("valid_predecessors", "valid_successors"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, frozenset(value))
        object.__setattr__(self, "failure_terminal_activities", frozenset(self.failure_terminal_activities))
        object.__setattr__(self, "robot_resource_patterns", tuple(self.robot_resource_patterns))
        if self.frequency_bucket not in ("day", "week", "month"):
            raise ValueError(f"frequency_bucket must be day, week or month, got {self.frequency_bucket!r}")
        if self.top_k_predecessors < 1 or self.top_k_successors < 1:
            raise ValueError("top-k values must be positive")
        for cid in self.external_evidence:
            if cid not in EXTERNAL_CRITERIA:
                raise UnknownCriterion(cid)
        maps = dict(DEFAULT_SCORE_MAPS)
        maps.update(self.score_maps)
        object.__setattr__(self, "score_maps", maps)
        if self.frequency_window is not None:
            lo, hi = self.frequency_window
            if not lo < hi:
                raise ValueError("frequency_window start must precede its end")

    def score(self, criterion_id: str, metrics: Mapping[str, float]) -> Optional[float]:
        smap = self.score_maps.get(criterion_id)
        if smap is None or smap.metric not in metrics:
            return None
        return smap(metrics[smap.metric])


# ---------------------------------------------------------------------------
# helpers


def _containing_cases(log: EventLog, activity: str) -> list[Case]:
    cases = [c for c in log.cases if activity in c.activities]
    if not cases:
        raise UnknownActivity(activity)
    return cases


def _target_events(cases: Sequence[Case], activity: str):
    return [ev for c in cases for ev in c.events if ev.activity == activity]


def _pct(x: float) -> str:
    return f"{100 * x:.2f}%"


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _mean_days(spans: Sequence[timedelta]) -> float:
    # exact integer sum, one correctly rounded division
    us = sum(s // timedelta(microseconds=1) for s in spans)
    return us / (len(spans) * 86_400_000_000)


def valid_sets(context: ActivityContext, config: AssessmentConfig) -> tuple[frozenset[str], frozenset[str]]:
    """Configured compliant predecessor/successor sets, or the auto-derived top-k."""
    preds = config.valid_predecessors
    succs = config.valid_successors
    if preds is None:
        preds = context.top("in", config.top_k_predecessors)
    if succs is None:
        succs = context.top("out", config.top_k_successors)
    return preds, succs


def variant_is_compliant(
    sequence: Sequence[str],
    activity: str,
    predecessors: frozenset[str],
    successors: frozenset[str],
    failure_terminals: frozenset[str],
) -> bool:
    positions = [i for i, a in enumerate(sequence) if a == activity]
    if len(positions) != 1:
        return False
    if sequence[-1] in failure_terminals:
        return False
    i = positions[0]
    pred = sequence[i - 1] if i > 0 else START
    succ = sequence[i + 1] if i + 1 < len(sequence) else END
    return pred in predecessors and succ in successors


def bucket_key(ts: datetime, bucket: Bucket, zone: str = "UTC") -> date:
    """Calendar bucket containing ``ts``: the day, the Monday of its week, or the first of its month."""
    d = ts.astimezone(resolve_zone(zone)).date()
    if bucket == "day":
        return d
    if bucket == "week":
        return d - timedelta(days=d.weekday())
    if bucket == "month":
        return d.replace(day=1)
    raise ValueError(f"unknown bucket {bucket!r}")


def _next_bucket(d: date, bucket: Bucket) -> date:
    if bucket == "day":
        return d + timedelta(days=1)
    if bucket == "week":
        return d + timedelta(days=7)
    return date(d.year + d.month // 12, d.month % 12 + 1, 1)


def bucket_range(first: datetime, last: datetime, bucket: Bucket, zone: str = "UTC") -> list[date]:
    """All buckets from the one holding ``first`` to the one holding ``last``, inclusive."""
    cur = bucket_key(first, bucket, zone)
    stop = bucket_key(last, bucket, zone)
    out = []
    while cur <= stop:
        out.append(cur)
        cur = _next_bucket(cur, bucket)
    return out


def _window_bounds(log: EventLog, config: AssessmentConfig) -> tuple[datetime, datetime, bool]:
    if config.frequency_window is not None:
        lo, hi = config.frequency_window
        return lo, hi, True
    lo, hi = log.time_span
    return lo, hi, False


def occurrences_per_bucket(log: EventLog, config: AssessmentConfig, bucket: Optional[Bucket] = None) -> dict[date, int]:
    """Target occurrences per calendar bucket, zero-filled across the analysis window.

    The window is ``config.frequency_window`` (half-open) when set, otherwise
    the log's time span.
    """
    bucket = bucket or config.frequency_bucket
    zone = config.business_hours.zone
    lo, hi, half_open = _window_bounds(log, config)
    last = hi - timedelta(milliseconds=1) if half_open else hi
    counts = {k: 0 for k in bucket_range(lo, last, bucket, zone)}
    for ev in log.events():
        if ev.activity != config.target_activity:
            continue
        if ev.timestamp < lo or (ev.timestamp >= hi if half_open else ev.timestamp > hi):
            continue
        counts[bucket_key(ev.timestamp, bucket, zone)] += 1
    return counts


def _is_robot(resource: Optional[str], patterns: Sequence[str]) -> bool:
    if resource is None:
        return False
    low = resource.lower()
    return any(p.lower() in low for p in patterns)


# ---------------------------------------------------------------------------
# task perspective


def eval_standardization(
    log: EventLog,
    config: AssessmentConfig,
    *,
    dfg=None,
    table: Optional[VariantTable] = None,
) -> CriterionResult:
    target = config.target_activity
    dfg = dfg if dfg is not None else build_dfg(log)
    ctx = activity_context(dfg, target)
    preds, succs = valid_sets(ctx, config)
    table = table or build_variant_table(log)
    pred_cov = coverage(ctx, preds, "in")
    succ_cov = coverage(ctx, succs, "out")
    metrics = {
        "n_variants_containing": len(variants_containing(table, target)),
        "n_variants": len(table),
        "pred_coverage": pred_cov,
        "succ_coverage": succ_cov,
        "mean_coverage": (pred_cov + succ_cov) / 2,
        "n_valid_predecessors": len(preds),
        "n_valid_successors": len(succs),
        "n_distinct_activities": len(log.activity_alphabet),
    }
    source = "configured" if config.valid_predecessors is not None else "most frequent"
    narrative = (
        f"{len(preds)} {source} valid predecessors cover {_pct(pred_cov)} of incoming transitions; "
        f"{len(succs)} valid successors cover {_pct(succ_cov)} of outgoing transitions. "
        f"The activity appears in {metrics['n_variants_containing']} of {len(table)} variants "
        f"over {len(log.activity_alphabet)} distinct activities."
    )
    return CriterionResult(
        "standardization", "task", Status.COMPUTED, metrics, config.score("standardization", metrics), narrative
    )


def eval_maturity(
    log: EventLog,
    config: AssessmentConfig,
    window: Optional[Bucket] = None,
    *,
    dfg=None,
    table: Optional[VariantTable] = None,
) -> CriterionResult:
    """Compliant vs. incompliant variants containing the target, and variant churn per window.

    A variant is compliant when it holds the target exactly once, between a
    valid predecessor and a valid successor, and does not end in a failure
    terminal.
    """
    target = config.target_activity
    window = window or config.frequency_bucket
    dfg = dfg if dfg is not None else build_dfg(log)
    preds, succs = valid_sets(activity_context(dfg, target), config)
    table = table or build_variant_table(log)
    containing = variants_containing(table, target)

    compliant = [
        v for v in containing
        if variant_is_compliant(v.sequence, target, preds, succs, config.failure_terminal_activities)
    ]
    n_cases = sum(v.count for v in containing)
    n_bad_cases = n_cases - sum(v.count for v in compliant)

    starts = {c.case_id: c.start for c in log.cases}
    zone = config.business_hours.zone
    lo, hi = log.time_span
    new_per_window = Counter({k: 0 for k in bucket_range(lo, hi, window, zone)})
    for v in containing:
        first_seen = min(starts[cid] for cid in v.case_ids)
        new_per_window[bucket_key(first_seen, window, zone)] += 1

    metrics = {
        "n_variants_containing": len(containing),
        "n_compliant_variants": len(compliant),
        "n_incompliant_variants": len(containing) - len(compliant),
        "compliant_variant_share": len(compliant) / len(containing),
        "n_incompliant_cases": n_bad_cases,
        "incompliant_case_ratio": n_bad_cases / n_cases,
        "n_windows": len(new_per_window),
        "new_variants_per_window_mean": len(containing) / len(new_per_window),
    }
    narrative = (
        f"{len(containing)} variants contain the activity; {len(compliant)} follow compliant "
        f"predecessors and successors, {metrics['n_incompliant_variants']} are incompliant "
        f"({_pct(metrics['incompliant_case_ratio'])} of the cases). On average "
        f"{metrics['new_variants_per_window_mean']:.3g} new variants appear per {window}."
    )
    return CriterionResult("maturity", "task", Status.COMPUTED, metrics, config.score("maturity", metrics), narrative)


def failure_case_sets(log: EventLog, config: AssessmentConfig) -> tuple[list[Case], set[str], set[str]]:
    """Cases containing the target plus the ids of reworked and failure-terminated ones."""
    target = config.target_activity
    cases = _containing_cases(log, target)
    rework = {c.case_id for c in cases if c.activities.count(target) >= 2}
    terminal = {c.case_id for c in cases if c.events[-1].activity in config.failure_terminal_activities}
    return cases, rework, terminal


def eval_failure_rate(log: EventLog, config: AssessmentConfig) -> CriterionResult:
    """Rework (repeated target) and terminal-failure shares among cases with the target.

    ``failure_rate`` is the share of the union of both case sets, which
    equals the sum of the two components only when they are disjoint;
    ``component_sum`` and ``overlap_ratio`` are reported so the difference
    stays visible.
    """
    cases, rework, terminal = failure_case_sets(log, config)
    n = len(cases)
    failed = (rework | terminal) if config.rework_counts_as_failure else terminal
    metrics = {
        "n_cases_with_activity": n,
        "rework_ratio": len(rework) / n,
        "terminal_failure_ratio": len(terminal) / n,
        "overlap_ratio": len(rework & terminal) / n,
        "component_sum": (len(rework) + len(terminal)) / n,
        "failure_rate": len(failed) / n,
    }
    narrative = (
        f"Rework of the activity occurs in {_pct(metrics['rework_ratio'])} of its cases and "
        f"{_pct(metrics['terminal_failure_ratio'])} end in a failure activity; "
        f"the failure rate (union) is {_pct(metrics['failure_rate'])}."
    )
    if rework & terminal:
        narrative += (
            f" The two sets overlap in {_pct(metrics['overlap_ratio'])} of cases, so the plain sum "
            f"of the components ({_pct(metrics['component_sum'])}) overstates the failure rate."
        )
    if not config.rework_counts_as_failure:
        narrative += " Rework is configured not to count as failure."
    return CriterionResult(
        "failure_rate", "task", Status.COMPUTED, metrics, config.score("failure_rate", metrics), narrative
    )


# ---------------------------------------------------------------------------
# time perspective


def eval_frequency(log: EventLog, config: AssessmentConfig) -> CriterionResult:
    _containing_cases(log, config.target_activity)
    counts = occurrences_per_bucket(log, config)
    values = list(counts.values())
    total = sum(values)
    lo, hi, half_open = _window_bounds(log, config)
    last = hi - timedelta(milliseconds=1) if half_open else hi
    n_days = len(bucket_range(lo, last, "day", config.business_hours.zone))
    metrics = {
        "total_occurrences": total,
        "n_buckets": len(values),
        "mean_per_bucket": total / len(values),
        "min_per_bucket": min(values),
        "max_per_bucket": max(values),
        "mean_per_day": total / n_days,
    }
    narrative = (
        f"The activity occurs {total} times, {metrics['mean_per_bucket']:.4g} times per "
        f"{config.frequency_bucket} on average (min {metrics['min_per_bucket']}, "
        f"max {metrics['max_per_bucket']} over {len(values)} {config.frequency_bucket}s)."
    )
    return CriterionResult("frequency", "time", Status.COMPUTED, metrics, config.score("frequency", metrics), narrative)


def eval_duration(log: EventLog, config: AssessmentConfig) -> CriterionResult:
    """Mean case throughput (days) with and without the target activity.

    The execution time of the activity itself would need start timestamps;
    with completion-only events it is reported as not evaluable in the
    narrative.
    """
    target = config.target_activity
    _containing_cases(log, target)
    with_t = [c.throughput for c in log.cases if target in c.activities]
    without = [c.throughput for c in log.cases if target not in c.activities]
    metrics = {
        "n_cases_with": len(with_t),
        "n_cases_without": len(without),
        "mean_throughput_with": _mean_days(with_t),
        "mean_throughput_all": _mean_days(with_t + without),
    }
    if without:
        metrics["mean_throughput_without"] = _mean_days(without)
        metrics["delta"] = metrics["mean_throughput_with"] - metrics["mean_throughput_without"]
        narrative = (
            f"Cases with the activity take {metrics['mean_throughput_with']:.4g} days on average, "
            f"cases without it {metrics['mean_throughput_without']:.4g} days "
            f"(difference {metrics['delta']:.4g} days)."
        )
    else:
        narrative = (
            f"Cases with the activity take {metrics['mean_throughput_with']:.4g} days on average; "
            "every case contains the activity, so the with/without difference is not evaluable."
        )
    narrative += " The activity's own execution time is not evaluable: events carry no start timestamps."
    return CriterionResult("duration", "time", Status.COMPUTED, metrics, config.score("duration", metrics), narrative)


def eval_urgency(log: EventLog, config: AssessmentConfig) -> CriterionResult:
    events = _target_events(_containing_cases(log, config.target_activity), config.target_activity)
    hours = config.business_hours
    outside = sum(1 for ev in events if not hours.contains(ev.timestamp))
    metrics = {
        "n_executions": len(events),
        "n_out_of_hours": outside,
        "out_of_hours_ratio": outside / len(events),
    }
    days = ",".join(WEEKDAY_NAMES[d] for d in sorted(hours.weekdays))
    narrative = (
        f"{_pct(metrics['out_of_hours_ratio'])} of executions fall outside business hours "
        f"({days} {hours.start:%H:%M}-{hours.end:%H:%M} {hours.zone})."
    )
    return CriterionResult("urgency", "time", Status.COMPUTED, metrics, config.score("urgency", metrics), narrative)


# ---------------------------------------------------------------------------
# system perspective


def _system_values(case: Case, attribute: str) -> set:
    values = set()
    if attribute in case.case_attributes:
        values.add(case.case_attributes[attribute])
    for ev in case.events:
        if attribute in ev.attributes:
            values.add(ev.attributes[attribute])
    return values


def eval_number_of_systems(
    log: EventLog, config: AssessmentConfig, system_attribute: Optional[str] = None
) -> CriterionResult:
    attribute = system_attribute or config.system_attribute
    target = config.target_activity
    cases = [c for c in log.cases if target in c.activities]
    systems: set = set()
    for case in cases:
        systems |= _system_values(case, attribute)
    if not systems:
        return not_evaluable("number_of_systems", "no system attribute in log")
    metrics = {"n_distinct_systems": len(systems)}
    narrative = (
        f"{len(systems)} distinct source system(s) recorded in attribute {attribute!r}. "
        "A system that consolidates others may hide further systems, so this count is a lower bound."
    )
    return CriterionResult(
        "number_of_systems", "system", Status.COMPUTED, metrics, config.score("number_of_systems", metrics), narrative
    )


def eval_external(criterion_id: str, config: AssessmentConfig) -> CriterionResult:
    if criterion_id not in EXTERNAL_CRITERIA:
        raise UnknownCriterion(criterion_id)
    evidence = config.external_evidence.get(criterion_id)
    if evidence is None:
        return not_evaluable(
            criterion_id,
            _EXTERNAL_REASONS[criterion_id],
            f"Not evaluable from the event log: {_EXTERNAL_DETAIL[criterion_id]}.",
        )
    narrative = f"External evidence: {evidence.note}" if evidence.note else "External evidence supplied."
    return CriterionResult(
        criterion_id, PERSPECTIVE_OF[criterion_id], Status.EXTERNAL, {"evidence_value": evidence.value},
        evidence.value, narrative,
    )


# ---------------------------------------------------------------------------
# human perspective


def eval_resources(log: EventLog, config: AssessmentConfig) -> CriterionResult:
    target = config.target_activity
    cases = _containing_cases(log, target)
    events = _target_events(cases, target)
    users = {ev.resource for ev in events if ev.resource is not None}
    if not users:
        return not_evaluable("resources", "no resource attribute")
    per_case = [len({ev.resource for ev in c.events if ev.activity == target and ev.resource is not None}) for c in cases]
    process_users = {ev.resource for c in cases for ev in c.events if ev.resource is not None}
    missing = sum(1 for ev in events if ev.resource is None)
    metrics = {
        "n_distinct_users_on_activity": len(users),
        "mean_users_per_case": _mean(per_case),
        "n_users_in_process": len(process_users),
        "missing_resource_ratio": missing / len(events),
    }
    narrative = (
        f"{len(users)} different users execute the activity; {metrics['mean_users_per_case']:.3g} users "
        f"per case on average, {len(process_users)} users across the cases involved."
    )
    if missing:
        narrative += f" {_pct(metrics['missing_resource_ratio'])} of executions lack a resource."
    return CriterionResult("resources", "human", Status.COMPUTED, metrics, config.score("resources", metrics), narrative)


def eval_human_error_proneness(
    log: EventLog, config: AssessmentConfig, failure: Optional[CriterionResult] = None
) -> CriterionResult:
    """Failure rate attributable to humans.

    Executions whose resource matches none of ``robot_resource_patterns``
    (case-insensitive substrings) count as human, including executions with
    no recorded resource.
    """
    failure = failure or eval_failure_rate(log, config)
    target = config.target_activity
    events = _target_events(_containing_cases(log, target), target)
    human = sum(1 for ev in events if not _is_robot(ev.resource, config.robot_resource_patterns))
    human_share = human / len(events)
    rate = failure.metrics["failure_rate"]
    metrics = {
        "failure_rate": rate,
        "human_share": human_share,
        "human_error_rate": rate * human_share,
    }
    if human_share == 1.0:
        narrative = (
            f"All executions are by human users, so the whole failure rate of {_pct(rate)} "
            "is attributed to human error."
        )
    else:
        narrative = (
            f"{_pct(human_share)} of executions are by human users; the human-attributable "
            f"error rate is {_pct(metrics['human_error_rate'])}."
        )
    return CriterionResult(
        "human_error_proneness", "human", Status.COMPUTED, metrics,
        config.score("human_error_proneness", metrics), narrative,
    )


# ---------------------------------------------------------------------------


def evaluate_all(log: EventLog, config: AssessmentConfig) -> list[CriterionResult]:
    """All thirteen criteria, in framework order.

    Raises :class:`UnknownActivity` when the target does not occur in ``log``.
    """
    _containing_cases(log, config.target_activity)
    dfg = build_dfg(log)
    table = build_variant_table(log)
    failure = eval_failure_rate(log, config)
    by_id = {
        "standardization": eval_standardization(log, config, dfg=dfg, table=table),
        "maturity": eval_maturity(log, config, dfg=dfg, table=table),
        "failure_rate": failure,
        "frequency": eval_frequency(log, config),
        "duration": eval_duration(log, config),
        "urgency": eval_urgency(log, config),
        "number_of_systems": eval_number_of_systems(log, config),
        "resources": eval_resources(log, config),
        "human_error_proneness": eval_human_error_proneness(log, config, failure),
    }
    for cid in EXTERNAL_CRITERIA:
        by_id[cid] = eval_external(cid, config)
    return [by_id[cid] for cid in CRITERION_IDS]
