"""Synthetic event logs with a ground-truth ledger.

:func:`generate` draws cases from weighted activity templates and plants
rework loops, failure terminations, robot executions and out-of-hours
executions of a target activity.  Every planted quantity is counted into a
:class:`GroundTruthLedger` while the log is emitted, so evaluators can be
checked for exact equality instead of statistical closeness.
"""
from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

from .criteria import WEEKDAY_NAMES, BusinessHours
from .errors import InvalidSpec
from .event_log import (
    END,
    RESERVED_LABELS,
    START,
    Case,
    ColumnMapping,
    Event,
    EventLog,
    resolve_zone,
    write_csv,
)

SOURCE_ATTRIBUTE = "(case) Source"
CATEGORY_ATTRIBUTE = "(case) Item Category"

#: Column mapping used for generated CSV files.
SYNTH_MAPPING = ColumnMapping(case_attribute_columns=(SOURCE_ATTRIBUTE, CATEGORY_ATTRIBUTE))

_MS = timedelta(milliseconds=1)
_EPOCH = datetime(2018, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic log.

    ``inter_event_gap`` is a ``(min, max)`` range in seconds (equal bounds
    give a fixed gap).  ``out_of_hours_share`` is the probability that an
    execution of the target is placed outside ``business_hours``; all other
    target executions are placed inside them.
    """

    n_cases: int = 100
    variant_templates: tuple[tuple[tuple[str, ...], float], ...] = (
        (("Create Order", "Change Quantity", "Approve Order"), 1.0),
    )
    target_activity: str = "Change Quantity"
    failure_activity: str = "Delete Item"
    rework_probability: float = 0.0
    terminal_failure_probability: float = 0.0
    user_pool: tuple[str, ...] = ("user_000",)
    robot_pool: tuple[str, ...] = ("batch_000",)
    robot_user_share: float = 0.0
    out_of_hours_share: float = 0.0
    inter_event_gap: tuple[float, float] = (3600.0, 3600.0)
    start_window: tuple[datetime, datetime] = (_EPOCH, _EPOCH + timedelta(days=30))
    source_systems: tuple[str, ...] = ("sourceSystemID_0000",)
    categories: tuple[str, ...] = ("3-way match, invoice before GR",)
    business_hours: BusinessHours = BusinessHours()
    seed: int = 0

    def __post_init__(self):
        templates = tuple((tuple(seq), float(p)) for seq, p in self.variant_templates)
        object.__setattr__(self, "variant_templates", templates)
        for name in ("user_pool", "robot_pool", "source_systems", "categories"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "inter_event_gap", tuple(float(x) for x in self.inter_event_gap))
        object.__setattr__(self, "start_window", tuple(self.start_window))
        self.validate()

    def validate(self) -> None:
        if self.n_cases < 1:
            raise InvalidSpec("n_cases", "must be at least 1")
        if not self.variant_templates:
            raise InvalidSpec("variant_templates", "at least one template is required")
        total = math.fsum(p for _, p in self.variant_templates)
        if abs(total - 1.0) > 1e-9:
            raise InvalidSpec("variant_templates", f"probabilities sum to {total}, not 1")
        for seq, p in self.variant_templates:
            if not 0.0 <= p <= 1.0:
                raise InvalidSpec("variant_templates", f"probability {p} outside [0, 1]")
            if not seq or any(not a.strip() for a in seq):
                raise InvalidSpec("variant_templates", "sequences must be non-empty with non-empty labels")
            if RESERVED_LABELS & set(seq):
                raise InvalidSpec("variant_templates", "sequences may not use reserved labels")
            if self.failure_activity in seq:
                raise InvalidSpec("variant_templates", "the failure activity is planted, not templated")
            if seq.count(self.target_activity) > 1:
                raise InvalidSpec("variant_templates", "a template may contain the target at most once")
        for name in ("rework_probability", "terminal_failure_probability", "robot_user_share", "out_of_hours_share"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidSpec(name, f"{value} outside [0, 1]")
        if self.rework_probability + self.terminal_failure_probability > 1.0:
            raise InvalidSpec("rework_probability", "rework and terminal failure probabilities exceed 1 together")
        if self.failure_activity == self.target_activity:
            raise InvalidSpec("failure_activity", "must differ from the target activity")
        for name in ("user_pool", "source_systems", "categories"):
            if not getattr(self, name):
                raise InvalidSpec(name, "must be non-empty")
        if self.robot_user_share > 0 and not self.robot_pool:
            raise InvalidSpec("robot_pool", "needed when robot_user_share > 0")
        lo, hi = self.inter_event_gap
        if lo < 0 or hi < lo:
            raise InvalidSpec("inter_event_gap", "need 0 <= min <= max")
        a, b = self.start_window
        if a.tzinfo is None or b.tzinfo is None or b < a:
            raise InvalidSpec("start_window", "need two zone-aware instants in order")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed", "must be a 64-bit unsigned integer")

    def template_neighbours(self) -> tuple[frozenset[str], frozenset[str]]:
        """Labels directly before/after the target across all templates (START/END at the edges)."""
        preds, succs = set(), set()
        for seq, _ in self.variant_templates:
            if self.target_activity in seq:
                i = seq.index(self.target_activity)
                preds.add(seq[i - 1] if i > 0 else START)
                succs.add(seq[i + 1] if i + 1 < len(seq) else END)
        return frozenset(preds), frozenset(succs)


@dataclass
class GroundTruthLedger:
    """Quantities recorded while emitting a synthetic log."""

    target_activity: str
    n_cases: int = 0
    n_events: int = 0
    variant_counts: Counter = field(default_factory=Counter)
    dfg: Counter = field(default_factory=Counter)
    target_cases: set = field(default_factory=set)
    rework_cases: set = field(default_factory=set)
    terminal_cases: set = field(default_factory=set)
    compliant_variants: set = field(default_factory=set)
    incompliant_variants: set = field(default_factory=set)
    target_executions: int = 0
    out_of_hours_events: list = field(default_factory=list)
    robot_executions: int = 0
    user_activity: Counter = field(default_factory=Counter)
    users_per_target_case: dict = field(default_factory=dict)
    process_users: set = field(default_factory=set)
    throughput_ms: dict = field(default_factory=dict)
    case_systems: dict = field(default_factory=dict)
    target_per_day: Counter = field(default_factory=Counter)
    first_timestamp: Optional[datetime] = None
    last_timestamp: Optional[datetime] = None

    # -- derived expectations -------------------------------------------

    def expected_frequency(self, bucket: str = "day") -> dict[str, float]:
        """Per-bucket statistics of the target, zero-filled over the log's UTC span."""
        first = self.first_timestamp.date()
        last = self.last_timestamp.date()
        counts: dict[tuple, int] = {}
        d = first
        while d <= last:
            if bucket == "day":
                key = (d.year, d.month, d.day)
            elif bucket == "week":
                key = d.isocalendar()[:2]
            else:
                key = (d.year, d.month)
            counts.setdefault(key, 0)
            counts[key] += self.target_per_day.get(d, 0)
            d += timedelta(days=1)
        values = list(counts.values())
        n_days = (last - first).days + 1
        return {
            "total_occurrences": self.target_executions,
            "n_buckets": len(values),
            "mean_per_bucket": self.target_executions / len(values),
            "min_per_bucket": min(values),
            "max_per_bucket": max(values),
            "mean_per_day": self.target_executions / n_days,
        }

    def expected_metrics(self, bucket: str = "day") -> dict[str, dict[str, float]]:
        """Expected evaluator metrics, assuming the template neighbours as valid sets.

        Ratios use the cases that contain the target as denominator.
        """
        n_target = len(self.target_cases)
        out: dict[str, dict[str, float]] = {}
        containing = [v for v in self.variant_counts if self.target_activity in v]
        out["maturity"] = {
            "n_variants_containing": len(containing),
            "n_compliant_variants": len(self.compliant_variants),
            "n_incompliant_variants": len(self.incompliant_variants),
        }
        out["standardization"] = {
            "n_variants_containing": len(containing),
            "n_variants": len(self.variant_counts),
            "n_distinct_activities": len({a for v in self.variant_counts for a in v}),
        }
        if n_target:
            failed = self.rework_cases | self.terminal_target_cases
            out["failure_rate"] = {
                "n_cases_with_activity": n_target,
                "rework_ratio": len(self.rework_cases) / n_target,
                "terminal_failure_ratio": len(self.terminal_target_cases) / n_target,
                "failure_rate": len(failed) / n_target,
            }
            out["urgency"] = {
                "n_executions": self.target_executions,
                "n_out_of_hours": len(self.out_of_hours_events),
                "out_of_hours_ratio": len(self.out_of_hours_events) / self.target_executions,
            }
            out["frequency"] = self.expected_frequency(bucket)
            with_t = [self.throughput_ms[c] for c in self.throughput_ms if c in self.target_cases]
            without = [self.throughput_ms[c] for c in self.throughput_ms if c not in self.target_cases]
            day_ms = 86_400_000
            out["duration"] = {
                "n_cases_with": len(with_t),
                "n_cases_without": len(without),
                "mean_throughput_with": math.fsum(with_t) / len(with_t) / day_ms,
            }
            if without:
                out["duration"]["mean_throughput_without"] = math.fsum(without) / len(without) / day_ms
                out["duration"]["delta"] = (
                    out["duration"]["mean_throughput_with"] - out["duration"]["mean_throughput_without"]
                )
            out["resources"] = {
                "n_distinct_users_on_activity": len(self.user_activity),
                "mean_users_per_case": math.fsum(self.users_per_target_case.values()) / n_target,
                "n_users_in_process": len(self.process_users),
                "missing_resource_ratio": 0.0,
            }
            human_share = (self.target_executions - self.robot_executions) / self.target_executions
            out["human_error_proneness"] = {
                "human_share": human_share,
                "failure_rate": out["failure_rate"]["failure_rate"],
                "human_error_rate": out["failure_rate"]["failure_rate"] * human_share,
            }
            out["number_of_systems"] = {
                "n_distinct_systems": len({self.case_systems[c] for c in self.target_cases}),
            }
        return out

    @property
    def terminal_target_cases(self) -> set:
        return self.terminal_cases & self.target_cases

    def to_dict(self) -> dict[str, Any]:
        def iso(ts):
            return None if ts is None else ts.isoformat(timespec="milliseconds").replace("+00:00", "Z")

        return {
            "schema_version": "1",
            "target_activity": self.target_activity,
            "n_cases": self.n_cases,
            "n_events": self.n_events,
            "first_timestamp": iso(self.first_timestamp),
            "last_timestamp": iso(self.last_timestamp),
            "variants": [
                {"sequence": list(seq), "count": n}
                for seq, n in sorted(self.variant_counts.items(), key=lambda kv: (-kv[1], kv[0]))
            ],
            "dfg": [
                {"from": a, "to": b, "count": n} for (a, b), n in sorted(self.dfg.items())
            ],
            "target_cases": sorted(self.target_cases),
            "rework_cases": sorted(self.rework_cases),
            "terminal_cases": sorted(self.terminal_cases),
            "compliant_variants": sorted(list(v) for v in self.compliant_variants),
            "incompliant_variants": sorted(list(v) for v in self.incompliant_variants),
            "target_executions": self.target_executions,
            "robot_executions": self.robot_executions,
            "out_of_hours_events": [[c, i] for c, i in self.out_of_hours_events],
            "user_activity": dict(sorted(self.user_activity.items())),
            "users_per_target_case": dict(sorted(self.users_per_target_case.items())),
            "process_users": sorted(self.process_users),
            "throughput_ms": dict(sorted(self.throughput_ms.items())),
            "case_systems": dict(sorted(self.case_systems.items())),
            "target_per_day": {d.isoformat(): n for d, n in sorted(self.target_per_day.items())},
            "expected_metrics": self.expected_metrics(),
        }


# ---------------------------------------------------------------------------


def _local(ts: datetime, hours: BusinessHours) -> datetime:
    return ts.astimezone(resolve_zone(hours.zone))


def _place(candidate: datetime, outside: bool, hours: BusinessHours) -> datetime:
    """Earliest instant >= candidate on the requested side of the business-hours boundary."""
    local = _local(candidate, hours)
    zone = resolve_zone(hours.zone)
    inside_now = local.weekday() in hours.weekdays and hours.start <= local.time() < hours.end
    if outside:
        if not inside_now:
            return candidate
        # the closing instant itself is already outside (half-open window)
        return datetime.combine(local.date(), hours.end, zone).astimezone(timezone.utc)
    if inside_now:
        return candidate
    d = local.date()
    if local.weekday() in hours.weekdays and local.time() < hours.start:
        return datetime.combine(d, hours.start, zone).astimezone(timezone.utc)
    d += timedelta(days=1)
    while d.weekday() not in hours.weekdays:
        d += timedelta(days=1)
    return datetime.combine(d, hours.start, zone).astimezone(timezone.utc)


def generate(spec: SynthSpec) -> tuple[EventLog, GroundTruthLedger]:
    """Draw a log from ``spec``; identical specs give identical logs and ledgers."""
    spec.validate()
    if not spec.business_hours.weekdays and spec.out_of_hours_share < 1.0:
        raise InvalidSpec("business_hours", "no business days to place in-hours executions on")
    rng = random.Random(spec.seed)
    target = spec.target_activity
    ledger = GroundTruthLedger(target_activity=target)
    seqs = [seq for seq, _ in spec.variant_templates]
    cum = []
    acc = 0.0
    for _, p in spec.variant_templates:
        acc += p
        cum.append(acc)
    win_lo, win_hi = spec.start_window
    span_ms = int((win_hi - win_lo) / _MS)
    gap_lo = round(spec.inter_event_gap[0] * 1000)
    gap_hi = round(spec.inter_event_gap[1] * 1000)
    width = len(str(spec.n_cases))

    cases = []
    for i in range(spec.n_cases):
        case_id = f"case_{i:0{width}d}"
        template = seqs[rng.choices(range(len(seqs)), cum_weights=cum)[0]]
        u = rng.random()
        reworked = u < spec.rework_probability and target in template
        failed = (not reworked) and spec.rework_probability <= u < spec.rework_probability + spec.terminal_failure_probability
        sequence = list(template)
        if reworked:
            j = sequence.index(target)
            sequence.insert(j + 1, target)
        if failed:
            sequence.append(spec.failure_activity)
        sequence = tuple(sequence)

        system = rng.choice(spec.source_systems)
        category = rng.choice(spec.categories)
        ts = win_lo + rng.randint(0, span_ms) * _MS
        events = []
        target_users = set()
        for k, activity in enumerate(sequence):
            if k:
                ts = ts + rng.randint(gap_lo, gap_hi) * _MS
            if activity == target:
                outside = rng.random() < spec.out_of_hours_share
                ts = _place(ts, outside, spec.business_hours)
                if rng.random() < spec.robot_user_share:
                    resource = rng.choice(spec.robot_pool)
                    ledger.robot_executions += 1
                else:
                    resource = rng.choice(spec.user_pool)
                ledger.target_executions += 1
                ledger.user_activity[resource] += 1
                ledger.target_per_day[ts.date()] += 1
                target_users.add(resource)
                if outside:
                    ledger.out_of_hours_events.append((case_id, k))
            else:
                resource = rng.choice(spec.user_pool)
            events.append(Event(case_id, activity, ts, resource, {}))

        case = Case(case_id, tuple(events), {SOURCE_ATTRIBUTE: system, CATEGORY_ATTRIBUTE: category})
        cases.append(case)

        ledger.n_cases += 1
        ledger.n_events += len(events)
        ledger.variant_counts[sequence] += 1
        ledger.dfg[(START, sequence[0])] += 1
        for a, b in zip(sequence, sequence[1:]):
            ledger.dfg[(a, b)] += 1
        ledger.dfg[(sequence[-1], END)] += 1
        ledger.throughput_ms[case_id] = int((events[-1].timestamp - events[0].timestamp) / _MS)
        ledger.case_systems[case_id] = system
        if failed:
            ledger.terminal_cases.add(case_id)
        if target in template:
            ledger.target_cases.add(case_id)
            ledger.users_per_target_case[case_id] = len(target_users)
            ledger.process_users.update(ev.resource for ev in events)
            if reworked:
                ledger.rework_cases.add(case_id)
            if reworked or failed:
                ledger.incompliant_variants.add(sequence)
            else:
                ledger.compliant_variants.add(sequence)
        if ledger.first_timestamp is None or events[0].timestamp < ledger.first_timestamp:
            ledger.first_timestamp = events[0].timestamp
        if ledger.last_timestamp is None or events[-1].timestamp > ledger.last_timestamp:
            ledger.last_timestamp = events[-1].timestamp

    return EventLog(tuple(cases)), ledger


# ---------------------------------------------------------------------------
# files


def _iso(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat(timespec="milliseconds").replace("+00:00", "Z")


def spec_from_dict(data: Mapping[str, Any]) -> SynthSpec:
    """Build a spec from a TOML/JSON table.

    Templates are given as ``[[variant_templates]]`` tables with
    ``sequence`` and ``probability``; instants as ISO 8601 strings or TOML
    datetimes; business hours like the assessment config.
    """
    from .config import business_hours_from_dict, to_instant

    known = set(SynthSpec.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise InvalidSpec(sorted(unknown)[0], "unknown field")
    kw = dict(data)
    try:
        if "variant_templates" in kw:
            kw["variant_templates"] = tuple(
                (tuple(t["sequence"]), float(t["probability"])) if isinstance(t, Mapping) else (tuple(t[0]), float(t[1]))
                for t in kw["variant_templates"]
            )
        if "start_window" in kw:
            kw["start_window"] = tuple(to_instant(x) for x in kw["start_window"])
        if "business_hours" in kw:
            kw["business_hours"] = business_hours_from_dict(kw["business_hours"])
        return SynthSpec(**kw)
    except InvalidSpec:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec("spec", str(exc)) from None


def load_spec(path: Union[str, Path]) -> SynthSpec:
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = json.loads(path.read_text(encoding="utf-8"))
    else:
        from .config import load_toml

        data = load_toml(path)
    return spec_from_dict(data)


def _toml_str(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _toml_list(items: Sequence[str]) -> str:
    return "[" + ", ".join(_toml_str(x) for x in items) + "]"


def assessment_toml(spec: SynthSpec) -> str:
    """A config file that assesses the target with the generator's own compliance sets."""
    preds, succs = spec.template_neighbours()
    hours = spec.business_hours
    lines = [
        "[assessment]",
        f"target_activity = {_toml_str(spec.target_activity)}",
    ]
    if preds:
        lines.append(f"valid_predecessors = {_toml_list(sorted(preds))}")
        lines.append(f"valid_successors = {_toml_list(sorted(succs))}")
    lines += [
        f"failure_terminal_activities = {_toml_list([spec.failure_activity])}",
        f"robot_resource_patterns = {_toml_list(_robot_patterns(spec))}",
        f"system_attribute = {_toml_str(SOURCE_ATTRIBUTE)}",
        "",
        "[assessment.business_hours]",
        f"weekdays = {_toml_list([WEEKDAY_NAMES[d] for d in sorted(hours.weekdays)])}",
        f'start = "{hours.start:%H:%M:%S}"',
        f'end = "{hours.end:%H:%M:%S}"',
        f"zone = {_toml_str(hours.zone)}",
        "",
        "[mapping]",
        f"case_id_column = {_toml_str(SYNTH_MAPPING.case_id_column)}",
        f"activity_column = {_toml_str(SYNTH_MAPPING.activity_column)}",
        f"timestamp_column = {_toml_str(SYNTH_MAPPING.timestamp_column)}",
        f"timestamp_pattern = {_toml_str(SYNTH_MAPPING.timestamp_pattern)}",
        f"resource_column = {_toml_str(SYNTH_MAPPING.resource_column)}",
        f"case_attribute_columns = {_toml_list(SYNTH_MAPPING.case_attribute_columns)}",
        "",
    ]
    return "\n".join(lines)


def _robot_patterns(spec: SynthSpec) -> list[str]:
    # the pool names themselves identify robots exactly
    return sorted(set(spec.robot_pool) - set(spec.user_pool)) if spec.robot_user_share > 0 else []


def write_outputs(spec: SynthSpec, out_dir: Union[str, Path]) -> dict[str, Path]:
    """Generate and write ``log.csv``, ``ledger.json`` and ``assessment.toml`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    log, ledger = generate(spec)
    paths = {
        "log": out / "log.csv",
        "ledger": out / "ledger.json",
        "config": out / "assessment.toml",
    }
    write_csv(log, paths["log"], SYNTH_MAPPING)
    paths["ledger"].write_text(json.dumps(ledger.to_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    paths["config"].write_text(assessment_toml(spec), encoding="utf-8")
    return paths
