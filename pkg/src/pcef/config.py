"""TOML configuration files for assessments.

A config file has up to four tables; all are optional except that an
assessment needs ``assessment.target_activity`` from the file or the
command line::

    [assessment]
    target_activity = "Change Quantity"
    valid_predecessors = ["Create Purchase Order Item"]   # default: top-k by count
    valid_successors = ["Record Goods Receipt"]           # default: top-k by count
    top_k_predecessors = 5
    top_k_successors = 2
    failure_terminal_activities = ["Delete Purchase Order Item"]
    rework_counts_as_failure = true
    frequency_bucket = "day"                              # day | week | month
    frequency_window = ["2018-01-01T00:00:00Z", "2019-01-01T00:00:00Z"]
    robot_resource_patterns = ["batch"]
    system_attribute = "(case) Source"

    [assessment.business_hours]
    weekdays = ["mon", "tue", "wed", "thu", "fri"]
    start = "08:00"
    end = "18:00"
    zone = "UTC"

    [assessment.external_evidence.stability]
    value = 0.9
    note = "ops report: 2 outages/quarter"

    [assessment.score_maps.failure_rate]
    metric = "failure_rate"
    points = [[0.0, 1.0], [0.2, 0.0]]

    [weights]
    failure_rate = 2.0

    [mapping]          # CSV column mapping, see ColumnMapping
    case_id_column = "case_id"

    [filter]
    attributes = { "(case) Item Category" = "3-way match, invoice before GR" }
    year = 2018                  # or: window = [start, end]
    variant_coverage = 0.9
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from datetime import datetime, time, timezone
from pathlib import Path
from typing import Any, Mapping, Optional, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .criteria import (
    DEFAULT_SCORE_MAPS,
    WEEKDAY_NAMES,
    AssessmentConfig,
    BusinessHours,
    Evidence,
    ScoreMap,
)
from .errors import ConfigError
from .event_log import ColumnMapping, EventLog, filter_cases, parse_timestamp, year_window
from .variants import build_variant_table, coverage_filter


@dataclass(frozen=True)
class FilterSpec:
    attributes: Mapping[str, Any] = field(default_factory=dict)
    window: Optional[tuple[Optional[datetime], Optional[datetime]]] = None
    variant_coverage: Optional[float] = None

    def is_empty(self) -> bool:
        return not self.attributes and self.window is None and self.variant_coverage is None

    def apply(self, log: EventLog) -> EventLog:
        """Attribute/time filter first, then variant coverage on what remains."""
        if self.attributes or self.window is not None:
            log = filter_cases(log, self.attributes, self.window)
        if self.variant_coverage is not None and log.cases:
            log = coverage_filter(build_variant_table(log), log, self.variant_coverage)
        return log


def load_toml(path: Union[str, Path]) -> dict[str, Any]:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def to_instant(value: Any) -> datetime:
    if isinstance(value, datetime):
        return value if value.tzinfo else value.replace(tzinfo=timezone.utc)
    if isinstance(value, str):
        return parse_timestamp(value, "ISO8601")
    raise ConfigError(f"expected a timestamp, got {value!r}")


def _clock(value: Any) -> time:
    if isinstance(value, time):
        return value
    try:
        return time.fromisoformat(str(value))
    except ValueError:
        raise ConfigError(f"invalid clock time {value!r}") from None


def parse_weekday(value: Any) -> int:
    if isinstance(value, int) and 0 <= value <= 6:
        return value
    key = str(value).strip().lower()[:3]
    if key not in WEEKDAY_NAMES:
        raise ConfigError(f"invalid weekday {value!r}")
    return WEEKDAY_NAMES.index(key)


def business_hours_from_dict(data: Mapping[str, Any]) -> BusinessHours:
    kwargs: dict[str, Any] = {}
    if "weekdays" in data:
        kwargs["weekdays"] = frozenset(parse_weekday(d) for d in data["weekdays"])
    if "start" in data:
        kwargs["start"] = _clock(data["start"])
    if "end" in data:
        kwargs["end"] = _clock(data["end"])
    if "zone" in data:
        kwargs["zone"] = str(data["zone"])
    return BusinessHours(**kwargs)


_ASSESSMENT_KEYS = {
    "target_activity", "valid_predecessors", "valid_successors", "top_k_predecessors",
    "top_k_successors", "failure_terminal_activities", "rework_counts_as_failure",
    "business_hours", "frequency_bucket", "frequency_window", "robot_resource_patterns",
    "system_attribute", "external_evidence", "score_maps",
}


def assessment_kwargs(data: Mapping[str, Any]) -> dict[str, Any]:
    """Translate an ``[assessment]`` table into :class:`AssessmentConfig` keyword arguments."""
    unknown = set(data) - _ASSESSMENT_KEYS
    if unknown:
        raise ConfigError(f"unknown assessment keys: {', '.join(sorted(unknown))}")
    kw = dict(data)
    for key in ("valid_predecessors", "valid_successors", "failure_terminal_activities"):
        if key in kw:
            kw[key] = frozenset(kw[key])
    if "robot_resource_patterns" in kw:
        kw["robot_resource_patterns"] = tuple(kw["robot_resource_patterns"])
    if "business_hours" in kw:
        kw["business_hours"] = business_hours_from_dict(kw["business_hours"])
    if "frequency_window" in kw:
        lo, hi = kw["frequency_window"]
        kw["frequency_window"] = (to_instant(lo), to_instant(hi))
    if "external_evidence" in kw:
        kw["external_evidence"] = {
            cid: Evidence(float(ev["value"]), str(ev.get("note", "")))
            for cid, ev in kw["external_evidence"].items()
        }
    if "score_maps" in kw:
        maps = {}
        for cid, spec in kw["score_maps"].items():
            if isinstance(spec, Mapping):
                metric = spec.get("metric") or DEFAULT_SCORE_MAPS[cid].metric
                points = spec["points"]
            else:
                metric, points = DEFAULT_SCORE_MAPS[cid].metric, spec
            maps[cid] = ScoreMap(metric, tuple(tuple(p) for p in points))
        kw["score_maps"] = maps
    return kw


def filter_from_dict(data: Mapping[str, Any]) -> FilterSpec:
    unknown = set(data) - {"attributes", "year", "window", "variant_coverage"}
    if unknown:
        raise ConfigError(f"unknown filter keys: {', '.join(sorted(unknown))}")
    window = None
    if "year" in data and "window" in data:
        raise ConfigError("filter: give either year or window, not both")
    if "year" in data:
        window = year_window(int(data["year"]))
    elif "window" in data:
        lo, hi = data["window"]
        window = (to_instant(lo) if lo else None, to_instant(hi) if hi else None)
    coverage = data.get("variant_coverage")
    return FilterSpec(dict(data.get("attributes", {})), window, None if coverage is None else float(coverage))


@dataclass(frozen=True)
class Settings:
    """Parsed contents of a config file; ``assessment`` holds raw keyword arguments."""

    assessment: Mapping[str, Any] = field(default_factory=dict)
    weights: Mapping[str, float] = field(default_factory=dict)
    mapping: Optional[ColumnMapping] = None
    filter: FilterSpec = FilterSpec()

    def assessment_config(self, **overrides: Any) -> AssessmentConfig:
        kw = dict(self.assessment)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        if not kw.get("target_activity"):
            raise ConfigError("no target activity given (config assessment.target_activity or --activity)")
        try:
            return AssessmentConfig(**kw)
        except (TypeError, ValueError, LookupError) as exc:
            raise ConfigError(str(exc)) from None


def settings_from_dict(data: Mapping[str, Any]) -> Settings:
    unknown = set(data) - {"assessment", "weights", "mapping", "filter"}
    if unknown:
        raise ConfigError(f"unknown top-level tables: {', '.join(sorted(unknown))}")
    try:
        return Settings(
            assessment=assessment_kwargs(data.get("assessment", {})),
            weights={k: float(v) for k, v in data.get("weights", {}).items()},
            mapping=ColumnMapping.from_dict(data["mapping"]) if "mapping" in data else None,
            filter=filter_from_dict(data.get("filter", {})),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, LookupError) as exc:
        raise ConfigError(str(exc)) from None


def load_settings(path: Union[str, Path]) -> Settings:
    return settings_from_dict(load_toml(path))


def load_mapping(path: Union[str, Path]) -> ColumnMapping:
    """A standalone mapping file: the ColumnMapping keys at top level (or under ``[mapping]``)."""
    data = load_toml(path)
    data = data.get("mapping", data)
    try:
        return ColumnMapping.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
