"""Event-log model plus CSV and XES ingestion.

The in-memory model is deliberately small: an :class:`EventLog` owns a tuple
of :class:`Case` objects, each owning a time-ordered tuple of :class:`Event`
objects.  All three are frozen dataclasses; treat the attribute dictionaries
as read-only.

Timestamp patterns
------------------
CSV timestamps are parsed with a small pattern language:

========  =====================================================
token     meaning
========  =====================================================
``YYYY``  four-digit year
``MM``    month, 1-2 digits
``DD``    day of month, 1-2 digits
``HH``    hour (24h clock), 1-2 digits
``mm``    minute, 2 digits
``ss``    second, 2 digits
``S...``  fraction of a second, 1-9 digits (any run of ``S``);
          truncated to millisecond precision
``Z``     zone designator: ``Z``, ``+HH:MM``, ``+HHMM`` or ``+HH``
========  =====================================================

Every other character matches itself.  The special pattern ``"ISO8601"``
delegates to :meth:`datetime.datetime.fromisoformat`.  Timestamps without a
zone are interpreted in ``ColumnMapping.default_zone`` (UTC unless told
otherwise); all instants are stored in UTC.
"""
from __future__ import annotations

import csv
import hashlib
import io
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone, tzinfo
from functools import lru_cache
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union
from xml.sax.saxutils import quoteattr
from zoneinfo import ZoneInfo

from .errors import (
    DataError,
    EmptyLog,
    MalformedRow,
    MissingKey,
    ReservedLabel,
    TimestampParseError,
    XmlError,
)

logger = logging.getLogger(__name__)

#: Artificial boundary labels used by the directly-follows graph.
START = "__START__"
END = "__END__"
RESERVED_LABELS = frozenset({START, END})

DEFAULT_TIMESTAMP_PATTERN = "YYYY/MM/DD HH:mm:ss.SSS"

Scalar = Union[str, int, float, bool, datetime]
PathLike = Union[str, Path]


# ---------------------------------------------------------------------------
# model


@dataclass(frozen=True)
class Event:
    case_id: str
    activity: str
    timestamp: datetime
    resource: Optional[str] = None
    attributes: Mapping[str, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if not self.activity or not self.activity.strip():
            raise DataError(f"case {self.case_id!r}: empty activity label")
        if self.timestamp.tzinfo is None:
            raise DataError(f"case {self.case_id!r}: naive timestamp {self.timestamp!r}")


@dataclass(frozen=True)
class Case:
    case_id: str
    events: tuple[Event, ...]
    case_attributes: Mapping[str, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if not self.events:
            raise DataError(f"case {self.case_id!r} has no events")
        object.__setattr__(self, "events", tuple(self.events))
        prev = None
        for ev in self.events:
            if ev.case_id != self.case_id:
                raise DataError(f"event of case {ev.case_id!r} stored under case {self.case_id!r}")
            if prev is not None and ev.timestamp < prev:
                raise DataError(f"case {self.case_id!r}: events are not in timestamp order")
            prev = ev.timestamp

    @property
    def activities(self) -> tuple[str, ...]:
        return tuple(ev.activity for ev in self.events)

    @property
    def start(self) -> datetime:
        return self.events[0].timestamp

    @property
    def end(self) -> datetime:
        return self.events[-1].timestamp

    @property
    def throughput(self) -> timedelta:
        return self.end - self.start

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class EventLog:
    """Immutable collection of cases.

    ``activity_alphabet`` and ``time_span`` are derived on construction.
    ``warnings`` collects non-fatal parse findings (e.g. conflicting case
    attributes) and ``source_fingerprint`` is the SHA-256 of the file the log
    was read from, if any.  Neither takes part in equality.
    """

    cases: tuple[Case, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)
    source_fingerprint: Optional[str] = field(default=None, compare=False)
    activity_alphabet: frozenset[str] = field(init=False, compare=False)
    time_span: Optional[tuple[datetime, datetime]] = field(init=False, compare=False)

    def __post_init__(self):
        cases = tuple(self.cases)
        object.__setattr__(self, "cases", cases)
        seen: set[str] = set()
        alphabet: set[str] = set()
        lo = hi = None
        for case in cases:
            if case.case_id in seen:
                raise DataError(f"duplicate case id {case.case_id!r}")
            seen.add(case.case_id)
            alphabet.update(case.activities)
            if lo is None or case.start < lo:
                lo = case.start
            if hi is None or case.end > hi:
                hi = case.end
        object.__setattr__(self, "activity_alphabet", frozenset(alphabet))
        object.__setattr__(self, "time_span", None if lo is None else (lo, hi))

    def __len__(self) -> int:
        return len(self.cases)

    def __iter__(self):
        return iter(self.cases)

    @property
    def n_events(self) -> int:
        return sum(len(c.events) for c in self.cases)

    def events(self) -> Iterable[Event]:
        for case in self.cases:
            yield from case.events

    def fingerprint(self) -> str:
        """Source-file hash when known, otherwise a hash of the log content."""
        if self.source_fingerprint:
            return self.source_fingerprint
        h = hashlib.sha256()
        for case in self.cases:
            for ev in case.events:
                h.update(
                    f"{ev.case_id}\x1f{ev.activity}\x1f{ev.timestamp.isoformat()}\x1f{ev.resource or ''}\n".encode()
                )
        return "sha256:" + h.hexdigest()


@dataclass(frozen=True)
class ColumnMapping:
    """Describes how the columns of a CSV file map onto the event model.

    Without a header row, column names must be zero-based integer indices
    written as strings (``"0"``, ``"1"``, ...).
    """

    case_id_column: str = "case_id"
    activity_column: str = "activity"
    timestamp_column: str = "timestamp"
    timestamp_pattern: str = DEFAULT_TIMESTAMP_PATTERN
    resource_column: Optional[str] = "resource"
    case_attribute_columns: tuple[str, ...] = ()
    delimiter: str = ","
    has_header: bool = True
    default_zone: str = "UTC"

    def __post_init__(self):
        core = (self.case_id_column, self.activity_column, self.timestamp_column)
        if len(set(core)) != 3:
            raise ValueError("case id, activity and timestamp columns must be distinct")
        if len(self.delimiter) != 1:
            raise ValueError(f"delimiter must be a single character, got {self.delimiter!r}")
        object.__setattr__(self, "case_attribute_columns", tuple(self.case_attribute_columns))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ColumnMapping":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown mapping keys: {', '.join(sorted(unknown))}")
        return cls(**data)


# ---------------------------------------------------------------------------
# timestamps

_TOKEN_RE = re.compile(r"YYYY|MM|DD|HH|mm|ss|S+|Z")
_TOKEN_REGEX = {
    "YYYY": r"(?P<year>\d{4})",
    "MM": r"(?P<month>\d{1,2})",
    "DD": r"(?P<day>\d{1,2})",
    "HH": r"(?P<hour>\d{1,2})",
    "mm": r"(?P<minute>\d{2})",
    "ss": r"(?P<second>\d{2})",
    "S": r"(?P<fraction>\d{1,9})",
    "Z": r"(?P<zone>Z|[+-]\d{2}(?::?\d{2})?)",
}


@lru_cache(maxsize=32)
def _compile_pattern(pattern: str) -> re.Pattern:
    parts = []
    pos = 0
    for m in _TOKEN_RE.finditer(pattern):
        parts.append(re.escape(pattern[pos:m.start()]))
        tok = m.group()
        parts.append(_TOKEN_REGEX["S" if tok.startswith("S") else tok])
        pos = m.end()
    parts.append(re.escape(pattern[pos:]))
    regex = "".join(parts)
    if "(?P<year>" not in regex or "(?P<month>" not in regex or "(?P<day>" not in regex:
        raise ValueError(f"timestamp pattern {pattern!r} needs YYYY, MM and DD")
    return re.compile(regex + r"\Z")


@lru_cache(maxsize=64)
def resolve_zone(name: str) -> tzinfo:
    if name.upper() in ("UTC", "Z"):
        return timezone.utc
    return ZoneInfo(name)


def _parse_offset(text: str) -> timezone:
    if text == "Z":
        return timezone.utc
    sign = -1 if text[0] == "-" else 1
    digits = text[1:].replace(":", "")
    hours = int(digits[:2])
    minutes = int(digits[2:4]) if len(digits) > 2 else 0
    return timezone(sign * timedelta(hours=hours, minutes=minutes))


def _to_utc_ms(dt: datetime, default_zone: tzinfo) -> datetime:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=default_zone)
    dt = dt.astimezone(timezone.utc)
    return dt.replace(microsecond=dt.microsecond - dt.microsecond % 1000)


def parse_timestamp(raw: str, pattern: str = DEFAULT_TIMESTAMP_PATTERN, default_zone: str = "UTC") -> datetime:
    """Parse ``raw`` with ``pattern`` into a UTC datetime (millisecond precision).

    Raises ``ValueError`` when the text does not match.
    """
    zone = resolve_zone(default_zone)
    raw = raw.strip()
    if pattern.upper() == "ISO8601":
        text = raw[:-1] + "+00:00" if raw.endswith("Z") else raw
        return _to_utc_ms(datetime.fromisoformat(text), zone)
    m = _compile_pattern(pattern).match(raw)
    if m is None:
        raise ValueError(f"{raw!r} does not match {pattern!r}")
    g = m.groupdict()
    frac = g.get("fraction") or ""
    micro = int((frac + "000000")[:6]) if frac else 0
    dt = datetime(
        int(g["year"]),
        int(g["month"]),
        int(g["day"]),
        int(g.get("hour") or 0),
        int(g.get("minute") or 0),
        int(g.get("second") or 0),
        micro,
    )
    if g.get("zone"):
        dt = dt.replace(tzinfo=_parse_offset(g["zone"]))
    return _to_utc_ms(dt, zone)


def format_timestamp(ts: datetime, pattern: str = DEFAULT_TIMESTAMP_PATTERN) -> str:
    """Inverse of :func:`parse_timestamp` for UTC instants."""
    ts = ts.astimezone(timezone.utc)
    if pattern.upper() == "ISO8601":
        return ts.isoformat(timespec="milliseconds")

    def repl(m: re.Match) -> str:
        tok = m.group()
        if tok == "YYYY":
            return f"{ts.year:04d}"
        if tok == "MM":
            return f"{ts.month:02d}"
        if tok == "DD":
            return f"{ts.day:02d}"
        if tok == "HH":
            return f"{ts.hour:02d}"
        if tok == "mm":
            return f"{ts.minute:02d}"
        if tok == "ss":
            return f"{ts.second:02d}"
        if tok == "Z":
            return "Z"
        return f"{ts.microsecond:06d}"[: len(tok)].ljust(len(tok), "0")

    return _TOKEN_RE.sub(repl, pattern)


# ---------------------------------------------------------------------------
# assembly shared by both parsers


class _LogBuilder:
    def __init__(self):
        self.events: dict[str, list[Event]] = {}
        self.case_attributes: dict[str, dict[str, Scalar]] = {}
        self.warnings: list[str] = []

    def add(self, event: Event, case_attributes: Mapping[str, Scalar], where: str) -> None:
        if event.activity in RESERVED_LABELS:
            raise ReservedLabel(f"{where}: activity label {event.activity!r} is reserved")
        bucket = self.events.get(event.case_id)
        if bucket is None:
            self.events[event.case_id] = [event]
            self.case_attributes[event.case_id] = dict(case_attributes)
            return
        bucket.append(event)
        known = self.case_attributes[event.case_id]
        for key, value in case_attributes.items():
            if key not in known:
                known[key] = value
            elif known[key] != value:
                msg = (
                    f"{where}: case {event.case_id!r} attribute {key!r} is {value!r}, "
                    f"keeping first value {known[key]!r}"
                )
                self.warnings.append(msg)
                logger.warning(msg)

    def build(self, fingerprint: Optional[str]) -> EventLog:
        if not self.events:
            raise EmptyLog()
        cases = []
        for case_id, events in self.events.items():
            # list.sort is stable: equal timestamps keep source order
            events.sort(key=lambda e: e.timestamp)
            cases.append(Case(case_id, tuple(events), self.case_attributes[case_id]))
        return EventLog(tuple(cases), warnings=tuple(self.warnings), source_fingerprint=fingerprint)


def _read_bytes(path: PathLike) -> tuple[bytes, str]:
    data = Path(path).read_bytes()
    return data, "sha256:" + hashlib.sha256(data).hexdigest()


# ---------------------------------------------------------------------------
# CSV


def parse_csv(path: PathLike, mapping: Optional[ColumnMapping] = None) -> EventLog:
    """Read a CSV event log.

    Rows are grouped by case id, in order of first appearance of each case.
    Within a case, events are sorted by timestamp with ties kept in file
    order.  Case attributes come from the first row of each case; later
    disagreeing rows produce a warning (logged and kept on the log).

    Raises:
        FileNotFoundError: ``path`` does not exist.
        MalformedRow: a row has the wrong number of fields or an empty
            activity label.
        TimestampParseError: a timestamp does not match the pattern.
        EmptyLog: the file holds no data rows.
    """
    mapping = mapping or ColumnMapping()
    data, fingerprint = _read_bytes(path)
    text = data.decode("utf-8-sig")
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=mapping.delimiter)

    header: Optional[list[str]] = None
    if mapping.has_header:
        for row in reader:
            if row:
                header = [h.strip() for h in row]
                break
        if header is None:
            raise EmptyLog(f"{path}: file is empty")
        width = len(header)

        def index_of(col: str) -> int:
            try:
                return header.index(col)
            except ValueError:
                raise DataError(f"{path}: column {col!r} not found in header") from None
    else:
        width = None

        def index_of(col: str) -> int:
            try:
                return int(col)
            except ValueError:
                raise DataError(f"{path}: headerless CSV needs integer column indices, got {col!r}") from None

    i_case = index_of(mapping.case_id_column)
    i_act = index_of(mapping.activity_column)
    i_ts = index_of(mapping.timestamp_column)
    i_res = index_of(mapping.resource_column) if mapping.resource_column else None
    case_cols = [(c, index_of(c)) for c in mapping.case_attribute_columns]
    used = {i_case, i_act, i_ts, *(i for _, i in case_cols)}
    if i_res is not None:
        used.add(i_res)

    builder = _LogBuilder()
    zone = mapping.default_zone
    pattern = mapping.timestamp_pattern
    extra_cols: Optional[list[tuple[str, int]]] = None
    if header is not None:
        extra_cols = [(name, i) for i, name in enumerate(header) if i not in used]
        if max(used) >= width:
            raise DataError(f"{path}: mapped column index out of range")

    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if width is None:
            width = len(row)
            if max(used) >= width:
                raise MalformedRow(line, f"expected at least {max(used) + 1} fields, got {width}")
            extra_cols = [(str(i), i) for i in range(width) if i not in used]
        if len(row) != width:
            raise MalformedRow(line, f"expected {width} fields, got {len(row)}")
        activity = row[i_act].strip()
        if not activity:
            raise MalformedRow(line, "empty activity label")
        raw_ts = row[i_ts]
        try:
            ts = parse_timestamp(raw_ts, pattern, zone)
        except ValueError:
            raise TimestampParseError(line, raw_ts, pattern) from None
        resource = row[i_res].strip() or None if i_res is not None else None
        attributes = {name: row[i] for name, i in extra_cols if row[i] != ""}
        case_attributes = {name: row[i] for name, i in case_cols}
        event = Event(row[i_case].strip(), activity, ts, resource, attributes)
        builder.add(event, case_attributes, f"{path}:{line}")

    return builder.build(fingerprint)


def write_csv(log: EventLog, path: PathLike, mapping: Optional[ColumnMapping] = None) -> None:
    """Write ``log`` as CSV using ``mapping`` (header always written).

    Case attributes go to ``mapping.case_attribute_columns`` (missing ones
    are left blank); event attributes get one column per key.
    """
    mapping = mapping or ColumnMapping()
    event_keys = sorted({k for ev in log.events() for k in ev.attributes})
    header = [mapping.case_id_column, mapping.activity_column, mapping.timestamp_column]
    if mapping.resource_column:
        header.append(mapping.resource_column)
    header += list(mapping.case_attribute_columns) + event_keys
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=mapping.delimiter, lineterminator="\n")
        w.writerow(header)
        for case in log.cases:
            case_vals = [_scalar_text(case.case_attributes.get(c, "")) for c in mapping.case_attribute_columns]
            for ev in case.events:
                row = [ev.case_id, ev.activity, format_timestamp(ev.timestamp, mapping.timestamp_pattern)]
                if mapping.resource_column:
                    row.append(ev.resource or "")
                row += case_vals
                row += [_scalar_text(ev.attributes.get(k, "")) for k in event_keys]
                w.writerow(row)


def _scalar_text(value: Scalar) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, datetime):
        return value.isoformat(timespec="milliseconds")
    return str(value)


# ---------------------------------------------------------------------------
# XES

_XES_SCALARS = ("string", "date", "int", "float", "boolean", "id")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _xes_value(kind: str, raw: str) -> Scalar:
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind == "boolean":
        return raw.strip().lower() == "true"
    if kind == "date":
        return parse_timestamp(raw, "ISO8601")
    return raw


def _xes_attributes(elem: ET.Element) -> dict[str, Scalar]:
    out: dict[str, Scalar] = {}
    for child in elem:
        kind = _local(child.tag)
        if kind in _XES_SCALARS:
            key = child.get("key")
            if key is not None and child.get("value") is not None:
                out[key] = _xes_value(kind, child.get("value"))
    return out


def parse_xes(path: PathLike) -> EventLog:
    """Read the log/trace/event subset of XES.

    ``concept:name`` on a trace becomes the case id; on an event,
    ``concept:name``, ``time:timestamp`` and ``org:resource`` become
    activity, timestamp and resource.  Remaining scalar attributes are kept;
    extensions, globals, classifiers and nested attributes are ignored.
    """
    data, fingerprint = _read_bytes(path)
    builder = _LogBuilder()
    index = 0
    try:
        for _, elem in ET.iterparse(io.BytesIO(data), events=("end",)):
            if _local(elem.tag) != "trace":
                continue
            trace_attrs = _xes_attributes(elem)
            case_id = trace_attrs.pop("concept:name", None)
            if case_id is None:
                raise MissingKey(index, "concept:name")
            case_id = str(case_id)
            if case_id in builder.events:
                raise DataError(f"{path}: duplicate trace concept:name {case_id!r}")
            n_events = 0
            for child in elem:
                if _local(child.tag) != "event":
                    continue
                attrs = _xes_attributes(child)
                activity = attrs.pop("concept:name", None)
                if activity is None or not str(activity).strip():
                    raise MissingKey(index, "concept:name")
                ts = attrs.pop("time:timestamp", None)
                if not isinstance(ts, datetime):
                    raise MissingKey(index, "time:timestamp")
                resource = attrs.pop("org:resource", None)
                event = Event(case_id, str(activity).strip(), ts, None if resource is None else str(resource), attrs)
                builder.add(event, trace_attrs, f"{path}: trace #{index}")
                n_events += 1
            if n_events == 0:
                logger.warning("%s: trace #%d (%s) has no events and is skipped", path, index, case_id)
            elem.clear()
            index += 1
    except ET.ParseError as exc:
        raise XmlError(f"{path}: {exc}") from None
    return builder.build(fingerprint)


def _xes_attr_xml(key: str, value: Scalar) -> str:
    if isinstance(value, bool):
        kind, text = "boolean", "true" if value else "false"
    elif isinstance(value, int):
        kind, text = "int", str(value)
    elif isinstance(value, float):
        kind, text = "float", repr(value)
    elif isinstance(value, datetime):
        kind, text = "date", value.astimezone(timezone.utc).isoformat(timespec="milliseconds")
    else:
        kind, text = "string", str(value)
    return f"<{kind} key={quoteattr(key)} value={quoteattr(text)}/>"


def write_xes(log: EventLog, path: PathLike) -> None:
    """Write ``log`` as a minimal XES document readable by :func:`parse_xes`."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<log xes.version="1.0" xmlns="http://www.xes-standard.org/">',
    ]
    for case in log.cases:
        lines.append("  <trace>")
        lines.append("    " + _xes_attr_xml("concept:name", case.case_id))
        for key, value in case.case_attributes.items():
            lines.append("    " + _xes_attr_xml(key, value))
        for ev in case.events:
            lines.append("    <event>")
            lines.append("      " + _xes_attr_xml("concept:name", ev.activity))
            lines.append("      " + _xes_attr_xml("time:timestamp", ev.timestamp))
            if ev.resource is not None:
                lines.append("      " + _xes_attr_xml("org:resource", ev.resource))
            for key, value in ev.attributes.items():
                lines.append("      " + _xes_attr_xml(key, value))
            lines.append("    </event>")
        lines.append("  </trace>")
    lines.append("</log>")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_log(path: PathLike, mapping: Optional[ColumnMapping] = None) -> EventLog:
    """Dispatch on file suffix: ``.xes`` goes to :func:`parse_xes`, anything else to CSV."""
    if str(path).lower().endswith(".xes"):
        return parse_xes(path)
    return parse_csv(path, mapping)


# ---------------------------------------------------------------------------
# filtering


def _matches(value: Any, expected: Any) -> bool:
    if value == expected:
        return True
    return _scalar_text(value) == _scalar_text(expected)


def filter_cases(
    log: EventLog,
    attributes: Optional[Mapping[str, Scalar]] = None,
    time_window: Optional[Sequence[Optional[datetime]]] = None,
) -> EventLog:
    """Select the cases matching every attribute equality and the time window.

    ``time_window`` is ``(start, end)``, half-open, tested against each
    case's first event; either bound may be ``None``.  Attribute values are
    looked up in the case attributes.  Order is preserved and ``log`` is not
    modified.
    """
    attributes = dict(attributes or {})
    for key in attributes:
        if not any(key in c.case_attributes for c in log.cases):
            logger.warning("filter attribute %r does not occur in any case", key)
    lo, hi = (time_window or (None, None))
    kept = []
    for case in log.cases:
        if any(k not in case.case_attributes or not _matches(case.case_attributes[k], v) for k, v in attributes.items()):
            continue
        if lo is not None and case.start < lo:
            continue
        if hi is not None and case.start >= hi:
            continue
        kept.append(case)
    return EventLog(tuple(kept), warnings=log.warnings, source_fingerprint=log.source_fingerprint)


def year_window(year: int) -> tuple[datetime, datetime]:
    """Half-open UTC window covering one calendar year."""
    return (datetime(year, 1, 1, tzinfo=timezone.utc), datetime(year + 1, 1, 1, tzinfo=timezone.utc))
