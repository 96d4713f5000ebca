"""Scorecard aggregation and JSON / Markdown rendering."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Literal, Mapping, Optional, Sequence

from .criteria import CRITERION_IDS, PERSPECTIVES, CriterionResult, Status
from .errors import AllWeightsZero, IncompleteResults

SCHEMA_VERSION = "1"

_ORDER = {cid: i for i, cid in enumerate(CRITERION_IDS)}
_PERSPECTIVE_TITLES = {
    "task": "Task",
    "time": "Time",
    "data": "Data",
    "system": "System",
    "human": "Human",
}


@dataclass(frozen=True)
class Scorecard:
    activity: str
    results: tuple[CriterionResult, ...]
    aggregate: Optional[float]
    evaluable_count: int
    generated_at: datetime
    log_fingerprint: str
    weights: Mapping[str, float]

    def result(self, criterion_id: str) -> CriterionResult:
        for r in self.results:
            if r.criterion_id == criterion_id:
                return r
        raise KeyError(criterion_id)


def _stamp(ts: datetime) -> datetime:
    ts = ts.astimezone(timezone.utc)
    return ts.replace(microsecond=ts.microsecond - ts.microsecond % 1000)


def build_scorecard(
    results: Sequence[CriterionResult],
    weights: Optional[Mapping[str, float]] = None,
    *,
    activity: str = "",
    generated_at: Optional[datetime] = None,
    log_fingerprint: str = "",
) -> Scorecard:
    """Combine thirteen results into a scorecard.

    The aggregate is the weighted mean of the normalized scores that exist;
    results without a score are left out of numerator and denominator alike.
    Weights default to 1.0 for every criterion.

    Raises:
        IncompleteResults: not exactly one result per criterion id.
        AllWeightsZero: scored results exist but their weights sum to zero.
    """
    ids = [r.criterion_id for r in results]
    missing = [cid for cid in CRITERION_IDS if cid not in ids]
    dupes = sorted({cid for cid in ids if ids.count(cid) > 1})
    if missing or dupes or len(ids) != len(CRITERION_IDS):
        raise IncompleteResults(
            f"expected one result per criterion; missing {missing or 'none'}, duplicated {dupes or 'none'}"
        )
    w = {cid: 1.0 for cid in CRITERION_IDS}
    for cid, value in (weights or {}).items():
        if cid not in w:
            raise ValueError(f"weight for unknown criterion {cid!r}")
        if not value >= 0 or math.isinf(value):
            raise ValueError(f"weight for {cid!r} must be a finite non-negative number, got {value!r}")
        w[cid] = float(value)

    scored = [r for r in results if r.normalized_score is not None]
    aggregate = None
    if scored:
        denom = math.fsum(w[r.criterion_id] for r in scored)
        if denom == 0:
            raise AllWeightsZero("weights of all scored criteria are zero")
        aggregate = math.fsum(w[r.criterion_id] * r.normalized_score for r in scored) / denom
        aggregate = min(1.0, max(0.0, aggregate))
    ordered = tuple(sorted(results, key=lambda r: _ORDER[r.criterion_id]))
    return Scorecard(
        activity=activity,
        results=ordered,
        aggregate=aggregate,
        evaluable_count=sum(1 for r in results if r.evaluable),
        generated_at=_stamp(generated_at or datetime.now(timezone.utc)),
        log_fingerprint=log_fingerprint,
        weights=w,
    )


# ---------------------------------------------------------------------------
# JSON


def _number(x: float):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    return float(x)


def to_dict(card: Scorecard) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "activity": card.activity,
        "generated_at": card.generated_at.isoformat(timespec="milliseconds").replace("+00:00", "Z"),
        "log_fingerprint": card.log_fingerprint,
        "aggregate": card.aggregate,
        "evaluable_count": card.evaluable_count,
        "weights": {cid: card.weights[cid] for cid in CRITERION_IDS},
        "results": [
            {
                "criterion_id": r.criterion_id,
                "perspective": r.perspective,
                "status": r.status.value,
                "reason": r.reason,
                "normalized_score": r.normalized_score,
                "metrics": {k: _number(v) for k, v in r.metrics.items()},
                "narrative": r.narrative,
            }
            for r in card.results
        ],
    }


def from_dict(data: Mapping[str, Any]) -> Scorecard:
    if str(data.get("schema_version")) != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
    results = tuple(
        CriterionResult(
            r["criterion_id"], r["perspective"], Status(r["status"]), dict(r["metrics"]),
            r["normalized_score"], r["narrative"], r.get("reason"),
        )
        for r in data["results"]
    )
    stamp = data["generated_at"]
    if stamp.endswith("Z"):
        stamp = stamp[:-1] + "+00:00"
    return Scorecard(
        activity=data["activity"],
        results=results,
        aggregate=data["aggregate"],
        evaluable_count=data["evaluable_count"],
        generated_at=datetime.fromisoformat(stamp),
        log_fingerprint=data["log_fingerprint"],
        weights=dict(data["weights"]),
    )


def from_json(raw: bytes | str) -> Scorecard:
    return from_dict(json.loads(raw))


# ---------------------------------------------------------------------------
# Markdown


def _fmt(v: float) -> str:
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return f"{v:.4g}"


def _markdown(card: Scorecard) -> str:
    lines = [f"# RPA suitability scorecard: {card.activity}", ""]
    agg = "n/a" if card.aggregate is None else f"{card.aggregate:.3f}"
    n_scored = sum(1 for r in card.results if r.normalized_score is not None)
    lines += [
        f"- Aggregate score: **{agg}** (weighted mean over {n_scored} scored criteria)",
        f"- Evaluable criteria: {card.evaluable_count} of {len(card.results)}",
        f"- Not evaluable: {len(card.results) - card.evaluable_count}",
        f"- Generated: {card.generated_at.isoformat(timespec='seconds')}",
        f"- Log fingerprint: `{card.log_fingerprint}`",
        "",
    ]
    for perspective in PERSPECTIVES:
        lines += [f"## {_PERSPECTIVE_TITLES[perspective]} perspective", ""]
        for r in card.results:
            if r.perspective != perspective:
                continue
            score = "-" if r.normalized_score is None else f"{r.normalized_score:.3f}"
            status = r.status.value.replace("_", " ")
            lines.append(f"### {r.criterion_id.replace('_', ' ').capitalize()} ({status}, score {score})")
            lines.append("")
            lines.append(r.narrative)
            if r.metrics:
                lines += ["", "| metric | value |", "| --- | --- |"]
                lines += [f"| {k} | {_fmt(v)} |" for k, v in r.metrics.items()]
            lines.append("")
    return "\n".join(lines)


def render(card: Scorecard, format: Literal["json", "markdown"] = "json") -> bytes:
    if format == "json":
        return (json.dumps(to_dict(card), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if format == "markdown":
        return _markdown(card).encode("utf-8")
    raise ValueError(f"unknown format {format!r}")


REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "RPA suitability scorecard",
    "type": "object",
    "additionalProperties": False,
    "required": [
        "schema_version", "activity", "generated_at", "log_fingerprint",
        "aggregate", "evaluable_count", "weights", "results",
    ],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "activity": {"type": "string"},
        "generated_at": {"type": "string", "format": "date-time"},
        "log_fingerprint": {"type": "string"},
        "aggregate": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
        "evaluable_count": {"type": "integer", "minimum": 0, "maximum": len(CRITERION_IDS)},
        "weights": {
            "type": "object",
            "additionalProperties": False,
            "required": list(CRITERION_IDS),
            "properties": {cid: {"type": "number", "minimum": 0} for cid in CRITERION_IDS},
        },
        "results": {
            "type": "array",
            "minItems": len(CRITERION_IDS),
            "maxItems": len(CRITERION_IDS),
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": [
                    "criterion_id", "perspective", "status", "reason",
                    "normalized_score", "metrics", "narrative",
                ],
                "properties": {
                    "criterion_id": {"enum": list(CRITERION_IDS)},
                    "perspective": {"enum": list(PERSPECTIVES)},
                    "status": {"enum": [s.value for s in Status]},
                    "reason": {"type": ["string", "null"]},
                    "normalized_score": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                    "metrics": {"type": "object", "additionalProperties": {"type": "number"}},
                    "narrative": {"type": "string"},
                },
            },
        },
    },
}

