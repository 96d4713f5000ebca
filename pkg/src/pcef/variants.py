"""Trace variants: frequency table and coverage-based filtering."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyLog, InvalidFraction
from .event_log import EventLog

ARROW = "→"


@dataclass(frozen=True)
class Variant:
    sequence: tuple[str, ...]
    count: int
    case_ids: tuple[str, ...]

    def __post_init__(self):
        if not self.sequence:
            raise ValueError("variant sequence must be non-empty")
        if self.count != len(self.case_ids):
            raise ValueError("variant count must equal the number of case ids")

    def __contains__(self, activity: str) -> bool:
        return activity in self.sequence

    def label(self) -> str:
        return ARROW.join(self.sequence)


@dataclass(frozen=True)
class VariantTable:
    """Variants sorted by count (descending), ties broken by sequence."""

    variants: tuple[Variant, ...]
    total_cases: int

    def __len__(self) -> int:
        return len(self.variants)

    def __iter__(self):
        return iter(self.variants)

    def shares(self) -> list[float]:
        return [v.count / self.total_cases for v in self.variants]


def build_variant_table(log: EventLog) -> VariantTable:
    if not log.cases:
        raise EmptyLog("cannot build a variant table from an empty log")
    groups: dict[tuple[str, ...], list[str]] = {}
    for case in log.cases:
        groups.setdefault(case.activities, []).append(case.case_id)
    variants = [Variant(seq, len(ids), tuple(ids)) for seq, ids in groups.items()]
    variants.sort(key=lambda v: (-v.count, v.sequence))
    return VariantTable(tuple(variants), len(log.cases))


def _kept_prefix(table: VariantTable, fraction: float) -> list[Variant]:
    if not (0.0 < fraction <= 1.0):
        raise InvalidFraction(f"coverage fraction must lie in (0, 1], got {fraction!r}")
    kept = []
    cumulative = 0
    for variant in table.variants:
        kept.append(variant)
        cumulative += variant.count
        # at-least semantics: the variant crossing the threshold is included
        if cumulative / table.total_cases >= fraction - 1e-12:
            break
    return kept


def coverage_filter(table: VariantTable, log: EventLog, fraction: float) -> EventLog:
    """Keep the cases of the shortest variant prefix covering ``fraction`` of all cases."""
    keep = {cid for v in _kept_prefix(table, fraction) for cid in v.case_ids}
    cases = tuple(c for c in log.cases if c.case_id in keep)
    return EventLog(cases, warnings=log.warnings, source_fingerprint=log.source_fingerprint)


def variants_containing(table: VariantTable | Iterable[Variant], activity: str) -> list[Variant]:
    return [v for v in table if activity in v.sequence]


def variant_tsv(table: VariantTable) -> str:
    """Tab-separated rendering: rank, count, share, sequence."""
    lines = ["rank\tcount\tshare\tsequence"]
    for rank, variant in enumerate(table.variants, 1):
        share = variant.count / table.total_cases
        lines.append(f"{rank}\t{variant.count}\t{share:.4f}\t{variant.label()}")
    return "\n".join(lines) + "\n"
