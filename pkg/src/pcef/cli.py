"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or malformed
input, unknown activity, incomplete results).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .config import FilterSpec, Settings, filter_from_dict, load_mapping, load_settings, to_instant
from .context import activity_context, build_dfg, context_tables
from .criteria import CRITERION_IDS, evaluate_all
from .errors import ConfigError, DataError, InvalidFraction, InvalidSpec, PCEFError
from .event_log import ColumnMapping, EventLog, read_log
from .scoring import REPORT_SCHEMA, build_scorecard, render
from .synth import load_spec, write_outputs
from .variants import build_variant_table, variant_tsv

log = logging.getLogger("pcef")

CONFIG_ENV = "PCEF_CONFIG"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _key_value(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key, value


def _add_log_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--log", required=True, type=Path, help="event log (.csv or .xes)")
    p.add_argument("--mapping", type=Path, help="TOML column mapping for CSV logs")
    p.add_argument("--config", type=Path, help=f"TOML config file (default: ${CONFIG_ENV})")
    p.add_argument("--filter", dest="filters", action="append", type=_key_value, default=[],
                   metavar="ATTR=VALUE", help="keep cases whose case attribute equals VALUE (repeatable)")
    p.add_argument("--year", type=int, help="keep cases starting in this calendar year")
    p.add_argument("--window", nargs=2, metavar=("START", "END"), help="keep cases starting in [START, END)")
    p.add_argument("--variant-coverage", type=float, metavar="FRACTION",
                   help="keep the most frequent variants covering FRACTION of the cases")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcef", description="Assess process activities for RPA suitability from event logs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="evaluate all criteria for one activity and print a scorecard")
    _add_log_args(p)
    p.add_argument("--activity", help="target activity (overrides the config)")
    p.add_argument("--format", choices=("json", "markdown"), default="json")
    p.add_argument("--output", "-o", type=Path, help="write the report here instead of stdout")
    p.add_argument("--weight", action="append", type=_key_value, default=[], metavar="CRITERION=W")
    p.add_argument("--valid-predecessor", action="append", metavar="LABEL")
    p.add_argument("--valid-successor", action="append", metavar="LABEL")
    p.add_argument("--failure-terminal", action="append", metavar="LABEL")
    p.add_argument("--no-rework-failure", action="store_true", help="do not count rework as failure")
    p.add_argument("--bucket", choices=("day", "week", "month"))
    p.add_argument("--robot-pattern", action="append", metavar="SUBSTRING")
    p.add_argument("--system-attribute")
    p.add_argument("--generated-at", help="fix the report timestamp (ISO 8601)")

    p = sub.add_parser("variants", help="print the variant table as TSV")
    _add_log_args(p)

    p = sub.add_parser("context", help="print predecessor/successor tables of an activity")
    _add_log_args(p)
    p.add_argument("activity")

    p = sub.add_parser("activities", help="list activities with occurrence and case counts")
    _add_log_args(p)

    p = sub.add_parser("generate", help="write a synthetic log, its ground-truth ledger and a config")
    p.add_argument("--spec", required=True, type=Path, help="synthetic spec (.toml or .json)")
    p.add_argument("--out", required=True, type=Path, help="output directory")

    sub.add_parser("report-schema", help="print the JSON schema of analyze reports")
    return parser


# ---------------------------------------------------------------------------


def _settings(args) -> Settings:
    path = args.config or (Path(os.environ[CONFIG_ENV]) if os.environ.get(CONFIG_ENV) else None)
    if path is None:
        return Settings()
    if not path.exists():
        raise UsageError(f"config file not found: {path}")
    return load_settings(path)


def _mapping(args, settings: Settings) -> Optional[ColumnMapping]:
    if args.mapping:
        if not args.mapping.exists():
            raise UsageError(f"mapping file not found: {args.mapping}")
        return load_mapping(args.mapping)
    return settings.mapping


def _filter(args, settings: Settings) -> FilterSpec:
    spec = settings.filter
    attributes = dict(spec.attributes)
    attributes.update(dict(args.filters))
    window = spec.window
    if args.year is not None:
        window = filter_from_dict({"year": args.year}).window
    elif args.window:
        window = (to_instant(args.window[0]), to_instant(args.window[1]))
    coverage = args.variant_coverage if args.variant_coverage is not None else spec.variant_coverage
    return FilterSpec(attributes, window, coverage)


def _load(args, settings: Settings) -> EventLog:
    if not args.log.exists():
        raise DataError(f"{args.log}: no such file")
    event_log = read_log(args.log, _mapping(args, settings))
    for warning in event_log.warnings:
        log.debug(warning)
    if event_log.warnings:
        log.warning("%s: %d case-attribute conflicts (first value kept)", args.log, len(event_log.warnings))
    flt = _filter(args, settings)
    if not flt.is_empty():
        before = len(event_log)
        event_log = flt.apply(event_log)
        log.info("filter kept %d of %d cases", len(event_log), before)
        if not event_log.cases:
            raise DataError(f"{args.log}: no cases left after filtering")
    return event_log


def _write(data: bytes, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        output.write_bytes(data)


def cmd_analyze(args) -> int:
    settings = _settings(args)
    overrides = {
        "target_activity": args.activity,
        "valid_predecessors": frozenset(args.valid_predecessor) if args.valid_predecessor else None,
        "valid_successors": frozenset(args.valid_successor) if args.valid_successor else None,
        "failure_terminal_activities": frozenset(args.failure_terminal) if args.failure_terminal else None,
        "rework_counts_as_failure": False if args.no_rework_failure else None,
        "frequency_bucket": args.bucket,
        "robot_resource_patterns": tuple(args.robot_pattern) if args.robot_pattern else None,
        "system_attribute": args.system_attribute,
    }
    try:
        config = settings.assessment_config(**overrides)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    weights = dict(settings.weights)
    for cid, raw in args.weight:
        if cid not in CRITERION_IDS:
            raise UsageError(f"--weight: unknown criterion {cid!r}")
        try:
            weights[cid] = float(raw)
        except ValueError:
            raise UsageError(f"--weight {cid}: not a number: {raw!r}") from None
    generated_at = to_instant(args.generated_at) if args.generated_at else None

    event_log = _load(args, settings)
    results = evaluate_all(event_log, config)
    card = build_scorecard(
        results, weights, activity=config.target_activity,
        generated_at=generated_at, log_fingerprint=event_log.fingerprint(),
    )
    _write(render(card, args.format), args.output)
    return 0


def cmd_variants(args) -> int:
    event_log = _load(args, _settings(args))
    _write(variant_tsv(build_variant_table(event_log)).encode("utf-8"), None)
    return 0


def cmd_context(args) -> int:
    event_log = _load(args, _settings(args))
    ctx = activity_context(build_dfg(event_log), args.activity)
    _write(context_tables(ctx).encode("utf-8"), None)
    return 0


def cmd_activities(args) -> int:
    event_log = _load(args, _settings(args))
    occurrences: Counter = Counter()
    cases: Counter = Counter()
    for case in event_log.cases:
        acts = case.activities
        occurrences.update(acts)
        cases.update(set(acts))
    lines = ["activity\toccurrences\tcases"]
    for activity, n in sorted(occurrences.items(), key=lambda kv: (-kv[1], kv[0])):
        lines.append(f"{activity}\t{n}\t{cases[activity]}")
    _write(("\n".join(lines) + "\n").encode("utf-8"), None)
    return 0


def cmd_generate(args) -> int:
    if not args.spec.exists():
        raise UsageError(f"spec file not found: {args.spec}")
    paths = write_outputs(load_spec(args.spec), args.out)
    for name, path in paths.items():
        log.info("wrote %s: %s", name, path)
    return 0


def cmd_report_schema(args) -> int:
    _write((json.dumps(REPORT_SCHEMA, indent=2) + "\n").encode("utf-8"), None)
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "variants": cmd_variants,
    "context": cmd_context,
    "activities": cmd_activities,
    "generate": cmd_generate,
    "report-schema": cmd_report_schema,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.ERROR if args.quiet else (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="pcef: %(levelname)s: %(message)s", stream=sys.stderr, force=True)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError, InvalidSpec, InvalidFraction) as exc:
        print(f"pcef: error: {exc}", file=sys.stderr)
        return 1
    except PCEFError as exc:
        where = str(getattr(args, "log", "") or "")
        message = str(exc) if not where or where in str(exc) else f"{where}: {exc}"
        print(f"pcef: error: {message}", file=sys.stderr)
        return 2
    except UnicodeDecodeError as exc:
        print(f"pcef: error: {getattr(args, 'log', '')}: not UTF-8 ({exc})", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
