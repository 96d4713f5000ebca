"""Event-log analytics for judging whether a process activity suits robotic process automation.

Typical use::

    from pcef import parse_csv, AssessmentConfig, evaluate_all, build_scorecard, render

    log = parse_csv("p2p.csv")
    config = AssessmentConfig("Change Quantity", failure_terminal_activities={"Delete Purchase Order Item"})
    card = build_scorecard(evaluate_all(log, config), activity=config.target_activity)
    print(render(card, "markdown").decode())
"""

__version__ = "0.1.0"

from .context import ActivityContext, activity_context, build_dfg, coverage
from .criteria import (
    CRITERIA,
    CRITERION_IDS,
    EXTERNAL_CRITERIA,
    PERSPECTIVES,
    AssessmentConfig,
    BusinessHours,
    CriterionResult,
    Evidence,
    ScoreMap,
    Status,
    eval_duration,
    eval_external,
    eval_failure_rate,
    eval_frequency,
    eval_human_error_proneness,
    eval_maturity,
    eval_number_of_systems,
    eval_resources,
    eval_standardization,
    eval_urgency,
    evaluate_all,
)
from .event_log import (
    END,
    START,
    Case,
    ColumnMapping,
    Event,
    EventLog,
    filter_cases,
    parse_csv,
    parse_timestamp,
    parse_xes,
    read_log,
    write_csv,
    write_xes,
)
from .scoring import REPORT_SCHEMA, Scorecard, build_scorecard, from_json, render
from .synth import GroundTruthLedger, SynthSpec, generate
from .variants import Variant, VariantTable, build_variant_table, coverage_filter, variants_containing
