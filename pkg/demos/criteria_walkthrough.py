"""
Walking through the criteria one at a time
==========================================

"""
from pcef.context import activity_context, build_dfg, context_tables
from pcef.criteria import (
    AssessmentConfig,
    Evidence,
    eval_duration,
    eval_external,
    eval_failure_rate,
    eval_frequency,
    eval_maturity,
    eval_standardization,
    eval_urgency,
)
from pcef.synth import SynthSpec, generate

TEMPLATES = (
    (("Create Order", "Change Quantity", "Record Goods Receipt", "Record Invoice"), 0.55),
    (("Create Order", "Send Order", "Change Quantity", "Record Goods Receipt", "Record Invoice"), 0.25),
    (("Create Order", "Change Price", "Change Quantity", "Record Invoice"), 0.12),
    (("Create Order", "Record Goods Receipt", "Record Invoice"), 0.08),
)

spec = SynthSpec(n_cases=500, variant_templates=TEMPLATES, rework_probability=0.05, terminal_failure_probability=0.02,
                 out_of_hours_share=0.2, seed=7)
log, ledger = generate(spec)
target = spec.target_activity

# where does the activity sit in the flow?
ctx = activity_context(build_dfg(log), target)
print(context_tables(ctx))

# top-5 predecessors / top-2 successors count as valid unless given
config = AssessmentConfig(target, failure_terminal_activities={spec.failure_activity})
print(eval_standardization(log, config).narrative)
print(eval_maturity(log, config).narrative)

# the generator knows the truth, the evaluator has to find it
fr = eval_failure_rate(log, config)
print(fr.narrative)
print("planted rework cases:", len(ledger.rework_cases), " measured:",
      round(fr.metrics["rework_ratio"] * fr.metrics["n_cases_with_activity"]))

for bucket in ("day", "week", "month"):
    m = eval_frequency(log, AssessmentConfig(target, frequency_bucket=bucket)).metrics
    print(f"per {bucket}: mean {m['mean_per_bucket']:.2f}, min {m['min_per_bucket']}, max {m['max_per_bucket']}")

print(eval_duration(log, config).narrative)
print(eval_urgency(log, config).narrative)

# interfaces cannot be read off an event log
print(eval_external("interfaces", config).reason)
with_evidence = AssessmentConfig(target, external_evidence={"interfaces": Evidence(0.8, "SAP GUI only")})
r = eval_external("interfaces", with_evidence)
print(r.status.value, r.normalized_score)
