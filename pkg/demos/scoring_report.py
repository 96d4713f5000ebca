"""
Weights, scores and the JSON report
===================================

"""
import json
from datetime import datetime, timezone

from pcef.criteria import AssessmentConfig, ScoreMap, evaluate_all
from pcef.scoring import build_scorecard, from_json, render
from pcef.synth import SynthSpec, generate

log, _ = generate(SynthSpec(n_cases=200, terminal_failure_probability=0.05, seed=11))
stamp = datetime(2024, 1, 1, tzinfo=timezone.utc)

# a stricter failure map: 10% failures already scores zero
strict = AssessmentConfig(
    "Change Quantity",
    failure_terminal_activities={"Delete Item"},
    score_maps={"failure_rate": ScoreMap("failure_rate", ((0.0, 1.0), (0.1, 0.0)))},
)
results = evaluate_all(log, strict)

equal = build_scorecard(results, activity="Change Quantity", generated_at=stamp)
heavy = build_scorecard(results, {"failure_rate": 5.0}, activity="Change Quantity", generated_at=stamp)
print("equal weights:", round(equal.aggregate, 3))
print("failure x5:  ", round(heavy.aggregate, 3))

# scaling every weight changes nothing
scaled = build_scorecard(results, {cid: 3.0 for cid in heavy.weights}, activity="Change Quantity",
                         generated_at=stamp)
print("all x3:      ", round(scaled.aggregate, 3))

report = render(heavy, "json")
data = json.loads(report)
print(data["schema_version"], len(data["results"]), "results")
print(from_json(report).aggregate == heavy.aggregate)
