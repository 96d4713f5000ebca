"""
Filtering a log and looking at its variants
===========================================

"""
from pcef.event_log import filter_cases, year_window
from pcef.synth import CATEGORY_ATTRIBUTE, SynthSpec, generate
from pcef.variants import build_variant_table, coverage_filter, variant_tsv, variants_containing

TEMPLATES = (
    (("Create Order", "Change Quantity", "Record Goods Receipt", "Record Invoice"), 0.55),
    (("Create Order", "Send Order", "Change Quantity", "Record Goods Receipt", "Record Invoice"), 0.25),
    (("Create Order", "Change Price", "Change Quantity", "Record Invoice"), 0.12),
    (("Create Order", "Record Goods Receipt", "Record Invoice"), 0.08),
)

spec = SynthSpec(n_cases=800, variant_templates=TEMPLATES,
                 categories=("3-way match, invoice before GR", "Consignment"), rework_probability=0.03, seed=3)
log, _ = generate(spec)

# cases are tagged with an item category
categories = sorted({c.case_attributes[CATEGORY_ATTRIBUTE] for c in log.cases})
print(categories)

sub = filter_cases(log, {CATEGORY_ATTRIBUTE: categories[0]}, year_window(2018))
print(len(log.cases), "->", len(sub.cases), "cases")

table = build_variant_table(sub)
print(variant_tsv(table))

# keep the most frequent variants until 90% of the cases are covered
covered = coverage_filter(table, sub, 0.9)
print(len(covered.cases), "cases in", len(build_variant_table(covered)), "variants")

for v in variants_containing(table, spec.target_activity)[:3]:
    print(v.count, v.label())
