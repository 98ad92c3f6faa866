"""Random split degenerate instances, a corpus sweep, and report output."""

import json

from superinertia.documents import dump_document, generate_instance
from superinertia.report import emit_dot, emit_text, run_corpus, run_report

doc = generate_instance(5, 2, "3/2", seed=12)
print(dump_document(doc)[:400], "...")

report = run_report(doc, oracle=True)
print(emit_text(report))
print(emit_dot(report))

summary = run_corpus(45)
print(json.dumps(summary, indent=2))
