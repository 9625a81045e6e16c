"""One-off count of vocabulary and tagset sizes in the bundled sample.

Deliberately uses plain string handling instead of the package so the
numbers can serve as an outside check on the tagger's training counts.
"""

import json
import sys
from pathlib import Path

root = Path(__file__).resolve().parent.parent
morph = (root / "src/eojeol/data/mini.morph").read_text(encoding="utf-8")

surfaces, eojeol_tags, forms, tags = set(), set(), set(), set()
for line in morph.splitlines():
    if not line.strip():
        continue
    _, surface, analysis = line.split("\t")
    surfaces.add(surface)
    # no escaped '+' or '/' occur in the sample
    pieces = [p.rsplit("/", 1) for p in analysis.split("+")]
    eojeol_tags.add("+".join(t for _, t in pieces))
    for form, tag in pieces:
        forms.add(form)
        tags.add(tag)

counts = {
    "level1": {"vocab": len(surfaces), "tags": len(eojeol_tags)},
    "level5": {"vocab": len(forms), "tags": len(tags)},
}
out = root / "tests/fixtures/mini_counts.json"
out.write_text(json.dumps(counts, indent=2, sort_keys=True) + "\n", encoding="utf-8")
json.dump(counts, sys.stdout, indent=2)
