# Write the transport plan behind a summary as CSV and SVG.
# Run: python3 demos/transport_plan_export.py [outdir]

import sys
from pathlib import Path

from otextsum import EmbeddingTable
from otextsum.export import read_plan_csv, write_text
from otextsum.pipeline import RunConfig, Summarizer

words = {
    "cat": [1.0, 0.1, 0.0], "dog": [0.9, 0.2, 0.0], "pet": [1.0, 0.0, 0.1],
    "bank": [0.0, 1.0, 0.1], "loan": [0.1, 0.9, 0.0], "money": [0.0, 1.0, 0.0],
    "rain": [0.0, 0.1, 1.0], "sun": [0.1, 0.0, 0.9],
}
text = ("The cat chased the dog. The bank gave a loan. "
        "Rain fell all day. Every pet needs money. The sun came out.")

outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "plan_demo")
summarizer = Summarizer(RunConfig(budget=2), EmbeddingTable.from_dict(words))
selected, plan, csv_text, svg_text = summarizer.explain(text, title="toy document")

write_text(outdir / "plan.csv", csv_text)
write_text(outdir / "plan.svg", svg_text)
print("selected sentences:", selected, "distance", round(plan.distance, 4))

# tokens missing from the summary have to be shipped to the nearest kept token
for row in read_plan_csv(csv_text):
    if row["flow"] > 0 and row["document_token"] != row["summary_token"]:
        print(f'{row["document_token"]:>6} -> {row["summary_token"]:<6} flow {row["flow"]:.3f} '
              f'cost {row["flow_cost"]:.3f}')
print("wrote", outdir / "plan.csv", "and", outdir / "plan.svg")
