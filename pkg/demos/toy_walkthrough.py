# Summarize a five-sentence toy document step by step.
# Run: python3 demos/toy_walkthrough.py

import numpy as np

from otextsum import BeamConfig, EmbeddingTable, beam_search, coverage, summary_distribution
from otextsum.beam import extraction_vector
from otextsum.pipeline import RunConfig, Summarizer

# a tiny embedding table: pets cluster near e0, money near e1, weather near e2
words = {
    "cat": [1.0, 0.1, 0.0], "dog": [0.9, 0.2, 0.0], "pet": [1.0, 0.0, 0.1],
    "bank": [0.0, 1.0, 0.1], "loan": [0.1, 0.9, 0.0], "money": [0.0, 1.0, 0.0],
    "rain": [0.0, 0.1, 1.0], "sun": [0.1, 0.0, 0.9],
}
table = EmbeddingTable.from_dict(words)

text = ("The cat chased the dog. The bank gave a loan. "
        "Rain fell all day. Every pet needs money. The sun came out.")

summarizer = Summarizer(RunConfig(budget=2), table)
doc, vocab, C, dists, tfd = summarizer.prepare(text)

print("active vocabulary:", vocab.tokens)
print("sentence distributions (rows) over that vocabulary:")
print(np.round(dists, 3))
print("document distribution:", np.round(tfd, 3))
print("unit costs:")
print(np.round(C.entries, 3))

# coverage of every single sentence, 1 - W(TF_D, TF_s)
for i in doc.eligible():
    print(f"sentence {i} alone: coverage {coverage(tfd, dists[i], C):.4f}")

result = beam_search(doc, dists, tfd, C, BeamConfig(budget=2, beam_width=3))
for level, beam in enumerate(result.trace, 1):
    print(f"beam after level {level}:", [(c.selected, round(c.score, 4)) for c in beam])
print("selected:", result.selected, "coverage", round(result.score, 4), "solves", result.n_solves)

summary = summary_distribution(dists, extraction_vector(result.selected, doc.n))
print("summary distribution:", np.round(summary, 3))
print(" ".join(doc.source_text[i].strip() for i in result.selected))
