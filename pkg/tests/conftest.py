import sys
from pathlib import Path

# oracles.py and toys.py live next to the tests
sys.path.insert(0, str(Path(__file__).parent))

import json

import numpy as np
import pytest

WORDS = "cat dog sat ran mat park sun rain cold warm river bank money loan".split()

CORPUS = [
    {"id": "pets", "text": "The cat sat on the mat. The dog ran in the park. The sun was warm. Rain was cold."},
    {"id": "finance", "sentences": ["river bank", "money bank loan", "the the", "loan money"]},
    {"id": "stop", "text": "the a an."},
    {"id": "short", "text": "Cat sat."},
]


@pytest.fixture
def embedding_file(tmp_path):
    rng = np.random.default_rng(0)
    path = tmp_path / "emb.txt"
    lines = [f"{len(WORDS)} 4"]
    lines += [w + " " + " ".join(f"{x:.6f}" for x in rng.normal(size=4)) for w in WORDS]
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text("".join(json.dumps(d) + "\n" for d in CORPUS) + "not json\n")
    return path
