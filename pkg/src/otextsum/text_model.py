"""Sentence splitting, tokenization and term-frequency distributions.

Distributions are dense ``float64`` arrays over a document's active
vocabulary. The designated zero vector stands for a sentence with no
surviving tokens.
"""

from __future__ import annotations

import json
import logging
import re
from collections.abc import Collection, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import AllSentencesEmpty, EmptyDocument, EmptySelection, ParseError

logger = logging.getLogger(__name__)

_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+")
_TOKEN = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class ActiveVocabulary:
    """Distinct tokens of one document, in order of first occurrence."""

    tokens: tuple[str, ...]
    global_ids: tuple[int, ...] | None = None
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.tokens)) != len(self.tokens):
            raise ValueError("vocabulary tokens must be unique")
        if self.global_ids is not None and len(self.global_ids) != len(self.tokens):
            raise ValueError("global_ids must align with tokens")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.tokens)})

    @property
    def p(self) -> int:
        return len(self.tokens)

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    sentences: tuple[tuple[int, ...], ...]
    source_text: tuple[str, ...] | None = None
    oov_dropped: int = 0

    @property
    def n(self) -> int:
        return len(self.sentences)

    def eligible(self) -> list[int]:
        """Indices of sentences with at least one token."""
        return [i for i, s in enumerate(self.sentences) if s]


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a one-token-per-line stop-word file; ``None`` gives the bundled English list."""
    if path is None:
        text = resources.files("otextsum").joinpath("data/stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def split_sentences(text: str) -> list[str]:
    parts = _SENTENCE_BOUNDARY.split(text.strip())
    return [s.strip() for s in parts if s.strip()]


def word_tokens(text: str, lowercase: bool = True) -> list[str]:
    if lowercase:
        text = text.lower()
    return _TOKEN.findall(text)


def tokenize(
    raw_document: str | Sequence[str],
    embedding_vocab: Mapping[str, int] | Collection[str],
    *,
    lowercase: bool = True,
    stopwords: Collection[str] | None = None,
    drop_oov: bool = True,
) -> tuple[Document, ActiveVocabulary]:
    """Build a :class:`Document` and its :class:`ActiveVocabulary`.

    A string is split into sentences on ``.``, ``!`` or ``?`` followed by
    whitespace; a sequence of strings is taken as already split. Tokens
    missing from ``embedding_vocab`` are dropped when ``drop_oov`` is set,
    and the number dropped is logged and stored on the document.
    Sentences left without tokens stay in place as empty sentences.
    """
    if isinstance(raw_document, str):
        sentences = split_sentences(raw_document)
    else:
        sentences = [str(s) for s in raw_document]
    if not sentences or not any(s.strip() for s in sentences):
        raise EmptyDocument("input document is empty")
    if not embedding_vocab:
        raise ValueError("embedding vocabulary is empty")
    stop = frozenset(stopwords or ())

    index: dict[str, int] = {}
    encoded = []
    oov = 0
    for sentence in sentences:
        ids = []
        for tok in word_tokens(sentence, lowercase):
            if tok in stop:
                continue
            if drop_oov and tok not in embedding_vocab:
                oov += 1
                continue
            ids.append(index.setdefault(tok, len(index)))
        encoded.append(tuple(ids))

    if not index:
        raise EmptyDocument("no sentence has a token left after filtering")
    if oov:
        logger.warning("dropped %d out-of-vocabulary tokens", oov)

    tokens = tuple(index)
    global_ids = None
    if isinstance(embedding_vocab, Mapping) and all(t in embedding_vocab for t in tokens):
        global_ids = tuple(int(embedding_vocab[t]) for t in tokens)
    vocab = ActiveVocabulary(tokens, global_ids)
    doc = Document(tuple(encoded), tuple(sentences), oov)
    return doc, vocab


def sentence_distribution(sentence: Sequence[int], p: int) -> np.ndarray:
    """Normalised bag-of-tokens of one sentence; empty sentences give zeros."""
    counts = np.bincount(np.asarray(sentence, dtype=np.intp), minlength=p).astype(np.float64)
    if len(counts) > p:
        raise ValueError("token id out of range for vocabulary size")
    total = counts.sum()
    return counts / total if total else counts


def sentence_distributions(doc: Document, p: int) -> np.ndarray:
    """Stack every sentence distribution into an ``n x p`` matrix."""
    return np.stack([sentence_distribution(s, p) for s in doc.sentences])


def _weighted_mean(dists: np.ndarray, weights: np.ndarray) -> np.ndarray:
    out = weights @ dists / weights.sum()
    picked = weights > 0
    if np.any(dists[picked].sum(axis=1) == 0):
        out = out / out.sum()
    return out


def document_distribution(sentence_dists) -> np.ndarray:
    """Unweighted mean of the sentence distributions.

    Empty sentences count in the divisor; the result is then rescaled to
    sum to one.
    """
    dists = np.atleast_2d(np.asarray(sentence_dists, dtype=np.float64))
    if dists.shape[0] == 0:
        raise ValueError("need at least one sentence")
    if not dists.any():
        raise AllSentencesEmpty("every sentence distribution is zero")
    return _weighted_mean(dists, np.ones(dists.shape[0]))


def summary_distribution(sentence_dists, m) -> np.ndarray:
    """Distribution of the summary picked by extraction vector ``m``.

    ``m`` may also hold nonnegative real weights (used by the relaxed
    optimiser).
    """
    dists = np.atleast_2d(np.asarray(sentence_dists, dtype=np.float64))
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (dists.shape[0],):
        raise ValueError(f"extraction vector has shape {m.shape}, expected ({dists.shape[0]},)")
    if np.any(m < 0):
        raise ValueError("extraction weights must be nonnegative")
    if m.sum() <= 0:
        raise EmptySelection("no sentence selected")
    if not dists[m > 0].any():
        raise EmptySelection("only empty sentences selected")
    return _weighted_mean(dists, m)


def parse_document_line(line: str, lineno: int) -> tuple[str, str | list[str]]:
    """Parse one JSONL corpus line into ``(doc_id, text_or_sentences)``.

    The line holds ``{"text": ...}`` or ``{"sentences": [...]}`` and an
    optional ``"id"``; the zero-based line number is the fallback id.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), lineno + 1) from exc
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", lineno + 1)
    doc_id = str(obj.get("id", lineno))
    if "sentences" in obj:
        sentences = obj["sentences"]
        if not isinstance(sentences, list):
            raise ParseError("'sentences' must be a list of strings", lineno + 1)
        return doc_id, [str(s) for s in sentences]
    if "text" in obj:
        return doc_id, str(obj["text"])
    raise ParseError("expected a 'text' or 'sentences' field", lineno + 1)


def read_jsonl_documents(path: str | Path) -> Iterable[tuple[str, str | list[str]]]:
    """Yield ``(doc_id, text_or_sentences)`` for every nonblank line of a corpus."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            if line.strip():
                yield parse_document_line(line, lineno)
