"""Token embedding tables and pairwise transport costs."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, MissingToken, ParseError, ZeroNormVector

METRICS = ("euclidean", "cosine")


@dataclass(frozen=True)
class EmbeddingTable:
    tokens: tuple[str, ...]
    vectors: np.ndarray
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[1] < 1:
            raise DimensionMismatch("vectors must be an N x dim array with dim >= 1")
        if vectors.shape[0] != len(self.tokens):
            raise DimensionMismatch("one vector per token required")
        index = {t: i for i, t in enumerate(self.tokens)}
        if len(index) != len(self.tokens):
            raise ParseError("duplicate tokens in embedding table")
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "index", index)

    @classmethod
    def from_dict(cls, mapping: Mapping[str, object]) -> EmbeddingTable:
        tokens = tuple(mapping)
        return cls(tokens, np.array([np.asarray(mapping[t], dtype=np.float64) for t in tokens]))

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def vocab_size(self) -> int:
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def __len__(self):
        return len(self.tokens)

    def __getitem__(self, token) -> np.ndarray:
        try:
            return self.vectors[self.index[token]]
        except KeyError:
            raise MissingToken(token) from None

    def scaled(self, factor: float) -> EmbeddingTable:
        return EmbeddingTable(self.tokens, self.vectors * factor)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Parse a word2vec text file: an ``N dim`` header, then ``token f1 .. fdim`` rows."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError("header must be 'N dim'", 1)
        try:
            n_rows, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError("header must hold two integers", 1) from None
        if n_rows < 0 or dim < 1:
            raise ParseError("header declares an invalid shape", 1)

        tokens = []
        vectors = np.empty((n_rows, dim))
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(tokens) == n_rows:
                raise ParseError(f"more rows than the {n_rows} declared", lineno)
            if len(parts) - 1 != dim:
                raise DimensionMismatch(f"expected {dim} values, got {len(parts) - 1}", lineno)
            try:
                vectors[len(tokens)] = [float(x) for x in parts[1:]]
            except ValueError:
                raise ParseError("non-numeric vector entry", lineno) from None
            tokens.append(parts[0])
    if len(tokens) != n_rows:
        raise ParseError(f"declared {n_rows} rows but found {len(tokens)}")
    return EmbeddingTable(tuple(tokens), vectors)


def save_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{table.vocab_size} {table.dim}\n")
        for tok, vec in zip(table.tokens, table.vectors):
            fh.write(tok + " " + " ".join(repr(float(x)) for x in vec) + "\n")


@dataclass(frozen=True)
class CostMatrix:
    entries: np.ndarray
    metric: str = "euclidean"

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def shape(self):
        return self.entries.shape


def pairwise_costs(vectors: np.ndarray, metric: str = "euclidean") -> np.ndarray:
    """Dense symmetric cost matrix with an exactly zero diagonal."""
    v = np.asarray(vectors, dtype=np.float64)
    if metric == "euclidean":
        diff = v[:, None, :] - v[None, :, :]
        costs = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    elif metric == "cosine":
        norms = np.linalg.norm(v, axis=1)
        if np.any(norms == 0):
            raise ZeroNormVector("cosine cost needs nonzero embedding vectors")
        u = v / norms[:, None]
        costs = 1.0 - u @ u.T
        costs = np.clip((costs + costs.T) / 2, 0.0, 2.0)
        np.fill_diagonal(costs, 0.0)
    else:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    return costs


def cost_matrix(vocab, table: EmbeddingTable, metric: str = "euclidean") -> CostMatrix:
    """Costs between the tokens of ``vocab`` (an ActiveVocabulary or token list)."""
    tokens = getattr(vocab, "tokens", vocab)
    missing = [t for t in tokens if t not in table.index]
    if missing:
        raise MissingToken(", ".join(missing[:5]))
    vectors = table.vectors[[table.index[t] for t in tokens]]
    costs = pairwise_costs(vectors, metric)
    assert np.array_equal(costs, costs.T) and not np.diag(costs).any()
    costs.setflags(write=False)
    return CostMatrix(costs, metric)
