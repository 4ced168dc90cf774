"""End-to-end composition: corpus in, selected sentences and scores out."""

from __future__ import annotations

import csv
import io
import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import __version__, ot
from .beam import BeamConfig, beam_search, extraction_vector
from .bip import BipConfig, bip_optimize
from .embeddings import METRICS, EmbeddingTable, cost_matrix, load_embeddings
from .errors import MissingReference, OTExtSumError, ParseError
from .export import dumps_json, plan_csv, plan_svg, write_text
from .rouge import rouge_scores
from .text_model import (
    document_distribution,
    load_stopwords,
    parse_document_line,
    sentence_distributions,
    summary_distribution,
    tokenize,
)

PRESETS = {"multinews": 9, "billsum": 7, "pubmed": 6, "cnndm": 3}

# errors that belong to one document and must not stop a batch
DOCUMENT_ERRORS = (OTExtSumError, ValueError, ArithmeticError)


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's output.

    ``solver`` drives beam-search scoring and the reported coverage; the
    relaxed optimiser always iterates with Sinkhorn, using ``epsilon`` and
    ``tolerance``.
    """

    embeddings: str | None = None
    metric: str = "euclidean"
    remove_stopwords: bool = True
    stopwords: str | None = None
    lowercase: bool = True
    strategy: str = "beam"
    budget: int = 3
    beam_width: int = 5
    final_beam_only: bool = False
    iters: int = 200
    alpha: float = 1.0
    lr: float = 0.1
    tau: float = 1.0
    penalty: str = "abs"
    seed: int = 0
    solver: str = "exact"
    epsilon: float | None = None
    tolerance: float = 1e-6
    trace_dir: str | None = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        if self.strategy not in ("beam", "bip"):
            raise ValueError("strategy must be 'beam' or 'bip'")
        # delegate range checks to the per-module configs
        self.beam_config()
        self.bip_config()
        self.solver_config()
        self.bip_solver_config()

    def beam_config(self) -> BeamConfig:
        return BeamConfig(self.budget, self.beam_width, self.final_beam_only)

    def bip_config(self) -> BipConfig:
        return BipConfig(self.iters, self.alpha, self.lr, self.tau, self.seed, self.penalty)

    def solver_config(self) -> ot.SolverConfig:
        return ot.SolverConfig(kind=self.solver, epsilon=self.epsilon, tolerance=self.tolerance)

    def bip_solver_config(self) -> ot.SolverConfig:
        return ot.SolverConfig(kind="sinkhorn", epsilon=self.epsilon, tolerance=self.tolerance)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def with_preset(self, name: str) -> RunConfig:
        if name not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        return replace(self, budget=PRESETS[name])


def header(config: RunConfig) -> dict:
    return {"otextsum_version": __version__, "config": config.to_dict()}


def is_header(obj) -> bool:
    return isinstance(obj, dict) and "otextsum_version" in obj and "config" in obj


def read_header_config(path) -> RunConfig:
    """Effective config from a results file header or a plain JSON config file."""
    text = Path(path).read_text(encoding="utf-8")
    first = text.lstrip().splitlines()[0] if text.strip() else ""
    try:
        obj = json.loads(first)
    except json.JSONDecodeError:
        obj = json.loads(text)
    if is_header(obj):
        obj = obj["config"]
    return RunConfig.from_dict(obj)


class Summarizer:
    """Holds the loaded embedding table and stop-word list for one run."""

    def __init__(self, config: RunConfig, table: EmbeddingTable | None = None):
        self.config = config
        if table is None:
            if not config.embeddings:
                raise ValueError("an embedding file is required")
            table = load_embeddings(config.embeddings)
        self.table = table
        self.stopwords = load_stopwords(config.stopwords) if config.remove_stopwords else frozenset()

    def prepare(self, raw):
        """Tokenized document plus everything the optimisers need."""
        doc, vocab = tokenize(
            raw, self.table.index, lowercase=self.config.lowercase, stopwords=self.stopwords
        )
        C = cost_matrix(vocab, self.table, self.config.metric)
        dists = sentence_distributions(doc, vocab.p)
        return doc, vocab, C, dists, document_distribution(dists)

    def select(self, doc, C, dists, doc_dist):
        """Selected indices, trace dict, budget-unmet flag and extra files to write."""
        cfg = self.config
        eligible = doc.eligible()
        extra = {}
        if len(eligible) < cfg.budget:
            trace = {"strategy": "all_eligible", "selected": eligible, "eligible": len(eligible)}
            return tuple(eligible), trace, True, extra
        if cfg.strategy == "beam":
            result = beam_search(doc, dists, doc_dist, C, cfg.beam_config(), cfg.solver_config())
            return result.selected, result.trace_dict(), False, extra
        result = bip_optimize(
            doc, dists, doc_dist, C, cfg.budget, cfg.bip_config(), cfg.bip_solver_config()
        )
        trace = result.trace_dict()
        trace["seed"] = cfg.seed
        extra["loss.csv"] = result.loss_csv()
        return result.selected, trace, False, extra

    def summarize(self, index: int, doc_id: str, raw) -> dict:
        line = {"id": doc_id}
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                doc, vocab, C, dists, doc_dist = self.prepare(raw)
                selected, trace, unmet, extra = self.select(doc, C, dists, doc_dist)
                summary = summary_distribution(dists, extraction_vector(selected, doc.n))
                plan = ot.solve(doc_dist, summary, C, self.config.solver_config())
            except DOCUMENT_ERRORS as exc:
                line["error"] = {"type": type(exc).__name__, "message": str(exc)}
                return line
        line.update(
            selected=list(selected),
            summary=" ".join(doc.source_text[i].strip() for i in selected),
            coverage=1.0 - plan.distance,
            wasserstein=plan.distance,
            n_sentences=doc.n,
            p=vocab.p,
            oov_dropped=doc.oov_dropped,
            budget_unmet=unmet,
            strategy=trace["strategy"],
            trace=None,
        )
        if caught:
            line["warnings"] = sorted({str(w.message) for w in caught})
        if self.config.trace_dir:
            stem = f"doc{index:06d}"
            write_text(Path(self.config.trace_dir) / f"{stem}.trace.json", dumps_json(trace))
            for suffix, text in extra.items():
                write_text(Path(self.config.trace_dir) / f"{stem}.{suffix}", text)
            line["trace"] = f"{stem}.trace.json"
        return line

    def explain(self, raw, title="transport plan"):
        """Plan CSV and SVG for the summary this config selects."""
        doc, vocab, C, dists, doc_dist = self.prepare(raw)
        selected, _, _, _ = self.select(doc, C, dists, doc_dist)
        summary = summary_distribution(dists, extraction_vector(selected, doc.n))
        plan = ot.solve(doc_dist, summary, C, self.config.solver_config())
        tokens = vocab.tokens
        return (
            selected,
            plan,
            plan_csv(plan.flows, C, tokens, doc_dist, summary),
            plan_svg(plan.flows, tokens, doc_dist, summary, title),
        )


def _corpus_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            if line.strip():
                yield lineno, line


_WORKER: Summarizer | None = None


def _init_worker(config_dict):
    global _WORKER
    _WORKER = Summarizer(RunConfig.from_dict(config_dict))


def _work(args):
    index, lineno, line = args
    return _summarize_line(_WORKER, index, lineno, line)


def _summarize_line(summarizer, index, lineno, line):
    try:
        doc_id, raw = parse_document_line(line, lineno)
    except ParseError as exc:
        return {"id": str(lineno), "error": {"type": "ParseError", "message": str(exc)}}
    return summarizer.summarize(index, doc_id, raw)


def summarize_corpus(input_path, config: RunConfig, workers: int = 1, summarizer=None):
    """Yield the header, then one result dict per nonblank input line, in input order."""
    yield header(config)
    jobs = [(k, lineno, line) for k, (lineno, line) in enumerate(_corpus_lines(input_path))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(config.to_dict(),)) as pool:
            # map yields in submission order
            yield from pool.map(_work, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
        return
    summarizer = summarizer or Summarizer(config)
    for k, lineno, line in jobs:
        yield _summarize_line(summarizer, k, lineno, line)


def dumps_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def write_summaries(input_path, output_path, config: RunConfig, workers: int = 1) -> int:
    """Write the JSONL results file; returns the number of documents that errored."""
    errors = 0
    Path(output_path).parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8", newline="\n") as out:
        for obj in summarize_corpus(input_path, config, workers):
            errors += "error" in obj
            out.write(dumps_line(obj))
    return errors


# -- evaluation --------------------------------------------------------------


def _read_records(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(str(exc), lineno + 1) from exc
            if is_header(obj):
                continue
            obj.setdefault("id", str(lineno))
            obj["id"] = str(obj["id"])
            yield obj


def _reference_text(obj):
    for key in ("reference", "summary", "text"):
        if key in obj:
            value = obj[key]
            return " ".join(value) if isinstance(value, list) else str(value)
    raise ParseError(f"reference record {obj['id']!r} has no reference text")


def evaluate(results_path, references_path=None):
    """Per-document ROUGE F-scores plus their mean.

    Without ``references_path`` every record must hold ``candidate`` and
    ``reference``. Otherwise candidates are the ``summary`` fields of a
    results file, aligned by id; documents without a reference are
    reported with a ``MissingReference`` error and left out of the mean.
    """
    references = None
    if references_path is not None:
        references = {}
        for obj in _read_records(references_path):
            references[obj["id"]] = _reference_text(obj)

    rows = []
    for obj in _read_records(results_path):
        doc_id = obj["id"]
        candidate = obj.get("candidate", obj.get("summary", ""))
        error = obj["error"]["type"] if isinstance(obj.get("error"), dict) else ""
        try:
            if references is None:
                if "reference" not in obj:
                    raise MissingReference(doc_id)
                reference = _reference_text(obj)
            elif doc_id in references:
                reference = references[doc_id]
            else:
                raise MissingReference(doc_id)
        except MissingReference:
            rows.append({"id": doc_id, "rouge1": None, "rouge2": None, "rougeL": None, "error": "MissingReference"})
            continue
        scores = rouge_scores(candidate or "", reference)
        rows.append({"id": doc_id, **{k: s.f1 for k, s in scores.items()}, "error": error})
    return rows


def mean_row(rows) -> dict:
    scored = [r for r in rows if r["rouge1"] is not None]
    out = {"id": "mean", "error": ""}
    for key in ("rouge1", "rouge2", "rougeL"):
        out[key] = float(np.mean([r[key] for r in scored])) if scored else None
    return out


def scores_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("id", "rouge1_f", "rouge2_f", "rougeL_f", "error"))
    for r in [*rows, mean_row(rows)]:
        writer.writerow(
            (r["id"], *("" if r[k] is None else repr(r[k]) for k in ("rouge1", "rouge2", "rougeL")), r["error"])
        )
    return buf.getvalue()
