"""Command-line front end: ``summarize``, ``explain`` and ``evaluate``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .errors import OTExtSumError
from .export import write_text
from .pipeline import (
    DOCUMENT_ERRORS,
    PRESETS,
    RunConfig,
    Summarizer,
    _corpus_lines,
    evaluate,
    read_header_config,
    scores_csv,
    write_summaries,
)
from .text_model import parse_document_line

EXIT_OK = 0
EXIT_DOC_ERRORS = 2

# argparse dest -> RunConfig field
CONFIG_FLAGS = {
    "embeddings": "embeddings",
    "metric": "metric",
    "stopwords": "stopwords",
    "remove_stopwords": "remove_stopwords",
    "strategy": "strategy",
    "budget": "budget",
    "beam_width": "beam_width",
    "final_beam_only": "final_beam_only",
    "iters": "iters",
    "alpha": "alpha",
    "lr": "lr",
    "tau": "tau",
    "penalty": "penalty",
    "seed": "seed",
    "solver": "solver",
    "epsilon": "epsilon",
    "tolerance": "tolerance",
    "trace_dir": "trace_dir",
}


def _add_run_flags(p):
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="results file (its header) or JSON config to start from")
    g.add_argument("--preset", choices=sorted(PRESETS), help="per-corpus budget default")
    g.add_argument("--embeddings", help="word2vec text-format embedding file")
    g.add_argument("--metric", choices=("euclidean", "cosine"))
    g.add_argument("--stopwords", help="stop-word list, one token per line (default: bundled English)")
    sw = g.add_mutually_exclusive_group()
    sw.add_argument("--remove-stopwords", dest="remove_stopwords", action="store_true", default=None)
    sw.add_argument("--keep-stopwords", dest="remove_stopwords", action="store_false")
    g.add_argument("--strategy", choices=("beam", "bip"))
    g.add_argument("--budget", "-B", type=int)
    g.add_argument("--beam-width", "-K", type=int)
    g.add_argument("--final-beam-only", action="store_true", default=None,
                   help="return the best of the last beam instead of the best of any size")
    g.add_argument("--iters", "-T", type=int)
    g.add_argument("--alpha", type=float)
    g.add_argument("--lr", type=float)
    g.add_argument("--tau", type=float)
    g.add_argument("--penalty", choices=("abs", "squared"))
    g.add_argument("--seed", type=int)
    g.add_argument("--solver", choices=("exact", "sinkhorn"))
    g.add_argument("--epsilon", type=float)
    g.add_argument("--tolerance", type=float)
    g.add_argument("--trace-dir", help="directory for per-document trace files")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="otextsum", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("summarize", help="select summary sentences for every document of a corpus")
    s.add_argument("--input", "-i", required=True, help="JSONL corpus")
    s.add_argument("--output", "-o", required=True, help="JSONL results")
    _add_run_flags(s)

    e = sub.add_parser("explain", help="export the transport plan of each produced summary")
    e.add_argument("--input", "-i", required=True, help="JSONL corpus")
    e.add_argument("--output", "-o", required=True, help="output directory for CSV and SVG files")
    e.add_argument("--id", action="append", dest="ids", help="only these document ids (repeatable)")
    _add_run_flags(e)

    v = sub.add_parser("evaluate", help="ROUGE-1/2/L F-scores against references")
    v.add_argument("--input", "-i", required=True, help="results JSONL, or {candidate, reference} pairs")
    v.add_argument("--references", "-r", help="JSONL of {id, reference}, aligned by id")
    v.add_argument("--output", "-o", help="CSV output (default: stdout)")
    return parser


def resolve_config(args) -> RunConfig:
    """Defaults, then ``--config``, then ``--preset``, then explicit flags."""
    config = read_header_config(args.config) if args.config else RunConfig()
    if args.preset:
        config = config.with_preset(args.preset)
    overrides = {field: getattr(args, dest) for dest, field in CONFIG_FLAGS.items()}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **overrides)


def _summarize(args) -> int:
    config = resolve_config(args)
    errors = write_summaries(args.input, args.output, config, workers=args.workers)
    if errors:
        logging.getLogger(__name__).warning("%d document(s) failed; see their output lines", errors)
    return EXIT_DOC_ERRORS if errors else EXIT_OK


def _explain(args) -> int:
    config = resolve_config(args)
    summarizer = Summarizer(config)
    out = Path(args.output)
    wanted = set(args.ids) if args.ids else None
    errors = 0
    for k, (lineno, line) in enumerate(_corpus_lines(args.input)):
        try:
            doc_id, raw = parse_document_line(line, lineno)
            if wanted is not None and doc_id not in wanted:
                continue
            selected, _, csv_text, svg_text = summarizer.explain(raw, title=f"document {doc_id}")
        except DOCUMENT_ERRORS as exc:
            errors += 1
            print(f"line {lineno + 1}: {type(exc).__name__}: {exc}", file=sys.stderr)
            continue
        stem = f"doc{k:06d}"
        write_text(out / f"{stem}.plan.csv", csv_text)
        write_text(out / f"{stem}.plan.svg", svg_text)
    return EXIT_DOC_ERRORS if errors else EXIT_OK


def _evaluate(args) -> int:
    rows = evaluate(args.input, args.references)
    text = scores_csv(rows)
    if args.output:
        write_text(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_DOC_ERRORS if any(r["error"] for r in rows) else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"summarize": _summarize, "explain": _explain, "evaluate": _evaluate}[args.command]
    try:
        return handler(args)
    except (OTExtSumError, ValueError, OSError) as exc:
        print(f"otextsum: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
