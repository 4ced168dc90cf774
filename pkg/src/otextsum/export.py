"""Static file exports: transport-plan CSV and SVG heatmap, traces, loss curves.

Floats are written with ``repr`` so output bytes depend only on the values.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np

PLAN_COLUMNS = ("document_token", "summary_token", "flow", "unit_cost", "flow_cost")

CELL = 18
LABEL_MARGIN = 110


def plan_axes(doc_dist, summary_dist):
    """Row and column token indices shown for a plan: the two supports."""
    return np.flatnonzero(np.asarray(doc_dist)), np.flatnonzero(np.asarray(summary_dist))


def plan_rows(flows, C, tokens, rows, cols):
    """One record per (document token, summary token) pair of the two supports."""
    flows = np.asarray(flows, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    out = []
    for i in rows:
        for j in cols:
            x = float(flows[i, j])
            c = float(C[i, j])
            out.append((tokens[i], tokens[j], x, c, x * c))
    return out


def plan_csv(flows, C, tokens, doc_dist, summary_dist) -> str:
    rows, cols = plan_axes(doc_dist, summary_dist)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PLAN_COLUMNS)
    for d, s, x, c, xc in plan_rows(flows, C, tokens, rows, cols):
        writer.writerow((d, s, repr(x), repr(c), repr(xc)))
    return buf.getvalue()


def read_plan_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    return [
        {
            "document_token": r["document_token"],
            "summary_token": r["summary_token"],
            "flow": float(r["flow"]),
            "unit_cost": float(r["unit_cost"]),
            "flow_cost": float(r["flow_cost"]),
        }
        for r in reader
    ]


def intensity_levels(block) -> np.ndarray:
    """Integer shade 0..255 per cell, proportional to flow, 255 at the largest flow."""
    block = np.maximum(np.asarray(block, dtype=np.float64), 0.0)
    top = block.max() if block.size else 0.0
    if top <= 0:
        return np.zeros(block.shape, dtype=np.int64)
    return np.rint(255.0 * block / top).astype(np.int64)


def plan_svg(flows, tokens, doc_dist, summary_dist, title: str = "transport plan") -> str:
    """Heatmap of the plan: document tokens down the side, summary tokens across the top.

    Each cell carries ``data-level`` (the 0..255 shade) and the plan's
    largest flow is stored on the root element as ``data-max-flow``, so
    ``level / 255 * max_flow`` recovers every flow to within 1/255 of the
    maximum.
    """
    rows, cols = plan_axes(doc_dist, summary_dist)
    block = np.asarray(flows, dtype=np.float64)[np.ix_(rows, cols)]
    levels = intensity_levels(block)
    top = float(block.max()) if block.size else 0.0
    width = LABEL_MARGIN + CELL * len(cols) + 10
    height = LABEL_MARGIN + CELL * len(rows) + 10

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" data-max-flow="{top!r}">',
        f"<title>{escape(title)}</title>",
        '<g font-family="monospace" font-size="11">',
    ]
    for c, j in enumerate(cols):
        x = LABEL_MARGIN + CELL * c + CELL // 2
        parts.append(
            f'<text x="{x}" y="{LABEL_MARGIN - 6}" transform="rotate(-60 {x} {LABEL_MARGIN - 6})">'
            f"{escape(tokens[j])}</text>"
        )
    for r, i in enumerate(rows):
        y = LABEL_MARGIN + CELL * r + CELL // 2 + 4
        parts.append(f'<text x="{LABEL_MARGIN - 6}" y="{y}" text-anchor="end">{escape(tokens[i])}</text>')
    parts.append("</g>")
    parts.append('<g stroke="#dddddd" stroke-width="0.5">')
    for r, i in enumerate(rows):
        for c, j in enumerate(cols):
            level = int(levels[r, c])
            shade = 255 - level
            label = quoteattr(f"{tokens[i]} -> {tokens[j]}: {float(block[r, c])!r}")
            parts.append(
                f'<rect x="{LABEL_MARGIN + CELL * c}" y="{LABEL_MARGIN + CELL * r}" '
                f'width="{CELL}" height="{CELL}" fill="rgb({shade},{shade},255)" '
                f'data-row="{r}" data-col="{c}" data-level="{level}" aria-label={label}/>'
            )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1) + "\n"
