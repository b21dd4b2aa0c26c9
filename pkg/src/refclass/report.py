"""Rendering verdicts: the JSON trace document and the plain-text explanation."""

from __future__ import annotations

import json
from fractions import Fraction

from .model import Interval, Label, Verdict, format_fraction

SCHEMA_VERSION = 1


def _interval_doc(interval: Interval) -> list[str]:
    return [format_fraction(interval.lo), format_fraction(interval.hi)]


def trace_document(verdict: Verdict) -> dict:
    index = {c: i for i, c in enumerate(verdict.candidates)}
    return {
        "schema_version": SCHEMA_VERSION,
        "query": str(verdict.query),
        "equivalence_class": [str(s) for s in verdict.equivalents],
        "candidates": [
            {
                "index": i,
                "subject": c.subject,
                "target": c.target,
                "reference": c.reference,
                "interval": _interval_doc(c.interval),
                "kind": c.kind.value,
            }
            for i, c in enumerate(verdict.candidates)
        ],
        "edges": [
            {
                "attacker": index[e.attacker],
                "victim": index[e.victim],
                "principle": e.principle.value,
                "witnesses": list(e.witnesses),
            }
            for e in verdict.edges
        ],
        "labels": [verdict.labels[c].value for c in verdict.candidates],
        "survivors": [index[c] for c in verdict.survivors],
        "verdict": _interval_doc(verdict.interval),
    }


def dumps_trace(verdict: Verdict) -> str:
    return json.dumps(trace_document(verdict), indent=2, ensure_ascii=False) + "\n"


def verdict_from_trace(doc: dict) -> tuple[Interval, list[str]]:
    """Recompute labels and the verdict interval from a trace document alone."""
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported trace schema {doc.get('schema_version')!r}")
    intervals = [Interval(Fraction(lo), Fraction(hi)) for lo, hi in (c["interval"] for c in doc["candidates"])]
    n = len(intervals)
    attackers = [set() for _ in range(n)]
    for e in doc["edges"]:
        attackers[e["victim"]].add(e["attacker"])
    labels: list = [None] * n
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if labels[i] is not None:
                continue
            if all(labels[a] == Label.OUT.value for a in attackers[i]):
                labels[i], changed = Label.IN.value, True
            elif any(labels[a] == Label.IN.value for a in attackers[i]):
                labels[i], changed = Label.OUT.value, True
    labels = [lab or Label.UNDECIDED.value for lab in labels]
    alive = [iv for iv, lab in zip(intervals, labels) if lab != Label.OUT.value]
    if not alive:
        return Interval.ignorance(), labels
    return Interval(min(i.lo for i in alive), max(i.hi for i in alive)), labels


def verdict_line(interval: Interval, decimal: bool = False) -> str:
    text = str(interval)
    if decimal:
        text += f" ({interval.decimal()})"
    return text


def _names(verdict: Verdict) -> dict:
    refs = [c.reference for c in verdict.candidates]
    names = {}
    for c in verdict.candidates:
        if refs.count(c.reference) == 1:
            names[c] = c.reference
        else:
            names[c] = f"{c.reference} [{c.subject} in {c.target}]"
    return names


def explain(verdict: Verdict) -> str:
    names = _names(verdict)
    out = [f"query: {verdict.query}"]
    if len(verdict.equivalents) > 1:
        out.append("equivalent sentences: " + "; ".join(str(s) for s in verdict.equivalents))
    if not verdict.candidates:
        out.append("no statistics bear on this query; verdict is total ignorance")
        out.append(f"verdict: {verdict.interval}")
        return "\n".join(out) + "\n"
    out.append("candidates:")
    for i, c in enumerate(verdict.candidates):
        out.append(
            f"  [{i}] {c.subject} in {c.target} via {c.reference}: {c.interval} ({c.kind.value})"
        )
    if verdict.edges:
        out.append("defeats:")
        for e in verdict.edges:
            out.append(
                f"  {names[e.attacker]} defeats {names[e.victim]} by {e.principle.display_name}"
                f" (witness: {'; '.join(e.witnesses)})"
            )
    else:
        out.append("no defeats; verdict is cover of survivors")
    out.append("labels:")
    for c in verdict.candidates:
        out.append(f"  {names[c]}: {verdict.labels[c].value.upper()}")
    survivors = ", ".join(names[c] for c in verdict.survivors)
    out.append(f"survivors: {survivors}")
    out.append(f"verdict: {verdict.interval}")
    return "\n".join(out) + "\n"

