"""Candidate generation, defeat rules, grounded labelling and verdicts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .closure import Closures, compute_closures, known_memberships
from .model import (
    Candidate,
    DefeatEdge,
    Interval,
    KnowledgeBase,
    Kind,
    Label,
    Principle,
    RefclassError,
    Sentence,
    Verdict,
    cover,
    differs,
    format_fraction,
    stronger,
)


class CandidateLimitError(RefclassError):
    """More candidates than the configured guard allows."""


@dataclass(frozen=True)
class Query:
    sentence: Sentence
    equivalents: frozenset

    @classmethod
    def resolve(cls, sentence: Sentence, closures: Closures) -> "Query":
        sentence = Sentence(*sentence)
        return cls(sentence, closures.equivalence.members(sentence))


@dataclass(frozen=True)
class DefeatGraph:
    candidates: tuple[Candidate, ...]
    edges: tuple[DefeatEdge, ...]

    def attackers(self, victim: Candidate) -> list[Candidate]:
        return [e.attacker for e in self.edges if e.victim == victim]


def _stat_text(target: str, reference: str, interval: Interval) -> str:
    if interval.is_point:
        return f"stat {target} {reference} = {format_fraction(interval.lo)}"
    return f"stat {target} {reference} in {interval.bracketed()}"


def _kind(kb: KnowledgeBase, closures: Closures, subject: str, reference: str) -> Kind:
    if any(closures.subsets.holds(reference, p.product) for p in kb.products):
        return Kind.PRODUCT
    if subject in kb.sample_terms:
        return Kind.SAMPLE
    return Kind.PLAIN


def generate_candidates(kb: KnowledgeBase, closures: Closures, query: Query) -> list[Candidate]:
    """All (subject, target, reference) inferences licensed for the query's equivalence class."""
    found = []
    for sentence in query.equivalents:
        if sentence.subject not in kb.all_terms:
            continue
        for reference in known_memberships(kb, closures.subsets, sentence.subject):
            interval = kb.stat(sentence.cls, reference)
            if interval is None:
                continue
            kind = _kind(kb, closures, sentence.subject, reference)
            found.append(Candidate(sentence.subject, sentence.cls, reference, interval, kind))
    return sorted(found, key=lambda c: c.sort_key)


def subset_defeats(x: Candidate, y: Candidate, closures: Closures) -> Optional[DefeatEdge]:
    if x.reference == y.reference or not differs(x.interval, y.interval):
        return None
    if not closures.subsets.holds(x.reference, y.reference):
        return None
    return DefeatEdge(x, y, Principle.SUBSET, (f"subset {x.reference} {y.reference}",))


def bayes_defeats(
    x: Candidate, y: Candidate, kb: KnowledgeBase, closures: Closures
) -> Optional[DefeatEdge]:
    """``x`` wins if its reference sits inside a product whose statistic matches ``y``."""
    if not differs(x.interval, y.interval) or x.subject not in kb.pair_index:
        return None
    for product in sorted(kb.products):
        if not closures.subsets.holds(x.reference, product.product):
            continue
        if kb.stat(x.target, product.product) != y.interval:
            continue
        return DefeatEdge(
            x,
            y,
            Principle.BAYES,
            (
                f"product {product.product} = {product.left} x {product.right}",
                f"subset {x.reference} {product.product}",
                _stat_text(x.target, product.product, y.interval),
                f"member {x.subject} {x.reference}",
            ),
        )
    return None


def supersample_defeats(x: Candidate, y: Candidate, kb: KnowledgeBase) -> Optional[DefeatEdge]:
    """The candidate drawn from the larger sample defeats the one from its subsample."""
    if x.kind is not Kind.SAMPLE or y.kind is not Kind.SAMPLE:
        return None
    if not differs(x.interval, y.interval):
        return None
    if (y.subject, x.subject) not in kb.subsamples:
        return None
    return DefeatEdge(x, y, Principle.SUPERSAMPLE, (f"subsample {y.subject} {x.subject}",))


def strength_defeats(x: Candidate, y: Candidate) -> Optional[DefeatEdge]:
    if not stronger(x.interval, y.interval):
        return None
    return DefeatEdge(
        x,
        y,
        Principle.STRENGTH,
        (
            _stat_text(x.target, x.reference, x.interval),
            _stat_text(y.target, y.reference, y.interval),
        ),
    )


def defeat_graph(candidates, kb: KnowledgeBase, closures: Closures) -> DefeatGraph:
    candidates = tuple(candidates)
    edges = []
    for x, y in itertools.permutations(candidates, 2):
        for edge in (
            subset_defeats(x, y, closures),
            bayes_defeats(x, y, kb, closures),
            supersample_defeats(x, y, kb),
            strength_defeats(x, y),
        ):
            if edge is not None:
                edges.append(edge)
    edges.sort(key=lambda e: e.sort_key)
    return DefeatGraph(candidates, tuple(edges))


def grounded_labels(graph: DefeatGraph) -> tuple[dict[Candidate, Label], int]:
    """Grounded labelling plus the number of sweeps that changed something.

    A candidate goes IN once every attacker is OUT and OUT once some
    attacker is IN; whatever is left when nothing changes is UNDECIDED.
    """
    attackers: dict[Candidate, set[Candidate]] = {c: set() for c in graph.candidates}
    for edge in graph.edges:
        attackers[edge.victim].add(edge.attacker)
    labels: dict[Candidate, Label] = {}
    rounds = 0
    changed = True
    while changed:
        changed = False
        for cand in graph.candidates:
            if cand in labels:
                continue
            if all(labels.get(a) is Label.OUT for a in attackers[cand]):
                labels[cand] = Label.IN
                changed = True
            elif any(labels.get(a) is Label.IN for a in attackers[cand]):
                labels[cand] = Label.OUT
                changed = True
        rounds += changed
    for cand in graph.candidates:
        labels.setdefault(cand, Label.UNDECIDED)
    return labels, rounds


def surviving(graph: DefeatGraph) -> tuple[dict[Candidate, Label], list[Candidate]]:
    labels, _ = grounded_labels(graph)
    survivors = [c for c in graph.candidates if labels[c] is not Label.OUT]
    return labels, survivors


def evaluate(
    kb: KnowledgeBase,
    query: Union[Sentence, Query],
    closures: Optional[Closures] = None,
    max_candidates: Optional[int] = None,
) -> Verdict:
    """Probability interval for ``query`` with the full defeat trace.

    The verdict is the cover of the surviving candidates' intervals, or
    ``[0, 1]`` when no statistic bears on the query at all.
    """
    if closures is None:
        closures = compute_closures(kb)
    if not isinstance(query, Query):
        query = Query.resolve(query, closures)
    candidates = generate_candidates(kb, closures, query)
    if max_candidates is not None and len(candidates) > max_candidates:
        raise CandidateLimitError(
            f"{len(candidates)} candidates exceed the limit of {max_candidates}"
        )
    graph = defeat_graph(candidates, kb, closures)
    labels, survivors = surviving(graph)
    interval = cover(c.interval for c in survivors) if survivors else Interval.ignorance()
    return Verdict(
        query=query.sentence,
        interval=interval,
        equivalents=tuple(sorted(query.equivalents)),
        candidates=graph.candidates,
        edges=graph.edges,
        labels=labels,
        survivors=tuple(survivors),
    )
