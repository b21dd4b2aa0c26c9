"""Reference-class reasoning: probability intervals from statistical knowledge."""

from .closure import compute_closures, equivalence_classes, known_memberships, subset_closure
from .engine import Query, evaluate, generate_candidates
from .model import (
    Candidate,
    DefeatEdge,
    InconsistencyError,
    Interval,
    KnowledgeBase,
    Sentence,
    StatStatement,
    Verdict,
    cover,
    differs,
    stronger,
)
from .parser import ParseError, parse_kb, parse_query, serialize_kb

__all__ = [
    "Candidate",
    "DefeatEdge",
    "InconsistencyError",
    "Interval",
    "KnowledgeBase",
    "ParseError",
    "Query",
    "Sentence",
    "StatStatement",
    "Verdict",
    "compute_closures",
    "cover",
    "differs",
    "equivalence_classes",
    "evaluate",
    "generate_candidates",
    "known_memberships",
    "parse_kb",
    "parse_query",
    "serialize_kb",
    "stronger",
    "subset_closure",
]
