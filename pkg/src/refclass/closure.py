"""Deductive closures the relevance rules quantify over.

* sentence equivalence classes under declared biconditionals,
* the reflexive-transitive subset relation,
* memberships propagated upward through known subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from graphlib import CycleError, TopologicalSorter

from .model import InconsistencyError, KnowledgeBase, Sentence


class EquivalencePartition:
    """Union-find over sentences; unmentioned sentences are singletons."""

    def __init__(self, pairs=()):
        self._parent: dict[Sentence, Sentence] = {}
        for s, t in pairs:
            self._union(s, t)
        self._members: dict[Sentence, frozenset] = {}
        groups: dict[Sentence, set] = {}
        for s in self._parent:
            groups.setdefault(self.representative(s), set()).add(s)
        for rep, group in groups.items():
            frozen = frozenset(group)
            for s in group:
                self._members[s] = frozen

    def _find(self, s: Sentence) -> Sentence:
        parent = self._parent.setdefault(s, s)
        if parent != s:
            parent = self._find(parent)
            self._parent[s] = parent
        return parent

    def _union(self, s: Sentence, t: Sentence) -> None:
        rs, rt = self._find(s), self._find(t)
        if rs != rt:
            # smallest sentence becomes the representative so the choice is stable
            lo, hi = sorted((rs, rt))
            self._parent[hi] = lo

    def representative(self, s: Sentence) -> Sentence:
        s = Sentence(*s)
        if s not in self._parent:
            return s
        return self._find(s)

    def members(self, s: Sentence) -> frozenset:
        s = Sentence(*s)
        return self._members.get(s, frozenset({s}))

    def same(self, s: Sentence, t: Sentence) -> bool:
        return self.representative(s) == self.representative(t)

    def classes(self) -> list[frozenset]:
        return sorted(set(self._members.values()), key=min)


@dataclass(frozen=True)
class SubsetClosure:
    pairs: frozenset  # of (sub, super)

    def holds(self, sub: str, sup: str) -> bool:
        return (sub, sup) in self.pairs

    @cached_property
    def _up(self) -> dict[str, frozenset]:
        up: dict[str, set] = {}
        for a, b in self.pairs:
            up.setdefault(a, set()).add(b)
        return {a: frozenset(bs) for a, bs in up.items()}

    def supersets(self, cls: str) -> frozenset:
        return self._up.get(cls, frozenset())

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs


@dataclass(frozen=True)
class Closures:
    equivalence: EquivalencePartition
    subsets: SubsetClosure


def equivalence_classes(kb: KnowledgeBase) -> EquivalencePartition:
    return EquivalencePartition(kb.equivalences)


def subset_closure(kb: KnowledgeBase) -> SubsetClosure:
    """Reflexive-transitive closure of the declared subset facts.

    Raises :class:`InconsistencyError` on a cycle among distinct classes.
    """
    graph: dict[str, set[str]] = {c: set() for c in kb.classes}
    for sub, sup in kb.subsets:
        if sub != sup:
            graph[sub].add(sup)
    try:
        # supersets before subsets, so each class's upward set is ready when needed
        order = list(TopologicalSorter(graph).static_order())
    except CycleError as exc:
        cycle = exc.args[1]
        raise InconsistencyError(f"subset cycle: {' < '.join(reversed(cycle))}") from None
    up: dict[str, frozenset] = {}
    for cls in order:
        acc = {cls}
        for sup in graph[cls]:
            acc |= up[sup]
        up[cls] = frozenset(acc)
    return SubsetClosure(frozenset((a, b) for a, sups in up.items() for b in sups))


def known_memberships(kb: KnowledgeBase, closure: SubsetClosure, term: str) -> frozenset:
    """Every class ``term`` is known to belong to, directly or through a subset."""
    found: set[str] = set()
    for t, c in kb.memberships:
        if t == term:
            found |= closure.supersets(c)
    return frozenset(found)


def compute_closures(kb: KnowledgeBase) -> Closures:
    return Closures(equivalence_classes(kb), subset_closure(kb))
