"""Brute-force reference implementation and extensional frequency checks.

Nothing here imports the closure or engine modules: equivalence classes
come from path search, the subset relation from boolean matrix squaring,
candidates from exhaustive triple enumeration, and survivors from the
least fixpoint of the defence function.  Agreement with
:func:`refclass.engine.evaluate` is therefore evidence, not tautology.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .model import (
    Candidate,
    DefeatEdge,
    Interval,
    KnowledgeBase,
    Kind,
    Label,
    PairTerm,
    Principle,
    Product,
    RefclassError,
    Sentence,
    StatStatement,
    Verdict,
    format_fraction,
)

MAX_CLASSES = 64
MAX_TERMS = 64


class OracleLimitError(RefclassError):
    pass


# -- extensional consistency -------------------------------------------------


@dataclass(frozen=True)
class Violation:
    fact: str
    expected: str
    actual: str


@dataclass
class ConsistencyReport:
    violations: list = field(default_factory=list)
    checked: int = 0
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def _fact_text(stat: StatStatement) -> str:
    if stat.interval.is_point:
        return f"stat {stat.target} {stat.reference} = {format_fraction(stat.interval.lo)}"
    return f"stat {stat.target} {stat.reference} in {stat.interval.bracketed()}"


def check_extensional(kb: KnowledgeBase) -> ConsistencyReport:
    """Compare declared stats and subset facts with enumerated extensions.

    Facts mentioning a class without an enumeration are skipped.
    """
    ext = dict(kb.extensions)
    report = ConsistencyReport()
    for stat in sorted(kb.stats):
        if stat.target not in ext or stat.reference not in ext:
            report.skipped += 1
            continue
        report.checked += 1
        ref = ext[stat.reference]
        if not ref:
            report.violations.append(
                Violation(_fact_text(stat), str(stat.interval), "undefined: reference class is empty")
            )
            continue
        freq = Fraction(len(ext[stat.target] & ref), len(ref))
        if freq not in stat.interval:
            report.violations.append(
                Violation(_fact_text(stat), str(stat.interval), format_fraction(freq))
            )
    for sub, sup in sorted(kb.subsets):
        if sub not in ext or sup not in ext:
            report.skipped += 1
            continue
        report.checked += 1
        missing = ext[sub] - ext[sup]
        if missing:
            report.violations.append(
                Violation(
                    f"subset {sub} {sup}",
                    f"every member of {sub} in {sup}",
                    f"not in {sup}: {' '.join(sorted(missing))}",
                )
            )
    return report


# -- brute-force evaluation ----------------------------------------------------


def _equivalents(kb: KnowledgeBase, sentence: Sentence) -> frozenset:
    """Breadth-first search along declared biconditionals."""
    seen = {sentence}
    frontier = deque([sentence])
    while frontier:
        s = frontier.popleft()
        for a, b in kb.equivalences:
            for u, v in ((a, b), (b, a)):
                if u == s and v not in seen:
                    seen.add(v)
                    frontier.append(v)
    return frozenset(seen)


def _subset_matrix(kb: KnowledgeBase) -> tuple[list[str], np.ndarray]:
    """Reflexive-transitive subset relation by repeated boolean squaring."""
    names = sorted(kb.classes)
    idx = {c: i for i, c in enumerate(names)}
    n = len(names)
    m = np.eye(n, dtype=bool)
    for a, b in kb.subsets:
        m[idx[a], idx[b]] = True
    while True:
        squared = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        if (squared == m).all():
            break
        m = squared
    return names, m


class NaiveOracle:
    """Brute-force evaluator for one small KB."""

    def __init__(self, kb: KnowledgeBase):
        # terms that only occur inside enumerations never enter the search
        active = {t for t, _ in kb.memberships} | {p.name for p in kb.pairs}
        active |= {s.subject for pair in kb.equivalences for s in pair}
        if len(kb.classes) > MAX_CLASSES or len(active) > MAX_TERMS:
            raise OracleLimitError(
                f"oracle handles at most {MAX_CLASSES} classes and {MAX_TERMS} active terms"
            )
        self.kb = kb
        names, matrix = _subset_matrix(kb)
        self.subset = {
            (a, b) for i, a in enumerate(names) for j, b in enumerate(names) if matrix[i, j]
        }
        for i in range(len(names)):
            for j in range(len(names)):
                if i != j and matrix[i, j] and matrix[j, i]:
                    raise OracleLimitError("subset cycle")
        self.terms = sorted(active)
        self.pairs = {p.name: p for p in kb.pairs}
        self.stats = {(s.target, s.reference): s.interval for s in kb.stats}

    def is_member(self, term: str, cls: str) -> bool:
        return any(t == term and (c, cls) in self.subset for t, c in self.kb.memberships)

    def candidates(self, equivalents: frozenset) -> list[Candidate]:
        found = []
        for subject in self.terms:
            for target in sorted(self.kb.classes):
                if Sentence(subject, target) not in equivalents:
                    continue
                for reference in sorted(self.kb.classes):
                    if (target, reference) not in self.stats:
                        continue
                    if not self.is_member(subject, reference):
                        continue
                    found.append(
                        Candidate(
                            subject, target, reference,
                            self.stats[(target, reference)],
                            self.kind(subject, reference),
                        )
                    )
        found.sort(key=lambda c: (c.reference, c.target, c.subject))
        return found

    def kind(self, subject: str, reference: str) -> Kind:
        for p in self.kb.products:
            if (reference, p.product) in self.subset:
                return Kind.PRODUCT
        for t, _ in self.kb.samples:
            if t == subject:
                return Kind.SAMPLE
        return Kind.PLAIN

    def attacks(self, x: Candidate, y: Candidate) -> list[Principle]:
        """Every principle under which ``x`` renders ``y`` irrelevant."""
        a, b = x.interval, y.interval
        x_in_y = b.lo <= a.lo and a.hi <= b.hi
        y_in_x = a.lo <= b.lo and b.hi <= a.hi
        differ = not x_in_y and not y_in_x
        found = []
        # a known subclass with a differing statistic wins
        if differ and x.reference != y.reference and (x.reference, y.reference) in self.subset:
            found.append(Principle.SUBSET)
        # a product space containing x's class carries y's value for x's target
        if differ and x.subject in self.pairs:
            for p in self.kb.products:
                if (x.reference, p.product) in self.subset and self.stats.get(
                    (x.target, p.product)
                ) == b:
                    found.append(Principle.BAYES)
                    break
        # larger sample beats its subsample
        if (
            differ
            and x.kind == Kind.SAMPLE
            and y.kind == Kind.SAMPLE
            and (y.subject, x.subject) in self.kb.subsamples
        ):
            found.append(Principle.SUPERSAMPLE)
        # strictly narrower interval
        if x_in_y and a != b:
            found.append(Principle.STRENGTH)
        return found

    def evaluate(self, sentence: Sentence) -> Verdict:
        sentence = Sentence(*sentence)
        equivalents = _equivalents(self.kb, sentence)
        cands = self.candidates(equivalents)
        edges = []
        for x in cands:
            for y in cands:
                if x == y:
                    continue
                for principle in self.attacks(x, y):
                    edges.append(DefeatEdge(x, y, principle))
        attackers = {c: {e.attacker for e in edges if e.victim == c} for c in cands}

        # grounded extension: least fixpoint of "defended by S"
        accepted: frozenset = frozenset()
        while True:
            attacked_by_s = {e.victim for e in edges if e.attacker in accepted}
            defended = frozenset(c for c in cands if attackers[c] <= attacked_by_s)
            if defended == accepted:
                break
            accepted = defended
        rejected = {e.victim for e in edges if e.attacker in accepted}
        labels = {
            c: Label.IN if c in accepted else Label.OUT if c in rejected else Label.UNDECIDED
            for c in cands
        }
        survivors = tuple(c for c in cands if labels[c] != Label.OUT)
        if survivors:
            interval = Interval(
                min(c.interval.lo for c in survivors), max(c.interval.hi for c in survivors)
            )
        else:
            interval = Interval(0, 1)
        return Verdict(
            query=sentence,
            interval=interval,
            equivalents=tuple(sorted(equivalents)),
            candidates=tuple(cands),
            edges=tuple(edges),
            labels=labels,
            survivors=survivors,
        )

    def queryable(self) -> list[Sentence]:
        """Sentences worth querying: any term paired with a stat target, plus equiv sentences."""
        targets = {s.target for s in self.kb.stats}
        found = {Sentence(t, c) for t in self.terms for c in targets}
        for s, t in self.kb.equivalences:
            found.update((s, t))
        return sorted(found)


def naive_evaluate(kb: KnowledgeBase, query: Sentence) -> Verdict:
    return NaiveOracle(kb).evaluate(query)


def replay_edge(edge: DefeatEdge, kb: KnowledgeBase) -> bool:
    """Check that an edge's recorded witnesses hold in ``kb`` and license the edge."""
    oracle = NaiveOracle(kb)
    x, y = edge.attacker, edge.victim
    witnesses = list(edge.witnesses)
    for w in witnesses:
        if not _witness_holds(w, kb, oracle):
            return False
    a, b = x.interval, y.interval
    differ = not (b.lo <= a.lo and a.hi <= b.hi) and not (a.lo <= b.lo and b.hi <= a.hi)
    if edge.principle is Principle.SUBSET:
        return differ and f"subset {x.reference} {y.reference}" in witnesses
    if edge.principle is Principle.BAYES:
        products = [w.split()[1] for w in witnesses if w.startswith("product ")]
        return differ and x.subject in oracle.pairs and any(
            f"subset {x.reference} {p}" in witnesses and oracle.stats.get((x.target, p)) == b
            for p in products
        )
    if edge.principle is Principle.SUPERSAMPLE:
        return differ and f"subsample {y.subject} {x.subject}" in witnesses
    return b.lo <= a.lo and a.hi <= b.hi and a != b


def _witness_holds(witness: str, kb: KnowledgeBase, oracle: NaiveOracle) -> bool:
    words = witness.replace("[", " ").replace("]", " ").replace(",", " ").split()
    kind = words[0]
    if kind == "subset":
        return (words[1], words[2]) in oracle.subset
    if kind == "member":
        return oracle.is_member(words[1], words[2])
    if kind == "subsample":
        return (words[1], words[2]) in kb.subsamples
    if kind == "product":
        return Product(words[1], words[3], words[5]) in kb.products
    if kind == "stat":
        if words[3] == "=":
            interval = Interval.point(Fraction(words[4]))
        else:
            interval = Interval(Fraction(words[4]), Fraction(words[5]))
        return oracle.stats.get((words[1], words[2])) == interval
    return False


# -- random knowledge bases ----------------------------------------------------


class LCG:
    """32-bit linear congruential generator, x' = (1664525 x + 1013904223) mod 2**32.

    Chosen over :mod:`random` so generated corpora are reproducible from the
    seed in any language.
    """

    A = 1664525
    C = 1013904223
    M = 2**32

    def __init__(self, seed: int):
        self.state = seed % self.M

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) % self.M
        return self.state

    def below(self, n: int) -> int:
        """Uniform-ish integer in ``range(n)`` from the high bits."""
        return (self.next() >> 16) % n

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def choice(self, seq):
        return seq[self.below(len(seq))]


def _random_interval(rng: LCG) -> Interval:
    den = 1 + rng.below(20)
    a, b = rng.below(den + 1), rng.below(den + 1)
    if rng.chance(1, 2):
        b = a
    return Interval(Fraction(min(a, b), den), Fraction(max(a, b), den))


def random_kb(
    seed: int,
    max_classes: int = 10,
    max_terms: int = 10,
    max_stats: int = 6,
) -> KnowledgeBase:
    """Deterministic small KB exercising every fact type.

    Classes ``C0..``, plain terms ``t0..``, pair terms ``p0..`` (pairs count
    against ``max_terms``).  Subset facts point from higher to lower index,
    plus one edge into the product class when that keeps the relation
    acyclic.  Interval endpoints have denominators at most 20.  Some of the
    stat budget is spent on product and sample set-ups so the Bayesian and
    supersample rules get exercised.
    """
    if max_classes > MAX_CLASSES or max_terms > MAX_TERMS:
        raise OracleLimitError("bounds exceed the oracle guard")
    rng = LCG(seed)
    n_classes = rng.below(max_classes + 1) if max_classes else 0
    if n_classes == 0:
        return KnowledgeBase()
    classes = [f"C{i}" for i in range(n_classes)]
    n_terms = rng.below(max_terms + 1) if max_terms else 0
    n_pairs = min(rng.below(3), n_terms // 3) if n_classes >= 3 else 0
    plain = [f"t{i}" for i in range(n_terms - n_pairs)]
    n_stats = min(rng.below(max_stats + 1) if max_stats else 0, n_classes * n_classes)
    stats: dict[tuple[str, str], Interval] = {}

    def add_stat(target: str, reference: str, interval: Interval) -> None:
        if len(stats) < n_stats:
            stats.setdefault((target, reference), interval)

    subsets = set()
    for i in range(1, n_classes):
        for j in range(i):
            if rng.chance(1, 4):
                subsets.add((classes[i], classes[j]))

    memberships = set()
    for t in plain:
        for _ in range(rng.below(3)):
            memberships.add((t, rng.choice(classes)))
    equivalences = set()

    products = set()
    pairs = set()
    if n_pairs and plain:
        prod = rng.choice(classes)
        others = [c for c in classes if c != prod]
        products.add(Product(prod, rng.choice(others), rng.choice(others)))
        sub = rng.choice(others)
        if not _reaches(subsets, prod, sub):
            subsets.add((sub, prod))
        for k in range(n_pairs):
            pair = PairTerm(f"p{k}", rng.choice(plain), rng.choice(plain))
            pairs.add(pair)
            memberships.add((pair.name, rng.choice([sub, sub, prod] + others)))
        if rng.chance(3, 4) and n_stats >= 3:
            # pair statistic, a competitor for a plain term, and the matching product statistic
            target, other_target = rng.choice(classes), rng.choice(classes)
            competitor_ref = rng.choice(classes)
            rival = rng.choice(plain)
            memberships.add((rival, competitor_ref))
            matching = _random_interval(rng)
            add_stat(target, sub, _random_interval(rng))
            add_stat(other_target, competitor_ref, matching)
            add_stat(target, prod, matching if rng.chance(4, 5) else _random_interval(rng))
            equivalences.add((Sentence("p0", target), Sentence(rival, other_target)))

    terms = plain + sorted(p.name for p in pairs)

    samples = set()
    subsamples = set()
    if len(terms) >= 2 and rng.chance(1, 2):
        pop = rng.choice(classes)
        chosen = sorted({rng.choice(terms) for _ in range(2 + rng.below(2))})
        for t in chosen:
            samples.add((t, pop))
        for a in chosen:
            for b in chosen:
                if a != b and rng.chance(1, 2):
                    subsamples.add((a, b))
        if len(chosen) >= 2 and rng.chance(2, 3):
            # each sample in its own size class, linked by a biconditional
            target = rng.choice(classes)
            for t in chosen[:2]:
                ref = rng.choice(classes)
                memberships.add((t, ref))
                add_stat(target, ref, _random_interval(rng))
            equivalences.add((Sentence(chosen[0], target), Sentence(chosen[1], target)))

    if terms:
        for _ in range(rng.below(4)):
            s = Sentence(rng.choice(terms), rng.choice(classes))
            t = Sentence(rng.choice(terms), rng.choice(classes))
            equivalences.add((s, t))

    while len(stats) < n_stats:
        key = (rng.choice(classes), rng.choice(classes))
        if key not in stats:
            stats[key] = _random_interval(rng)

    return KnowledgeBase(
        classes=frozenset(classes),
        terms=frozenset(plain),
        pairs=frozenset(pairs),
        memberships=frozenset(memberships),
        subsets=frozenset(subsets),
        products=frozenset(products),
        samples=frozenset(samples),
        subsamples=frozenset(subsamples),
        equivalences=frozenset(equivalences),
        stats=frozenset(StatStatement(t, r, i) for (t, r), i in stats.items()),
    )


def _reaches(edges, start: str, goal: str) -> bool:
    frontier, seen = [start], {start}
    while frontier:
        node = frontier.pop()
        if node == goal:
            return True
        for a, b in edges:
            if a == node and b not in seen:
                seen.add(b)
                frontier.append(b)
    return False

