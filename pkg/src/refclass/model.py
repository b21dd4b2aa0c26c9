"""Domain types and the interval algebra shared by every module.

All frequencies are exact :class:`fractions.Fraction` values.  A point
statistic ``p`` is the degenerate interval ``[p, p]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional

ZERO = Fraction(0)
ONE = Fraction(1)


class RefclassError(Exception):
    """Base class for every error raised by this package."""


class InconsistencyError(RefclassError, ValueError):
    """The knowledge base contradicts itself (conflicting stats, subset cycle)."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and numeric strings to a Fraction.

    Floats are refused: they cannot carry an exact frequency.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not frequencies")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decimal_string(value: Fraction, digits: int = 5) -> str:
    """Render ``value`` in decimal: exact when it terminates, else ``≈`` + truncated digits."""
    den = value.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den == 1:
        # terminating expansion; find the exact number of places
        places = 0
        scaled = value
        while scaled.denominator != 1:
            scaled *= 10
            places += 1
        whole, frac = divmod(scaled.numerator, 10**places) if places else (scaled.numerator, 0)
        return f"{whole}.{frac:0{places}d}" if places else f"{whole}"
    scaled = value * 10**digits
    truncated = scaled.numerator // scaled.denominator
    whole, frac = divmod(truncated, 10**digits)
    return f"≈{whole}.{frac:0{digits}d}"


@dataclass(frozen=True, order=True)
class Interval:
    """Closed subinterval ``[lo, hi]`` of ``[0, 1]`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo = as_fraction(self.lo)
        hi = as_fraction(self.hi)
        if lo < ZERO or hi > ONE:
            raise ValueError(f"interval [{lo}, {hi}] leaves [0, 1]")
        if lo > hi:
            raise ValueError(f"interval lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value) -> "Interval":
        return cls(value, value)

    @classmethod
    def ignorance(cls) -> "Interval":
        return cls(ZERO, ONE)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, item) -> bool:
        if isinstance(item, Interval):
            return self.lo <= item.lo and item.hi <= self.hi
        value = as_fraction(item)
        return self.lo <= value <= self.hi

    def __str__(self) -> str:
        if self.is_point:
            return format_fraction(self.lo)
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"

    def bracketed(self) -> str:
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"

    def decimal(self, digits: int = 5) -> str:
        if self.is_point:
            return decimal_string(self.lo, digits)
        return f"[{decimal_string(self.lo, digits)}, {decimal_string(self.hi, digits)}]"


def interval_new(lo, hi) -> Interval:
    return Interval(lo, hi)


def differs(x: Interval, y: Interval) -> bool:
    """True iff neither interval includes the other."""
    return x not in y and y not in x


def stronger(x: Interval, y: Interval) -> bool:
    """True iff ``x`` is a strict subinterval of ``y``."""
    return x in y and x != y


def cover(xs: Iterable[Interval]) -> Interval:
    """Smallest interval containing every member of ``xs``."""
    xs = list(xs)
    if not xs:
        raise ValueError("cover of an empty collection is undefined")
    return Interval(min(x.lo for x in xs), max(x.hi for x in xs))


class Sentence(NamedTuple):
    """Atomic sentence ``subject in cls``."""

    subject: str
    cls: str

    def __str__(self) -> str:
        return f"{self.subject} in {self.cls}"


class PairTerm(NamedTuple):
    """A named ordered pair ``name = <first, second>``; usable wherever a term is."""

    name: str
    first: str
    second: str


class Product(NamedTuple):
    """``product = left x right``."""

    product: str
    left: str
    right: str


class StatStatement(NamedTuple):
    """``%(target, reference) in interval``: frequency of target among reference."""

    target: str
    reference: str
    interval: Interval


class Kind(str, enum.Enum):
    PLAIN = "plain"
    PRODUCT = "product-based"
    SAMPLE = "sample-based"


class Principle(str, enum.Enum):
    SUBSET = "subset"
    BAYES = "bayes"
    SUPERSAMPLE = "supersample"
    STRENGTH = "strength"

    @property
    def display_name(self) -> str:
        return _PRINCIPLE_TITLES[self]


_PRINCIPLE_TITLES = {
    Principle.SUBSET: "Subset Principle",
    Principle.BAYES: "Bayesian Principle",
    Principle.SUPERSAMPLE: "Supersample Principle",
    Principle.STRENGTH: "strength rule",
}


class Label(str, enum.Enum):
    IN = "in"
    OUT = "out"
    UNDECIDED = "undecided"


@dataclass(frozen=True, order=True)
class Candidate:
    """One potential reference-class inference for the query."""

    subject: str
    target: str
    reference: str
    interval: Interval = field(compare=False)
    kind: Kind = field(default=Kind.PLAIN, compare=False)

    @property
    def sort_key(self) -> tuple:
        return (self.reference, self.target, self.subject)

    @property
    def sentence(self) -> Sentence:
        return Sentence(self.subject, self.target)

    def __str__(self) -> str:
        return f"{self.subject} in {self.target} via {self.reference}: {self.interval}"


@dataclass(frozen=True)
class DefeatEdge:
    attacker: Candidate
    victim: Candidate
    principle: Principle
    witnesses: tuple[str, ...] = ()

    @property
    def sort_key(self) -> tuple:
        return (self.attacker.sort_key, self.victim.sort_key, self.principle.value)


@dataclass(frozen=True)
class Verdict:
    query: Sentence
    interval: Interval
    equivalents: tuple[Sentence, ...]
    candidates: tuple[Candidate, ...]
    edges: tuple[DefeatEdge, ...]
    labels: Mapping[Candidate, Label]
    survivors: tuple[Candidate, ...]

    @property
    def survivor_set(self) -> frozenset:
        return frozenset(self.survivors)


def _canonical_equiv(s: Sentence, t: Sentence) -> tuple[Sentence, Sentence]:
    return (s, t) if s <= t else (t, s)


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable collection of declarations and facts.

    Construction validates that every referenced id is declared, that no
    (target, reference) pair carries two different statistics, and that
    each product class appears in exactly one product fact.  Subset cycles
    are detected by :func:`refclass.closure.subset_closure`.
    """

    classes: frozenset = frozenset()
    terms: frozenset = frozenset()
    pairs: frozenset = frozenset()  # of PairTerm
    memberships: frozenset = frozenset()  # of (term, class)
    subsets: frozenset = frozenset()  # of (sub, super)
    products: frozenset = frozenset()  # of Product
    samples: frozenset = frozenset()  # of (sample term, population class)
    subsamples: frozenset = frozenset()  # of (sub term, super term)
    equivalences: frozenset = frozenset()  # of (Sentence, Sentence), canonical order
    stats: frozenset = frozenset()  # of StatStatement
    extensions: frozenset = frozenset()  # of (class, frozenset of terms)

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))
        object.__setattr__(
            self,
            "equivalences",
            frozenset(_canonical_equiv(Sentence(*s), Sentence(*t)) for s, t in self.equivalences),
        )
        object.__setattr__(
            self, "extensions", frozenset((c, frozenset(ms)) for c, ms in self.extensions)
        )
        self._validate()

    def _validate(self) -> None:
        problems = []
        pair_names = {p.name for p in self.pairs}
        if pair_names & self.terms:
            problems.append(f"ids declared both as term and pair: {sorted(pair_names & self.terms)}")
        if self.classes & self.all_terms:
            problems.append(f"ids declared both as class and term: {sorted(self.classes & self.all_terms)}")
        terms = self.all_terms

        def need_class(c, where):
            if c not in self.classes:
                problems.append(f"undeclared class {c!r} in {where}")

        def need_term(t, where):
            if t not in terms:
                problems.append(f"undeclared term {t!r} in {where}")

        for p in self.pairs:
            need_term(p.first, f"pair {p.name}")
            need_term(p.second, f"pair {p.name}")
        for t, c in self.memberships:
            need_term(t, "member")
            need_class(c, "member")
        for a, b in self.subsets:
            need_class(a, "subset")
            need_class(b, "subset")
        for prod in self.products:
            for c in prod:
                need_class(c, "product")
        for t, c in self.samples:
            need_term(t, "sample")
            need_class(c, "sample")
        for a, b in self.subsamples:
            need_term(a, "subsample")
            need_term(b, "subsample")
        for s, t in self.equivalences:
            for sent in (s, t):
                need_term(sent.subject, "equiv")
                need_class(sent.cls, "equiv")
        for st in self.stats:
            need_class(st.target, "stat")
            need_class(st.reference, "stat")
        for c, members in self.extensions:
            need_class(c, "extensional")
            for m in members:
                need_term(m, f"extensional {c}")
        if problems:
            raise ValueError("; ".join(problems))

        seen: dict[tuple[str, str], Interval] = {}
        for st in sorted(self.stats):
            key = (st.target, st.reference)
            if key in seen and seen[key] != st.interval:
                raise InconsistencyError(
                    f"conflicting statistics for %({st.target}, {st.reference}): "
                    f"{seen[key]} and {st.interval}"
                )
            seen[key] = st.interval
        products = [p.product for p in self.products]
        dupes = sorted({p for p in products if products.count(p) > 1})
        if dupes:
            raise InconsistencyError(f"class declared as more than one product: {dupes}")
        ext = [c for c, _ in self.extensions]
        if len(ext) != len(set(ext)):
            raise ValueError("a class carries more than one extension")

    @cached_property
    def all_terms(self) -> frozenset:
        return self.terms | {p.name for p in self.pairs}

    @cached_property
    def pair_index(self) -> dict[str, PairTerm]:
        return {p.name: p for p in self.pairs}

    @cached_property
    def stat_index(self) -> dict[tuple[str, str], Interval]:
        return {(s.target, s.reference): s.interval for s in self.stats}

    @cached_property
    def extension_index(self) -> dict[str, frozenset]:
        return dict(self.extensions)

    @cached_property
    def sample_terms(self) -> frozenset:
        return frozenset(t for t, _ in self.samples)

    def stat(self, target: str, reference: str) -> Optional[Interval]:
        return self.stat_index.get((target, reference))

    def is_empty(self) -> bool:
        return not any(getattr(self, name) for name in self.__dataclass_fields__)
