"""Reader and writer for the line-oriented ``.rkb`` knowledge-base format.

One directive per line::

    class Bird Penguin            # one or more class ids
    term tweety                   # one or more term ids
    pair c1 theurn b18            # c1 names the ordered pair <theurn, b18>
    member tweety Penguin
    subset Penguin Bird           # Penguin is a subset of Bird
    product UxB = Urns x Room
    sample s1 Population
    subsample s1 s2               # sample s1 is contained in sample s2
    equiv "c1 in BlackDraw" "b18 in Black"
    stat Flier Bird = 9/10        # target first, then reference class
    stat Pacifist Quaker in [0.9, 0.9]
    extensional UrnA { b1 b2 b3 b4 b5 }

A ``#`` followed by whitespace (or ending the line), or opening a line,
starts a comment; elsewhere ``#18`` is an ordinary id.  Declarations may
appear in any order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .closure import subset_closure
from .model import (
    InconsistencyError,
    Interval,
    KnowledgeBase,
    PairTerm,
    Product,
    RefclassError,
    Sentence,
    StatStatement,
    format_fraction,
)

ID_RE = re.compile(r"[A-Za-z0-9_#-]+")
_RATIONAL_RE = re.compile(r"\d+/\d+|\d+(?:\.\d*)?|\.\d+")
_TOKEN_RE = re.compile(r'"[^"]*"?|[\[\]{},=]|[^\s\[\]{},="]+')
_SENTENCE_RE = re.compile(r"\s*([A-Za-z0-9_#-]+)\s+in\s+([A-Za-z0-9_#-]+)\s*")

DIRECTIVES = (
    "class", "term", "pair", "member", "subset", "product",
    "sample", "subsample", "equiv", "stat", "extensional",
)


class ParseError(RefclassError, ValueError):
    """A rejected KB or query; ``errors`` lists every problem found."""

    def __init__(self, line: int, column: int, message: str, token: str = "", errors=None):
        self.line = line
        self.column = column
        self.message = message
        self.token = token
        self.errors: list[ParseError] = list(errors) if errors else [self]
        super().__init__(str(self))

    def __str__(self) -> str:
        where = f"line {self.line}, column {self.column}"
        near = f" near {self.token!r}" if self.token else ""
        return f"{where}: {self.message}{near}"


class KBInconsistencyError(ParseError, InconsistencyError):
    """Well-formed text describing a contradictory KB."""


class QueryError(RefclassError, ValueError):
    pass


@dataclass
class _Token:
    text: str
    column: int


@dataclass
class _Builder:
    classes: dict = field(default_factory=dict)  # id -> line
    terms: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)  # id -> (PairTerm, line)
    memberships: list = field(default_factory=list)  # (fact, line, token)
    subsets: list = field(default_factory=list)
    products: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    subsamples: list = field(default_factory=list)
    equivalences: list = field(default_factory=list)
    stats: list = field(default_factory=list)
    extensions: dict = field(default_factory=dict)  # class -> (set of members, line, token)


def _strip_comment(line: str) -> str:
    if line.lstrip().startswith("#"):
        return ""
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote and line[i + 1 : i + 2] in ("", " ", "\t"):
            return line[:i]
    return line


def _tokenize(line: str) -> list[_Token]:
    return [_Token(m.group(0), m.start() + 1) for m in _TOKEN_RE.finditer(line)]


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL_RE.fullmatch(text):
        raise ValueError(f"malformed rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def format_stat(stat: StatStatement) -> str:
    if stat.interval.is_point:
        return f"stat {stat.target} {stat.reference} = {format_fraction(stat.interval.lo)}"
    return f"stat {stat.target} {stat.reference} in {stat.interval.bracketed()}"


def _parse_sentence(text: str) -> Optional[Sentence]:
    m = _SENTENCE_RE.fullmatch(text)
    return Sentence(m.group(1), m.group(2)) if m else None


class _LineParser:
    def __init__(self, lineno: int, tokens: list[_Token], line: str):
        self.lineno = lineno
        self.tokens = tokens
        self.pos = 0
        self.line = line

    def error(self, message: str, token: Optional[_Token] = None) -> ParseError:
        if token is None:
            token = self.tokens[self.pos] if self.pos < len(self.tokens) else None
        if token is None:
            return ParseError(self.lineno, len(self.line.rstrip()) + 1, message)
        return ParseError(self.lineno, token.column, message, token.text)

    def next(self, what: str) -> _Token:
        if self.pos >= len(self.tokens):
            raise self.error(f"expected {what}, found end of line")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def ident(self, what: str = "identifier") -> _Token:
        tok = self.next(what)
        if not ID_RE.fullmatch(tok.text):
            raise self.error(f"expected {what}", tok)
        return tok

    def literal(self, text: str) -> _Token:
        tok = self.next(repr(text))
        if tok.text != text:
            raise self.error(f"expected {text!r}", tok)
        return tok

    def rational(self) -> Fraction:
        tok = self.next("rational")
        try:
            return parse_rational(tok.text)
        except ValueError:
            raise self.error("malformed rational", tok) from None

    def end(self) -> None:
        if self.pos < len(self.tokens):
            raise self.error("unexpected trailing input")

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)


def _parse_line(p: _LineParser, b: _Builder) -> None:
    head = p.next("directive")
    name = head.text
    ln = p.lineno
    if name in ("class", "term"):
        ids = [p.ident(f"{name} id")]
        while not p.at_end():
            ids.append(p.ident(f"{name} id"))
        target = b.classes if name == "class" else b.terms
        for tok in ids:
            target.setdefault(tok.text, (ln, tok))
    elif name == "pair":
        pid, first, second = p.ident("pair id"), p.ident("first term"), p.ident("second term")
        p.end()
        pair = PairTerm(pid.text, first.text, second.text)
        prev = b.pairs.get(pid.text)
        if prev and prev[0] != pair:
            raise p.error(f"pair {pid.text} redeclared with different components", pid)
        b.pairs[pid.text] = (pair, ln, pid, (first, second))
    elif name in ("member", "subset", "sample", "subsample"):
        a, c = p.ident(), p.ident()
        p.end()
        facts = {"member": b.memberships, "subset": b.subsets,
                 "sample": b.samples, "subsample": b.subsamples}[name]
        facts.append(((a.text, c.text), ln, (a, c)))
    elif name == "product":
        prod = p.ident("product class")
        p.literal("=")
        left = p.ident("left factor")
        x = p.ident("'x'")
        if x.text != "x":
            raise p.error("expected 'x' between product factors", x)
        right = p.ident("right factor")
        p.end()
        b.products.append((Product(prod.text, left.text, right.text), ln, (prod, left, right)))
    elif name == "equiv":
        sents = []
        for _ in range(2):
            tok = p.next("quoted sentence")
            if len(tok.text) < 2 or not (tok.text.startswith('"') and tok.text.endswith('"')):
                raise p.error('expected a quoted sentence like "t in C"', tok)
            sent = _parse_sentence(tok.text[1:-1])
            if sent is None:
                raise p.error("equiv sentences must be atomic: \"<term> in <class>\"", tok)
            sents.append((sent, tok))
        p.end()
        b.equivalences.append(((sents[0][0], sents[1][0]), ln, (sents[0][1], sents[1][1])))
    elif name == "stat":
        target, ref = p.ident("target class"), p.ident("reference class")
        op = p.next("'=' or 'in'")
        if op.text == "=":
            lo = hi = p.rational()
        elif op.text == "in":
            p.literal("[")
            lo = p.rational()
            p.literal(",")
            hi = p.rational()
            p.literal("]")
        else:
            raise p.error("expected '=' or 'in'", op)
        p.end()
        try:
            interval = Interval(lo, hi)
        except ValueError as exc:
            raise p.error(f"malformed statistic: {exc}", op) from None
        b.stats.append((StatStatement(target.text, ref.text, interval), ln, (target, ref)))
    elif name == "extensional":
        cls = p.ident("class")
        p.literal("{")
        members = []
        while True:
            tok = p.next("member or '}'")
            if tok.text == "}":
                break
            if not ID_RE.fullmatch(tok.text):
                raise p.error("expected member id", tok)
            members.append(tok)
        p.end()
        entry = b.extensions.setdefault(cls.text, (set(), ln, cls, []))
        entry[0].update(t.text for t in members)
        entry[3].extend(members)
    else:
        raise p.error(f"unknown directive {name!r}", head)


def _resolve(b: _Builder) -> tuple[KnowledgeBase, list[ParseError]]:
    errors: list[ParseError] = []
    classes = set(b.classes)
    pair_ids = set(b.pairs)
    terms = set(b.terms)
    for tid in sorted(terms & pair_ids):
        ln, tok = b.terms[tid]
        errors.append(ParseError(ln, tok.column, "id declared both as term and pair", tid))
    for cid in sorted(classes & (terms | pair_ids)):
        ln, tok = b.classes[cid]
        errors.append(ParseError(ln, tok.column, "id declared both as class and term", cid))
    all_terms = terms | pair_ids

    def check(tok: _Token, ln: int, kind: str) -> None:
        pool = classes if kind == "class" else all_terms
        if tok.text not in pool:
            errors.append(ParseError(ln, tok.column, f"undeclared {kind}", tok.text))

    for pair, ln, _, (first, second) in b.pairs.values():
        check(first, ln, "term")
        check(second, ln, "term")
    for kinds, facts in (
        (("term", "class"), b.memberships),
        (("class", "class"), b.subsets),
        (("term", "class"), b.samples),
        (("term", "term"), b.subsamples),
    ):
        for _, ln, toks in facts:
            for kind, tok in zip(kinds, toks):
                check(tok, ln, kind)
    product_lines: dict[str, tuple[Product, int]] = {}
    for prod, ln, toks in b.products:
        for tok in toks:
            check(tok, ln, "class")
        prev = product_lines.setdefault(prod.product, (prod, ln))
        if prev[0] != prod:
            errors.append(
                KBInconsistencyError(
                    ln, toks[0].column,
                    f"class already declared as a different product on line {prev[1]}",
                    prod.product,
                )
            )
    for (s, t), ln, toks in b.equivalences:
        for sent, tok in zip((s, t), toks):
            if sent.subject not in all_terms:
                errors.append(ParseError(ln, tok.column, "undeclared term in sentence", sent.subject))
            if sent.cls not in classes:
                errors.append(ParseError(ln, tok.column, "undeclared class in sentence", sent.cls))
    seen_stats: dict[tuple[str, str], tuple[Interval, int]] = {}
    for stat, ln, toks in b.stats:
        check(toks[0], ln, "class")
        check(toks[1], ln, "class")
        key = (stat.target, stat.reference)
        if key in seen_stats and seen_stats[key][0] != stat.interval:
            errors.append(
                KBInconsistencyError(
                    ln, toks[0].column,
                    f"conflicting statistic for ({stat.target}, {stat.reference}); "
                    f"line {seen_stats[key][1]} gives {seen_stats[key][0]}",
                    str(stat.interval),
                )
            )
        seen_stats.setdefault(key, (stat.interval, ln))
    for cid, (members, ln, tok, member_toks) in b.extensions.items():
        check(tok, ln, "class")
        for mt in member_toks:
            check(mt, ln, "term")
    if errors:
        return None, errors

    try:
        kb = _build(b, classes, terms)
    except ValueError as exc:
        return None, [ParseError(1, 1, str(exc))]
    try:
        subset_closure(kb)
    except InconsistencyError as exc:
        ln = min((ln for _, ln, _ in b.subsets), default=1)
        return None, [KBInconsistencyError(ln, 1, str(exc))]
    return kb, []


def _build(b: _Builder, classes: set, terms: set) -> KnowledgeBase:
    return KnowledgeBase(
        classes=frozenset(classes),
        terms=frozenset(terms),
        pairs=frozenset(p for p, *_ in b.pairs.values()),
        memberships=frozenset(f for f, *_ in b.memberships),
        subsets=frozenset(f for f, *_ in b.subsets),
        products=frozenset(f for f, *_ in b.products),
        samples=frozenset(f for f, *_ in b.samples),
        subsamples=frozenset(f for f, *_ in b.subsamples),
        equivalences=frozenset(f for f, *_ in b.equivalences),
        stats=frozenset(f for f, *_ in b.stats),
        extensions=frozenset((c, frozenset(v[0])) for c, v in b.extensions.items()),
    )


def parse_kb(text: str) -> KnowledgeBase:
    """Parse ``.rkb`` text.

    Raises :class:`ParseError` (or its subclass :class:`KBInconsistencyError`
    when every problem is a contradiction rather than a syntax error); the
    exception's ``errors`` attribute holds every diagnostic found.
    """
    b = _Builder()
    errors: list[ParseError] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        tokens = _tokenize(line)
        if not tokens:
            continue
        try:
            _parse_line(_LineParser(lineno, tokens, line), b)
        except ParseError as exc:
            errors.append(exc)
    if not errors:
        kb, errors = _resolve(b)
        if not errors:
            return kb
    first = errors[0]
    cls = KBInconsistencyError if all(isinstance(e, KBInconsistencyError) for e in errors) else ParseError
    raise cls(first.line, first.column, first.message, first.token, errors=errors)


def parse_query(text: str, kb: KnowledgeBase) -> Sentence:
    sentence = _parse_sentence(text)
    if sentence is None:
        raise QueryError(f"query must be an atomic sentence '<term> in <class>', got {text!r}")
    if sentence.subject not in kb.all_terms:
        raise QueryError(f"undeclared term {sentence.subject!r}")
    if sentence.cls not in kb.classes:
        raise QueryError(f"undeclared class {sentence.cls!r}")
    return sentence


def serialize_kb(kb: KnowledgeBase) -> str:
    """Canonical text for ``kb``; sections in directive order, facts sorted."""
    lines: list[str] = []
    lines += [f"class {c}" for c in sorted(kb.classes)]
    lines += [f"term {t}" for t in sorted(kb.terms)]
    lines += [f"pair {p.name} {p.first} {p.second}" for p in sorted(kb.pairs)]
    lines += [f"member {t} {c}" for t, c in sorted(kb.memberships)]
    lines += [f"subset {a} {b}" for a, b in sorted(kb.subsets)]
    lines += [f"product {p.product} = {p.left} x {p.right}" for p in sorted(kb.products)]
    lines += [f"sample {t} {c}" for t, c in sorted(kb.samples)]
    lines += [f"subsample {a} {b}" for a, b in sorted(kb.subsamples)]
    lines += [f'equiv "{s}" "{t}"' for s, t in sorted(kb.equivalences)]
    lines += [format_stat(s) for s in sorted(kb.stats)]
    for c, members in sorted(kb.extensions, key=lambda e: e[0]):
        lines.append(f"extensional {c} {{ {' '.join(sorted(members))} }}".replace("{  }", "{ }"))
    return "".join(line + "\n" for line in lines)
