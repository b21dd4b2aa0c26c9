"""Exit criteria.  Each test records one PASS/FAIL line, printed after the run."""

import io
import json
import time
from fractions import Fraction as F

import pytest

from refclass import corpus
from refclass.cli import main
from refclass.closure import compute_closures
from refclass.engine import evaluate
from refclass.model import Interval, Principle, Sentence
from refclass.oracle import NaiveOracle, check_extensional, random_kb
from refclass.parser import parse_kb, parse_query, serialize_kb

RESULTS: list[str] = []


def record(number, title, ok, elapsed, limit, detail=""):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    RESULTS.append(
        f"[{status}] criterion {number:>2}: {title} ({elapsed:.3f}s, limit {limit:g}s){detail}"
    )
    assert ok, f"criterion {number} failed{detail}"
    assert elapsed < limit, f"criterion {number} took {elapsed:.3f}s (limit {limit}s)"


def verdict_for(name, query=None):
    entry = corpus.get(name)
    kb = parse_kb(entry.text())
    return evaluate(kb, parse_query(query or entry.query, kb))


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue()


def test_criterion_01_compound_experiment():
    t = time.perf_counter()
    v = verdict_for("urn_room", "c1 in BlackDraw")
    code, out = cli("query", str(corpus.get("urn_room").path()), "c1 in BlackDraw", "--decimal")
    elapsed = time.perf_counter() - t
    arithmetic = F(9, 10) * F(4, 5) + F(1, 10) * F(14, 55)
    decimal = out.split("(")[1].rstrip(")\n").lstrip("≈")
    ok = (
        v.interval == Interval(F(41, 55), F(41, 55))
        and arithmetic == F(41, 55)
        and code == 0
        and decimal.startswith("0.74545")
    )
    record(1, "urn/room compound choice is exactly 41/55", ok, elapsed, 1.0, f" -> {out.strip()}")


def test_criterion_02_specificity():
    t = time.perf_counter()
    v = verdict_for("urn_a")
    elapsed = time.perf_counter() - t
    subset_edges = [
        e for e in v.edges
        if e.principle is Principle.SUBSET
        and e.victim.reference == "Room"
        and e.victim.interval == Interval.point(F(1, 2))
    ]
    ok = v.interval == Interval.point(F(4, 5)) and len(subset_edges) == 1
    record(2, "urn A beats the room by the subset rule", ok, elapsed, 1.0, f" -> {v.interval}")


def test_criterion_03_nixon():
    t = time.perf_counter()
    v = verdict_for("nixon")
    elapsed = time.perf_counter() - t
    ok = v.interval == Interval(F(1, 5), F(9, 10)) and v.edges == ()
    record(3, "Nixon diamond covers both candidates", ok, elapsed, 1.0, f" -> {v.interval}")


def test_criterion_04_tweety_chain():
    t = time.perf_counter()
    runs = []
    for name in ("tweety_bird", "tweety_penguin", "tweety_flying_penguin"):
        v = verdict_for(name)
        most_specific = [c for c in v.candidates if not any(e.victim == c for e in v.edges)]
        deepest = max(v.candidates, key=lambda c: sum(e.attacker == c for e in v.edges))
        runs.append((v.interval, most_specific, deepest))
    elapsed = time.perf_counter() - t
    intervals = [r[0] for r in runs]
    ok = (
        intervals == [Interval.point(F(9, 10)), Interval.point(F(1, 20)), Interval.point(1)]
        and all(len(r[1]) == 1 and r[1][0].interval == r[0] for r in runs)
        and intervals[0] != intervals[1] != intervals[2]
    )
    record(4, "Tweety verdict follows the most specific class", ok, elapsed, 1.0,
           f" -> {', '.join(map(str, intervals))}")


def test_criterion_05_equivalence_invariance():
    spellings = ["toss in Heads", "qtoss in Heads", "toss in NotTails", "choice in NotChocolate"]
    t = time.perf_counter()
    verdicts = {verdict_for("coin", q).interval for q in spellings}
    elapsed = time.perf_counter() - t
    ok = verdicts == {Interval.point(F(1, 2))}
    record(5, "four coin spellings share one verdict", ok, elapsed, 1.0, f" -> {', '.join(map(str, verdicts))}")


def test_criterion_06_supersample():
    t = time.perf_counter()
    v = verdict_for("supersample")
    entry = corpus.get("supersample")
    kb = parse_kb(entry.text())
    naive = NaiveOracle(kb).evaluate(parse_query(entry.query, kb))
    elapsed = time.perf_counter() - t
    bigger = [c for c in v.candidates if c.subject == "s2"]
    edges = [e for e in v.edges if e.principle is Principle.SUPERSAMPLE]
    ok = (
        len(bigger) == 1
        and v.interval == bigger[0].interval == Interval(F(3, 5), F(7, 10))
        and len(edges) == 1 and edges[0].attacker == bigger[0]
        and naive.interval == v.interval
    )
    record(6, "larger sample's interval is the verdict", ok, elapsed, 1.0, f" -> {v.interval}")


def test_criterion_07_strength():
    t = time.perf_counter()
    nested = verdict_for("strength_nested")
    equal = verdict_for("strength_equal")
    elapsed = time.perf_counter() - t
    ok = (
        nested.interval == Interval(F(9, 20), F(11, 20))
        and [e.principle for e in nested.edges] == [Principle.STRENGTH]
        and equal.interval == Interval(F(2, 5), F(3, 5))
        and equal.edges == ()
    )
    record(7, "narrower interval wins; equal intervals coexist", ok, elapsed, 1.0,
           f" -> {nested.interval}; {equal.interval}")


def test_criterion_08_oracle_equivalence():
    t = time.perf_counter()
    queries = mismatches = 0
    for seed in range(1000):
        kb = random_kb(seed, max_classes=10, max_terms=10, max_stats=6)
        oracle = NaiveOracle(kb)
        closures = compute_closures(kb)
        for sentence in oracle.queryable():
            queries += 1
            mine, naive = evaluate(kb, sentence, closures), oracle.evaluate(sentence)
            if mine.interval != naive.interval or mine.survivor_set != naive.survivor_set:
                mismatches += 1
    elapsed = time.perf_counter() - t
    record(8, "engine equals brute force on 1000 random KBs", mismatches == 0, elapsed, 60.0,
           f" -> {queries} queries, {mismatches} mismatches")


def test_criterion_09_extensional_consistency():
    t = time.perf_counter()
    checked = []
    for entry in corpus.ENTRIES:
        kb = parse_kb(entry.text())
        if not kb.extensions:
            continue
        code, _ = cli("check", str(entry.path()))
        checked.append((entry.name, code, check_extensional(kb).checked))
    kb = parse_kb(corpus.get("urn_room").text())
    ext = kb.extension_index
    tenth = F(len(ext["U10"] & ext["Black"]), len(ext["U10"]))
    elapsed = time.perf_counter() - t
    ok = bool(checked) and all(code == 0 for _, code, _ in checked) and tenth == F(14, 55)
    record(9, "check passes on every enumerated corpus", ok, elapsed, 1.0,
           f" -> {', '.join(n for n, *_ in checked)}; tenth urn {tenth}")


def test_criterion_10_round_trip():
    t = time.perf_counter()
    failures = []
    for entry in corpus.ENTRIES:
        kb = parse_kb(entry.text())
        if parse_kb(serialize_kb(kb)) != kb:
            failures.append(entry.name)
    for seed in range(1000):
        kb = random_kb(seed)
        if parse_kb(serialize_kb(kb)) != kb:
            failures.append(seed)
    elapsed = time.perf_counter() - t
    record(10, "parse/serialize identity on corpora and 1000 generated KBs", not failures,
           elapsed, 10.0, f" -> failures: {failures[:5]}" if failures else "")
