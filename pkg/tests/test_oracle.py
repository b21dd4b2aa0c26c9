import dataclasses
from fractions import Fraction as F

import pytest

from refclass import corpus
from refclass.closure import compute_closures
from refclass.engine import evaluate
from refclass.model import Interval, KnowledgeBase, Sentence, StatStatement
from refclass.oracle import (
    LCG,
    OracleLimitError,
    check_extensional,
    naive_evaluate,
    random_kb,
)
from refclass.parser import parse_kb, parse_query, serialize_kb


def test_room_frequency(load):
    kb, _ = load("urn_room")
    report = check_extensional(kb)
    assert report.ok
    # every urn stat, the room stat, and every urn-in-room subset fact is checked
    assert report.checked == 11 + 10


def test_urn_a_frequency(load):
    kb, _ = load("urn_a")
    assert check_extensional(kb).ok


def test_tenth_urn_is_14_of_55(load):
    kb, _ = load("urn_room")
    ext = kb.extension_index
    assert len(ext["U10"]) == 55
    assert len(ext["U10"] & ext["Black"]) == 14
    assert kb.stat("Black", "U10") == Interval.point(F(14, 55))


def test_corrupted_stat_reported(load):
    kb, _ = load("urn_a")
    bad = dataclasses.replace(
        kb,
        stats={s for s in kb.stats if s.reference != "UrnA"}
        | {StatStatement("Black", "UrnA", Interval.point(F(1, 2)))},
    )
    (violation,) = check_extensional(bad).violations
    assert violation.fact == "stat Black UrnA = 1/2"
    assert violation.actual == "4/5"


def test_empty_reference_noted():
    kb = parse_kb("class A R\nextensional A { }\nextensional R { }\nstat A R = 1/2")
    (violation,) = check_extensional(kb).violations
    assert "empty" in violation.actual


def test_subset_extension_violation():
    kb = parse_kb("class A B\nterm a b\nsubset A B\nextensional A { a b }\nextensional B { b }")
    (violation,) = check_extensional(kb).violations
    assert violation.fact == "subset A B"


def test_unenumerated_facts_skipped(load):
    kb, _ = load("nixon")
    report = check_extensional(kb)
    assert report.ok and report.checked == 0 and report.skipped == 2


@pytest.mark.parametrize("entry", corpus.ENTRIES, ids=lambda e: e.name)
def test_naive_matches_engine_on_corpus(entry):
    kb = parse_kb(entry.text())
    q = parse_query(entry.query, kb)
    mine, naive = evaluate(kb, q), naive_evaluate(kb, q)
    assert naive.interval == mine.interval == entry.expected
    assert naive.survivor_set == mine.survivor_set
    assert naive.labels == mine.labels


def test_naive_nixon(load):
    kb, _ = load("nixon")
    v = naive_evaluate(kb, Sentence("#18", "Pacifist"))
    assert v.interval == Interval(F(1, 5), F(9, 10))
    assert len(v.candidates) == 2 and v.edges == ()


def test_naive_single_candidate(load):
    kb, _ = load("tweety_bird")
    assert naive_evaluate(kb, Sentence("tweety", "Flier")).interval == Interval.point(F(9, 10))


def test_guard():
    many = {f"C{i}" for i in range(65)}
    with pytest.raises(OracleLimitError):
        naive_evaluate(KnowledgeBase(classes=many), Sentence("a", "C0"))
    with pytest.raises(OracleLimitError):
        random_kb(0, max_classes=65)


def test_lcg_reference_values():
    rng = LCG(0)
    assert [rng.next() for _ in range(3)] == [1013904223, 1196435762, 3519870697]


def test_random_kb_deterministic():
    assert random_kb(0) == random_kb(0)
    assert serialize_kb(random_kb(5)) == serialize_kb(random_kb(5))
    assert any(random_kb(s) != random_kb(0) for s in range(1, 5))


def test_random_kb_empty_bounds():
    assert random_kb(3, max_classes=0) == KnowledgeBase()


@pytest.mark.parametrize("seed", range(0, 1000, 37))
def test_random_kb_bounds_and_round_trip(seed):
    kb = random_kb(seed)
    assert len(kb.classes) <= 10 and len(kb.all_terms) <= 10 and len(kb.stats) <= 6
    compute_closures(kb)  # acyclic by construction
    assert parse_kb(serialize_kb(kb)) == kb
