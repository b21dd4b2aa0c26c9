from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from refclass import corpus
from refclass.model import Interval, KnowledgeBase, Sentence, StatStatement
from refclass.oracle import random_kb
from refclass.parser import (
    KBInconsistencyError,
    ParseError,
    QueryError,
    parse_kb,
    parse_query,
    serialize_kb,
)

PENGUIN = "class Bird\nclass Penguin\nsubset Penguin Bird\nterm tweety\nmember tweety Penguin"


def test_penguin_kb():
    kb = parse_kb(PENGUIN)
    assert kb.classes == {"Bird", "Penguin"}
    assert kb.subsets == {("Penguin", "Bird")}
    assert kb.memberships == {("tweety", "Penguin")}


def test_point_stat():
    kb = parse_kb("class Black Room\nstat Black Room = 1/2")
    assert kb.stats == {StatStatement("Black", "Room", Interval.point(F(1, 2)))}


def test_decimal_interval_stat():
    kb = parse_kb("class Pacifist Quaker\nstat Pacifist Quaker in [0.9, 0.9]")
    assert kb.stat("Pacifist", "Quaker") == Interval(F(9, 10), F(9, 10))
    assert "stat Pacifist Quaker = 9/10" in serialize_kb(kb)


def test_declarations_in_any_order():
    kb = parse_kb("member tweety Penguin\nsubset Penguin Bird\nterm tweety\nclass Penguin Bird")
    assert kb == parse_kb(PENGUIN)


def test_all_directives():
    text = """
    class A B P R S Pop
    term a b s1 s2
    pair ab a b
    member ab R
    subset R P
    product P = A x B
    sample s1 Pop
    sample s2 Pop
    subsample s1 s2
    equiv "ab in S" "a in A"   # trailing comment
    stat S R in [1/4, 1/2]
    extensional A { a }
    extensional A { b }
    """
    kb = parse_kb(text)
    assert kb.pair_index["ab"].first == "a"
    assert kb.products == {("P", "A", "B")}
    assert kb.subsamples == {("s1", "s2")}
    assert kb.equivalences == {(Sentence("a", "A"), Sentence("ab", "S"))}
    assert kb.extension_index["A"] == {"a", "b"}


def test_hash_ids_and_comments():
    kb = parse_kb("# a comment line\n#another\nclass Quaker\nterm #18  # trailing\nmember #18 Quaker\n")
    assert kb.terms == {"#18"}


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("class A\nfrobnicate A", 2, "unknown directive"),
        ("class A\nmember ghost A", 2, "undeclared term"),
        ("class A R\nstat A R = 1/2\nstat A R = 1/3", 3, "conflicting statistic"),
        ("class A R\nstat A R = 1/0", 2, "malformed"),
        ("class A R\nstat A R = 0.5.1", 2, "malformed rational"),
        ("class A R\nstat A R = 3/2", 2, "leaves [0, 1]"),
        ("class A R\nstat A R in [3/5, 2/5]", 2, "exceeds"),
        ("class A B\nsubset A B\nsubset B A", 2, "subset cycle"),
        ('class A\nterm a\nequiv "a in A" "not a sentence"', 3, "atomic"),
        ("class A B C\nproduct A = B y C", 2, "'x'"),
    ],
)
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_kb(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_inconsistency_is_distinguished_from_syntax():
    with pytest.raises(KBInconsistencyError):
        parse_kb("class A R\nstat A R = 1/2\nstat A R = 1/3")
    with pytest.raises(KBInconsistencyError):
        parse_kb("class A B\nsubset A B\nsubset B A")
    with pytest.raises(ParseError) as info:
        parse_kb("class A\nmember x A")
    assert not isinstance(info.value, KBInconsistencyError)


def test_every_error_reported():
    with pytest.raises(ParseError) as info:
        parse_kb("bogus\nclass A\nmember x A\nalso bogus")
    assert [e.line for e in info.value.errors] == [1, 4]


def test_duplicate_identical_stat_is_fine():
    kb = parse_kb("class A R\nstat A R = 1/2\nstat A R = 0.5")
    assert len(kb.stats) == 1


class TestQuery:
    kb = parse_kb(PENGUIN + "\nclass Flier\nclass Black\nterm b18")

    def test_simple(self):
        assert parse_query("tweety in Flier", self.kb) == Sentence("tweety", "Flier")

    def test_ball(self):
        assert parse_query("b18 in Black", self.kb) == Sentence("b18", "Black")

    @pytest.mark.parametrize("text", ["ghost in Flier", "tweety in Nothing", "tweety Flier", "a in B in C"])
    def test_rejected(self, text):
        with pytest.raises(QueryError):
            parse_query(text, self.kb)


def test_serialize_empty():
    assert serialize_kb(KnowledgeBase()) == ""
    assert parse_kb("") == KnowledgeBase()


def test_serialize_interval_rational_form():
    kb = parse_kb("class A R\nstat A R in [0.4, 0.6]")
    assert serialize_kb(kb) == "class A\nclass R\nstat A R in [2/5, 3/5]\n"


@pytest.mark.parametrize("entry", corpus.ENTRIES, ids=lambda e: e.name)
def test_corpus_round_trip(entry):
    kb = parse_kb(entry.text())
    again = parse_kb(serialize_kb(kb))
    assert again == kb
    assert serialize_kb(again) == serialize_kb(kb)


@pytest.mark.parametrize("seed", range(0, 200, 7))
def test_generated_round_trip(seed):
    kb = random_kb(seed)
    assert parse_kb(serialize_kb(kb)) == kb


_alphabet = st.sampled_from(list('classtermpairmembersubsetstatequiv "#[]{}=,/.0123456789 xABin\n\t'))


@settings(max_examples=300)
@given(st.text(_alphabet, max_size=120) | st.text(max_size=80))
def test_parsing_is_total(text):
    try:
        parse_kb(text)
    except ParseError as exc:
        assert exc.errors and all(e.line >= 1 for e in exc.errors)
