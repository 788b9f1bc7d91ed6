import hypothesis
import hypothesis.strategies as s
import pytest

from aimp.errors import FormatError, UnsupportedSentence
from aimp.parser import (
    TaggerLexicon, detokenize, singularize, tag_and_parse, tokenize,
)


@pytest.mark.parametrize("text, expected", [
    ("Pooja has 3 apples.", ["Pooja", "has", "3", "apples", "."]),
    ("Pooja's Mom", ["Pooja", "'s", "Mom"]),
    ("", []),
    ("How many apples does she have now?", ["How", "many", "apples", "does", "she", "have", "now", "?"]),
    ("He spent 2.50 dollars, then left.", ["He", "spent", "2.50", "dollars", ",", "then", "left", "."]),
])
def test_tokenize(text, expected):
    assert tokenize(text) == expected


s_words = s.from_regex(r"[A-Za-z0-9]{1,8}('s)?[.?!,]{0,2}", fullmatch=True)


@hypothesis.given(s.lists(s_words, max_size=12))
def test_tokenize_is_idempotent(words):
    tokens = tokenize(" ".join(words))
    assert tokenize(" ".join(tokens)) == tokens


def test_detokenize_reattaches_punctuation():
    assert detokenize(["Pooja", "'s", "Mom", "has", "3", "apples", "."]) == "Pooja's Mom has 3 apples."


@pytest.mark.parametrize("word, singular", [
    ("apples", "apple"), ("pencils", "pencil"), ("candies", "candy"),
    ("boxes", "box"), ("children", "child"), ("glass", "glass"),
])
def test_singularize(word, singular):
    assert singularize(word) == singular


def test_parse_observation():
    graph = tag_and_parse(["Pooja", "has", "3", "apples"]).graph
    assert graph.root == 2
    assert graph.token(2).lemma == "have"
    assert (graph.head_of(1), graph.relation_of(1)) == (2, "nsubj")
    assert (graph.head_of(4), graph.relation_of(4)) == (2, "dobj")
    assert (graph.head_of(3), graph.relation_of(3)) == (4, "nummod")


def test_parse_indirect_object():
    graph = tag_and_parse(["Pooja", "gave", "John", "2", "apples"]).graph
    assert (graph.head_of(3), graph.relation_of(3)) == (2, "iobj")
    assert (graph.head_of(5), graph.relation_of(5)) == (2, "dobj")


def test_parse_prepositional_source(parser):
    graph = parser.parse_text("Mary took 2 cookies from Tom.").graph
    assert (graph.head_of(6), graph.relation_of(6)) == (2, "nmod:from")
    assert (graph.head_of(5), graph.relation_of(5)) == (6, "case")


def test_parse_possessive_subject(parser):
    graph = parser.parse_text("Pooja's Mom has 7 bananas.").graph
    assert graph.relation_of(1) == "nmod:poss"
    assert graph.head_of(1) == 3
    assert graph.relation_of(2) == "case"
    assert graph.relation_of(3) == "nsubj"


def test_parse_question(parser):
    graph = parser.parse_text("How many apples does Pooja have now?").graph
    assert graph.token(graph.root).text == "have"
    assert graph.relation_of(3) == "dobj"
    assert graph.relation_of(4) == "aux"
    assert graph.relation_of(5) == "nsubj"
    assert graph.relation_of(7) == "advmod"
    assert graph.relation_of(8) == "punct"


def test_parse_coordinated_objects(parser):
    graph = parser.parse_text("Pooja has two apples and three oranges.").graph
    assert (graph.head_of(7), graph.relation_of(7)) == (4, "conj")
    assert (graph.head_of(5), graph.relation_of(5)) == (7, "cc")


def test_parse_coordinated_clauses(parser):
    graph = parser.parse_text("Pooja has two apples and John has one apple.").graph
    assert graph.root == 2
    assert (graph.head_of(7), graph.relation_of(7)) == (2, "conj")
    assert (graph.head_of(6), graph.relation_of(6)) == (7, "nsubj")


def test_pronoun_before_noun_is_possessive(parser):
    tokens = parser.tag(["Mary", "gave", "her", "apples", "to", "Tom"])
    assert tokens[2].pos == "PRP$"
    tokens = parser.tag(["Mary", "gave", "her", "2", "apples"])
    assert tokens[2].pos == "PRP$"
    tokens = parser.tag(["Tom", "helped", "her", "."])
    assert tokens[2].pos == "PRP"


def test_unsupported_sentence():
    with pytest.raises(UnsupportedSentence):
        tag_and_parse(["Colorless", "green", "ideas", "sleep", "furiously", "twice"])
    with pytest.raises(UnsupportedSentence):
        tag_and_parse([])


def test_tagger_lexicon_format_error(tmp_path):
    path = tmp_path / "lexicon.tsv"
    path.write_text("apple\tNN\n", encoding="utf-8")
    with pytest.raises(FormatError):
        TaggerLexicon.load(path)
