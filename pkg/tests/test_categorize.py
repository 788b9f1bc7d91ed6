import re

import pytest

from aimp.annotations import DepGraph, Edge, Token
from aimp.categorize import (
    CandidateSet, ProgramState, Quantifier, VariableNames, build_signature, find_quantifiers,
    head_verb_of, infer_variable_name, select_candidates,
)
from aimp.embeddings import Polarity
from aimp.errors import InconsistentInputs, MissingArgument, NoVerbFound
from aimp.language import Address, NumLit
from aimp.signatures import Construct, Destroy, Get, NegativeTransfer, Observation, PositiveTransfer

POOJA_APPLE = VariableNames(subject="pooja", object="apple", combined=Address("pooja_apple"))
POOJA_TO_JOHN = VariableNames("pooja", "apple", Address("pooja_apple"), "john", "iobj")


def names_of(parser, sentence):
    graph = parser.parse_text(sentence).graph
    return infer_variable_name(graph.root, graph)


# Quantifiers

@pytest.mark.parametrize("sentence, expected", [
    ("Pooja has 3 apples", [Quantifier(3, 3.0, "3")]),
    ("She eats one apple", [Quantifier(3, 1.0, "one")]),
    ("How many apples does Pooja have now?", [Quantifier(2, None, "many")]),
    ("Tom has twenty one marbles.", [Quantifier(4, 21.0, "twenty one")]),
    ("He loses a dozen marbles.", [Quantifier(4, 12.0, "a dozen")]),
    ("Pooja eats an apple.", [Quantifier(3, 1.0, "an")]),
    ("A boy has 3 apples.", [Quantifier(4, 3.0, "3")]),
    ("Pooja eats the apple.", []),
])
def test_find_quantifiers(parser, sentence, expected):
    assert find_quantifiers(parser.parse_text(sentence)) == expected


def test_quantifier_invariants():
    with pytest.raises(ValueError):
        Quantifier(1, None, "three")
    with pytest.raises(ValueError):
        Quantifier(1, -2.0, "-2")
    assert Quantifier(1, None, "much").is_unvalued


def test_find_quantifiers_uses_the_given_number_words():
    from aimp.annotations import SentenceAnnotation
    from aimp.numwords import DEFAULT_NUMBER_WORDS
    tokens = (Token(1, "Tom", "Tom", "NNP"), Token(2, "has", "have", "VBZ"),
              Token(3, "Score", "score", "CD"), Token(4, "pens", "pen", "NNS"))
    graph = DepGraph(tokens=tokens, edges=(Edge(2, 1, "nsubj"), Edge(2, 4, "dobj"), Edge(4, 3, "nummod")), root=2)
    ann = SentenceAnnotation(original_text="Tom has Score pens", graph=graph)
    assert find_quantifiers(ann) == []
    assert find_quantifiers(ann, numwords={**DEFAULT_NUMBER_WORDS, "score": 20.0}) == [Quantifier(3, 20.0, "Score")]


# Head verb

def test_head_verb_of(parser):
    graph = parser.parse_text("Pooja has 3 apples").graph
    assert head_verb_of(Quantifier(3, 3.0, "3"), graph) == 2


def test_quantifier_on_the_root_verb():
    tokens = (Token(1, "Pooja", "Pooja", "NNP"), Token(2, "eats", "eat", "VBZ"), Token(3, "twice", "twice", "CD"))
    graph = DepGraph(tokens=tokens, edges=(Edge(2, 1, "nsubj"), Edge(2, 3, "advmod")), root=2)
    assert head_verb_of(Quantifier(3, 2.0, "twice"), graph) == 2


def test_no_verb_found():
    tokens = (Token(1, "three", "three", "CD"), Token(2, "apples", "apple", "NNS"))
    graph = DepGraph(tokens=tokens, edges=(Edge(2, 1, "nummod"),), root=2)
    with pytest.raises(NoVerbFound):
        head_verb_of(Quantifier(1, 3.0, "three"), graph)


# Variable names

def test_variable_names(parser):
    names = names_of(parser, "Pooja has 3 apples")
    assert (names.subject, names.object, names.combined) == ("pooja", "apple", "pooja_apple")

    names = names_of(parser, "Pooja's Mom has 3 green apples.")
    assert names.subject == "pooja_mom"
    assert names.object == "green_apple"
    assert names.combined == "pooja_mom_green_apple"

    assert names_of(parser, "Pooja eats the green apple.").object == "green_apple"


def test_indirect_names(parser):
    names = names_of(parser, "Pooja gave John 2 apples.")
    assert (names.indirect, names.indirect_relation) == ("john", "iobj")
    assert names.counterparty == "john_apple"

    names = names_of(parser, "Mary took 2 cookies from Tom.")
    assert (names.indirect, names.indirect_relation) == ("tom", "nmod:from")
    assert names.counterparty == "tom_cookie"


def test_missing_object(parser):
    with pytest.raises(MissingArgument) as info:
        names_of(parser, "Pooja eats.")
    assert info.value.role == "Object"


def test_names_are_addresses(parser):
    sentences = [
        "Pooja has two apples.", "Pooja's Mom gives 3 bananas to Pooja.",
        "Ali sells 2 red green balls.", "Sara purchases 5 stickers.",
    ]
    for sentence in sentences:
        assert re.fullmatch(r"[a-z][a-z0-9_]*", names_of(parser, sentence).combined)


# Candidate selection

def test_question_selects_get(parser):
    ann = parser.parse_text("How many apples does Pooja have now?")
    state = ProgramState({"pooja_apple"})
    [q] = find_quantifiers(ann)
    names = infer_variable_name(ann.graph.root, ann.graph)
    assert select_candidates(ann, q, names, state) is CandidateSet.GET


def test_new_variable_selects_observation(parser):
    ann = parser.parse_text("Pooja has 3 apples")
    [q] = find_quantifiers(ann)
    names = infer_variable_name(ann.graph.root, ann.graph)
    assert select_candidates(ann, q, names, ProgramState()) is CandidateSet.OBSERVATION


def test_indirect_object_selects_transfer(parser):
    ann = parser.parse_text("Pooja gave John 2 apples")
    [q] = find_quantifiers(ann)
    names = infer_variable_name(ann.graph.root, ann.graph)
    state = ProgramState({"pooja_apple", "john_apple"})
    assert select_candidates(ann, q, names, state) is CandidateSet.TRANSFER


def test_declared_variable_selects_construct_or_destroy(parser):
    ann = parser.parse_text("Pooja eats one apple.")
    [q] = find_quantifiers(ann)
    names = infer_variable_name(ann.graph.root, ann.graph)
    state = ProgramState()
    state.declare(["pooja_apple"])
    candidates = select_candidates(ann, q, names, state)
    assert candidates is CandidateSet.CONSTRUCT_DESTROY
    assert candidates.names == ("construct", "destroy")
    assert candidates.needs_polarity


# Signatures

def test_build_signature():
    three, one, two = Quantifier(3, 3.0, "3"), Quantifier(3, 1.0, "one"), Quantifier(4, 2.0, "2")
    assert build_signature(CandidateSet.OBSERVATION, None, POOJA_APPLE, three) == Observation("pooja_apple", NumLit(3))
    assert build_signature(CandidateSet.CONSTRUCT_DESTROY, Polarity.NEGATIVE, POOJA_APPLE, one) == Destroy("pooja_apple", NumLit(1))
    assert build_signature(CandidateSet.CONSTRUCT_DESTROY, Polarity.POSITIVE, POOJA_APPLE, one) == Construct("pooja_apple", NumLit(1))
    assert build_signature(CandidateSet.GET, None, POOJA_APPLE, Quantifier(2, None, "many")) == Get("pooja_apple")
    assert build_signature(CandidateSet.TRANSFER, Polarity.NEGATIVE, POOJA_TO_JOHN, two) == NegativeTransfer(
        "pooja_apple", "john_apple", NumLit(2))
    assert build_signature(CandidateSet.TRANSFER, Polarity.POSITIVE, POOJA_TO_JOHN, two) == PositiveTransfer(
        "pooja_apple", "john_apple", NumLit(2))


@pytest.mark.parametrize("candidates, polarity, names, quantifier", [
    (CandidateSet.CONSTRUCT_DESTROY, None, POOJA_APPLE, Quantifier(3, 1.0, "one")),
    (CandidateSet.OBSERVATION, Polarity.POSITIVE, POOJA_APPLE, Quantifier(3, 1.0, "one")),
    (CandidateSet.OBSERVATION, None, POOJA_APPLE, Quantifier(2, None, "many")),
    (CandidateSet.TRANSFER, Polarity.NEGATIVE, POOJA_APPLE, Quantifier(3, 1.0, "one")),
])
def test_build_signature_rejects_inconsistent_inputs(candidates, polarity, names, quantifier):
    with pytest.raises(InconsistentInputs):
        build_signature(candidates, polarity, names, quantifier)
