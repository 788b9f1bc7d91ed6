"""
Verb categorization: find the quantifier, walk up to its verb, name the
variables, pick the candidate signatures, and fill in a VerbSignature.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Set, Tuple

from aimp.annotations import DEFAULT_TAG_CLASSES, DepGraph, SentenceAnnotation, TagClassConfig
from aimp.embeddings import Polarity
from aimp.errors import InconsistentInputs, MissingArgument, NoVerbFound
from aimp.language import Address, NumLit
from aimp.numwords import (
    ARTICLE_WORDS, DEFAULT_NUMBER_WORDS, UNVALUED_WORDS, combine_number_words, is_number_word,
    is_numeral,
)
from aimp.parser import QUANTITY_ADJECTIVES, singularize
from aimp.signatures import (
    Construct, Destroy, Get, NegativeTransfer, Observation, PositiveTransfer, VerbSignature,
)

logger = logging.getLogger(__name__)

_NON_NAME_CHARS = re.compile(r"[^a-z0-9]")


@dataclass(frozen=True)
class Quantifier:
    """A quantity in a sentence. `value` is None for the unvalued words many/much."""

    token_index: int
    value: Optional[float]
    text: str = ""

    def __post_init__(self):
        if self.value is None:
            if self.text and self.text.lower() not in UNVALUED_WORDS:
                raise ValueError(f"only many/much may be unvalued, got {self.text!r}")
        elif not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"quantifier value must be finite and non-negative, got {self.value}")

    @property
    def is_unvalued(self) -> bool:
        return self.value is None


def _is_quantity_token(text: str, numwords: Dict[str, float]) -> bool:
    return is_numeral(text) or is_number_word(text, numwords)


def find_quantifiers(ann: SentenceAnnotation, numwords: Optional[Dict[str, float]] = None,
                     cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> List[Quantifier]:
    """
    Numerals, number words and many/much, in token order. Adjacent number
    words form one quantifier on the last word ("twenty one", "a dozen").
    A lone "a"/"an" counts only on a direct-object-like noun.
    """
    numwords = DEFAULT_NUMBER_WORDS if numwords is None else numwords
    graph = ann.graph
    tokens = list(graph.tokens)
    found: List[Quantifier] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.text.lower() in UNVALUED_WORDS:
            found.append(Quantifier(tok.index, None, tok.text))
            i += 1
            continue
        if not _is_quantity_token(tok.text, numwords):
            i += 1
            continue
        run = [tok]
        while i + len(run) < len(tokens) and _is_quantity_token(tokens[i + len(run)].text, numwords):
            run.append(tokens[i + len(run)])
        i += len(run)
        if len(run) == 1 and tok.text.lower() in ARTICLE_WORDS:
            noun = graph.head_of(tok.index)
            if noun is None or graph.relation_of(noun) not in cfg.direct_object_like:
                continue
        words = [t.text for t in run]
        found.append(Quantifier(run[-1].index, combine_number_words(words, numwords), " ".join(words)))
    logger.debug("quantifiers in %r: %s", ann.original_text, [q.text for q in found])
    return found


def head_verb_of(q: Quantifier, graph: DepGraph) -> int:
    """Walk head links up from the quantifier to the first verb."""
    node = graph.head_of(q.token_index)
    while node is not None:
        if graph.token(node).is_verb:
            return node
        node = graph.head_of(node)
    raise NoVerbFound(f"no verb above quantifier {q.text or q.token_index!r}")


# Variable names

def _clean(word: str) -> str:
    word = word.lower()
    if word.endswith("'s"):
        word = word[:-2]
    return _NON_NAME_CHARS.sub("", word)


def _is_quantity_word(text: str) -> bool:
    lower = text.lower()
    return lower in QUANTITY_ADJECTIVES or is_number_word(text) or is_numeral(text)


def _modifiers(graph: DepGraph, head: int, cfg: TagClassConfig) -> List[int]:
    collected: List[int] = []
    stack = [head]
    while stack:
        node = stack.pop()
        for edge in graph.dependents(node):
            if edge.relation not in cfg.modifier_like:
                continue
            if _is_quantity_word(graph.token(edge.dependent).text):
                continue
            collected.append(edge.dependent)
            stack.append(edge.dependent)
    return sorted(collected)


def _phrase_name(graph: DepGraph, head: int, cfg: TagClassConfig, head_word: str) -> str:
    parts = [_clean(graph.token(i).text) for i in _modifiers(graph, head, cfg)]
    parts.append(_clean(head_word))
    return "_".join(p for p in parts if p)


def _object_word(graph: DepGraph, index: int) -> str:
    tok = graph.token(index)
    if tok.lemma and tok.lemma != "_":
        return tok.lemma
    return singularize(tok.text)


def _dependent(graph: DepGraph, verb: int, labels: Iterable[str]) -> Optional[int]:
    labels = frozenset(labels)
    for edge in graph.dependents(verb):
        if edge.relation in labels:
            return edge.dependent
    return None


def _as_address(name: str) -> Address:
    if not name or not name[0].isalpha():
        name = f"v_{name}"
    return Address(name)


@dataclass(frozen=True)
class VariableNames:
    subject: str
    object: str
    combined: Address
    indirect: Optional[str] = None
    indirect_relation: Optional[str] = None

    @property
    def counterparty(self) -> Optional[Address]:
        if self.indirect is None:
            return None
        return _as_address(f"{self.indirect}_{self.object}")


def infer_variable_name(verb: int, graph: DepGraph,
                        cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> VariableNames:
    """
    subject modifiers + subject + object modifiers + object, joined with
    underscores. "Pooja's Mom has 3 green apples" names pooja_mom_green_apple.
    """
    verb_text = graph.token(verb).text
    subject = _dependent(graph, verb, cfg.subject_like)
    if subject is None:
        raise MissingArgument("Subject", verb_text)
    obj = _dependent(graph, verb, cfg.direct_object_like)
    if obj is None:
        raise MissingArgument("Object", verb_text)
    subject_part = _phrase_name(graph, subject, cfg, graph.token(subject).text)
    object_part = _phrase_name(graph, obj, cfg, _object_word(graph, obj))
    if not subject_part or not object_part:
        raise MissingArgument("Subject" if not subject_part else "Object", verb_text)
    names = VariableNames(
        subject=subject_part, object=object_part,
        combined=_as_address(f"{subject_part}_{object_part}"),
    )
    indirect = infer_indirect_name(verb, graph, cfg)
    if indirect is not None:
        part, relation = indirect
        names = VariableNames(names.subject, names.object, names.combined, part, relation)
    return names


def infer_indirect_name(verb: int, graph: DepGraph,
                        cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> Optional[Tuple[str, str]]:
    """Name part and relation label of the verb's indirect-object-like dependent."""
    for edge in graph.dependents(verb):
        if edge.relation in cfg.indirect_object_like:
            part = _phrase_name(graph, edge.dependent, cfg, graph.token(edge.dependent).text)
            if part:
                return part, edge.relation
    return None


# Candidate selection

class CandidateSet(Enum):
    GET = ("get",)
    OBSERVATION = ("observation",)
    CONSTRUCT_DESTROY = ("construct", "destroy")
    TRANSFER = ("positive_transfer", "negative_transfer")

    @property
    def names(self) -> Tuple[str, ...]:
        return self.value

    @property
    def needs_polarity(self) -> bool:
        return len(self.value) == 2


@dataclass
class ProgramState:
    """Variables already initialized by the program emitted so far."""

    declared: Set[str] = field(default_factory=set)

    def declare(self, addresses: Iterable[str]) -> None:
        self.declared.update(addresses)


def _is_question(ann: SentenceAnnotation) -> bool:
    return "?" in ann.original_text or any(t.text == "?" for t in ann.graph.tokens)


def select_candidates(ann: SentenceAnnotation, q: Quantifier, names: VariableNames,
                      state: ProgramState, graph: Optional[DepGraph] = None,
                      cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> CandidateSet:
    graph = graph or ann.graph
    if _is_question(ann) and q.is_unvalued:
        return CandidateSet.GET
    if names.combined not in state.declared:
        return CandidateSet.OBSERVATION
    verb = head_verb_of(q, graph)
    if any(e.relation in cfg.indirect_object_like for e in graph.dependents(verb)):
        return CandidateSet.TRANSFER
    return CandidateSet.CONSTRUCT_DESTROY


def build_signature(candidates: CandidateSet, polarity: Optional[Polarity],
                    names: VariableNames, q: Quantifier) -> VerbSignature:
    if candidates.needs_polarity and polarity is None:
        raise InconsistentInputs(f"{'/'.join(candidates.names)} needs a polarity")
    if not candidates.needs_polarity and polarity is not None:
        raise InconsistentInputs(f"{candidates.names[0]} takes no polarity")
    if candidates is CandidateSet.GET:
        return Get(names.combined)
    if q.is_unvalued:
        raise InconsistentInputs(f"{candidates.names[0]} needs a valued quantifier, got {q.text!r}")
    amount = NumLit(q.value)
    if candidates is CandidateSet.OBSERVATION:
        return Observation(names.combined, amount)
    if candidates is CandidateSet.CONSTRUCT_DESTROY:
        if polarity is Polarity.POSITIVE:
            return Construct(names.combined, amount)
        return Destroy(names.combined, amount)
    counterparty = names.counterparty
    if counterparty is None:
        raise InconsistentInputs("a transfer needs an indirect-object-like argument")
    if polarity is Polarity.POSITIVE:
        return PositiveTransfer(names.combined, counterparty, amount)
    return NegativeTransfer(names.combined, counterparty, amount)
