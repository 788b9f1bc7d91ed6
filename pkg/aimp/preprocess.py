"""
Preprocessing: sentence splitting, rule-based coreference resolution and
conjunction breaking. The output is a list of self-contained sentence
fragments, one verb signature's worth of text each.
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel

from aimp.annotations import (
    DEFAULT_TAG_CLASSES, DepGraph, Edge, SentenceAnnotation, TagClassConfig, Token,
)
from aimp.errors import Diagnostic, UnsupportedSentence
from aimp.parser import RuleParser, default_parser, detokenize, tokenize

logger = logging.getLogger(__name__)

PRONOUNS = frozenset({"he", "she", "it", "they", "him", "her", "them", "his", "hers", "its", "their"})
POSSESSIVE_PRONOUNS = frozenset({"his", "hers", "its", "their"})
PROPER_NOUN_TAGS = frozenset({"NNP", "NNPS", "PROPN"})
MENTION_SKIP_RELATIONS = frozenset({"det", "punct"})

_SENTENCE_BOUNDARY = re.compile(r"(?<=[.?!])\s+")


class MentionKind(str, Enum):
    PERSON_NAME = "PersonName"
    COMMON_NOUN = "CommonNoun"


@dataclass(frozen=True)
class EntityMention:
    text: str
    sentence_index: int
    token_index: int
    kind: MentionKind

    def __post_init__(self):
        if not self.text:
            raise ValueError("mention text must be nonempty")
        if self.sentence_index < 0 or self.token_index < 1:
            raise ValueError(f"invalid mention position ({self.sentence_index}, {self.token_index})")


class Substitution(BaseModel):
    sentence_index: int
    token_index: int
    pronoun: str
    replacement: str


@dataclass(frozen=True)
class ProblemText:
    sentences: Tuple[str, ...]
    source: str
    substitutions: Tuple[Substitution, ...] = field(default=(), compare=False)
    diagnostics: Tuple[Diagnostic, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))


def split_sentences(raw: str) -> ProblemText:
    """Split on `.`, `?`, `!` followed by whitespace; terminators stay with their sentence."""
    pieces = [s.strip() for s in _SENTENCE_BOUNDARY.split(raw.strip())]
    return ProblemText(sentences=tuple(s for s in pieces if s), source=raw)


# Mentions

def _is_pronoun(token: Token) -> bool:
    return token.text.lower() in PRONOUNS


def _is_possessive(token: Token, graph: Optional[DepGraph]) -> bool:
    lower = token.text.lower()
    if lower in POSSESSIVE_PRONOUNS:
        return True
    if lower == "her":
        if token.pos == "PRP$":
            return True
        return graph is not None and graph.relation_of(token.index) in ("nmod:poss", "poss")
    return False


def _mention_kind(token: Token) -> MentionKind:
    if token.pos in PROPER_NOUN_TAGS:
        return MentionKind.PERSON_NAME
    return MentionKind.COMMON_NOUN


def _mention_text(tokens: Sequence[Token], kind: MentionKind) -> str:
    text = detokenize([t.text for t in tokens])
    if kind is MentionKind.COMMON_NOUN:
        text = text[:1].lower() + text[1:]
    return text


def subject_mentions(ann: SentenceAnnotation, sentence_index: int,
                     cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> List[EntityMention]:
    """Subject-position mentions of a parsed sentence, in token order. Pronoun subjects are skipped."""
    graph = ann.graph
    mentions = []
    for edge in graph.edges:
        if edge.relation not in cfg.subject_like:
            continue
        head = graph.token(edge.dependent)
        if _is_pronoun(head):
            continue
        keep = []
        for index in graph.subtree(edge.dependent):
            if index != edge.dependent and graph.relation_of(index) in MENTION_SKIP_RELATIONS:
                continue
            keep.append(graph.token(index))
        kind = _mention_kind(head)
        mentions.append(EntityMention(
            text=_mention_text(keep, kind), sentence_index=sentence_index,
            token_index=edge.dependent, kind=kind,
        ))
    return sorted(mentions, key=lambda m: m.token_index)


def _fallback_mention(tokens: List[Token], sentence_index: int) -> Optional[EntityMention]:
    """First proper-noun run (possessives included) when the clause parser gives up."""
    start = None
    for pos, tok in enumerate(tokens):
        if tok.pos in ("PRP", "PRP$"):
            return None
        if tok.pos in PROPER_NOUN_TAGS:
            start = pos
            break
    if start is None:
        return None
    end = start + 1
    while end < len(tokens) and (tokens[end].pos in PROPER_NOUN_TAGS or tokens[end].pos == "POS"):
        end += 1
    span = tokens[start:end]
    return EntityMention(
        text=_mention_text(span, MentionKind.PERSON_NAME), sentence_index=sentence_index,
        token_index=span[-1].index, kind=MentionKind.PERSON_NAME,
    )


def find_subject_mention(tokens: Sequence[str], parser: Optional[RuleParser] = None,
                         sentence_index: int = 0,
                         cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> Optional[EntityMention]:
    """The last subject-position mention of a tokenized sentence, or None."""
    mentions = _sentence_mentions(list(tokens), parser or default_parser(), sentence_index, cfg)
    return mentions[-1] if mentions else None


def _sentence_mentions(words: List[str], parser: RuleParser, sentence_index: int,
                       cfg: TagClassConfig) -> List[EntityMention]:
    if not words:
        return []
    try:
        ann = parser.parse(words)
    except UnsupportedSentence as e:
        logger.debug("mention fallback for sentence %d: %s", sentence_index, e)
        fallback = _fallback_mention(parser.tag(words), sentence_index)
        return [fallback] if fallback else []
    return subject_mentions(ann, sentence_index, cfg)


# Coreference

def _replacement(mention: EntityMention, possessive: bool, sentence_initial: bool) -> List[str]:
    text = mention.text
    if sentence_initial:
        text = text[:1].upper() + text[1:]
    words = tokenize(text)
    if possessive:
        words.append("'s")
    return words


def _unresolved(pronoun: str, sentence: str) -> Diagnostic:
    logger.warning("no antecedent for pronoun %r in %r", pronoun, sentence)
    return Diagnostic(
        stage="preprocess", code="unresolved_pronoun",
        message=f"no antecedent for pronoun {pronoun!r}", fragment=sentence,
    )


def resolve_coreferences(problem: ProblemText, parser: Optional[RuleParser] = None,
                         cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> ProblemText:
    """
    Replace each pronoun by the most recent preceding subject-position mention.

    Possessive pronouns become `<mention>'s`. A pronoun with no antecedent is
    left in place and reported as an `unresolved_pronoun` diagnostic.
    """
    parser = parser or default_parser()
    history: List[EntityMention] = []
    sentences: List[str] = []
    substitutions: List[Substitution] = list(problem.substitutions)
    diagnostics: List[Diagnostic] = list(problem.diagnostics)

    for s_index, sentence in enumerate(problem.sentences):
        words = tokenize(sentence)
        if not any(w.lower() in PRONOUNS for w in words):
            sentences.append(sentence)
            history.extend(_sentence_mentions(words, parser, s_index, cfg))
            continue

        tagged = parser.tag(words)
        local = _sentence_mentions(words, parser, s_index, cfg)
        resolved: List[str] = []
        for tok in tagged:
            if not _is_pronoun(tok):
                resolved.append(tok.text)
                continue
            earlier = [m for m in local if m.token_index < tok.index]
            antecedent = earlier[-1] if earlier else (history[-1] if history else None)
            if antecedent is None:
                diagnostics.append(_unresolved(tok.text, sentence))
                resolved.append(tok.text)
                continue
            replacement = _replacement(antecedent, _is_possessive(tok, None), tok.index == 1)
            substitutions.append(Substitution(
                sentence_index=s_index, token_index=tok.index,
                pronoun=tok.text, replacement=detokenize(replacement),
            ))
            logger.debug("sentence %d: %r -> %r", s_index, tok.text, detokenize(replacement))
            resolved.extend(replacement)

        if resolved == words:
            sentences.append(sentence)
        else:
            sentences.append(detokenize(resolved))
        history.extend(_sentence_mentions(resolved, parser, s_index, cfg))

    return ProblemText(
        sentences=tuple(sentences), source=problem.source,
        substitutions=tuple(substitutions), diagnostics=tuple(diagnostics),
    )


def resolve_annotation_coreferences(
    annotations: Sequence[SentenceAnnotation],
    cfg: TagClassConfig = DEFAULT_TAG_CLASSES,
) -> Tuple[List[SentenceAnnotation], List[Substitution], List[Diagnostic]]:
    """
    The same antecedent rule over already-parsed sentences. The pronoun token
    takes the text and lemma of the antecedent's head word; the graph is unchanged.
    """
    history: List[Tuple[EntityMention, Token]] = []
    result: List[SentenceAnnotation] = []
    substitutions: List[Substitution] = []
    diagnostics: List[Diagnostic] = []

    for s_index, ann in enumerate(annotations):
        graph = ann.graph
        local = [(m, graph.token(m.token_index)) for m in subject_mentions(ann, s_index, cfg)]
        tokens: List[Token] = []
        for tok in graph.tokens:
            if not _is_pronoun(tok):
                tokens.append(tok)
                continue
            earlier = [pair for pair in local if pair[0].token_index < tok.index]
            pair = earlier[-1] if earlier else (history[-1] if history else None)
            if pair is None:
                diagnostics.append(_unresolved(tok.text, ann.original_text))
                tokens.append(tok)
                continue
            _, head = pair
            text = head.text + ("'s" if _is_possessive(tok, graph) else "")
            substitutions.append(Substitution(
                sentence_index=s_index, token_index=tok.index, pronoun=tok.text, replacement=text,
            ))
            tokens.append(Token(index=tok.index, text=text, lemma=head.lemma, pos=head.pos))

        if tokens != list(graph.tokens):
            new_graph = DepGraph(tokens=tuple(tokens), edges=graph.edges, root=graph.root)
            ann = SentenceAnnotation(original_text=detokenize([t.text for t in tokens]), graph=new_graph)
        result.append(ann)
        history.extend((m, ann.graph.token(m.token_index)) for m in subject_mentions(ann, s_index, cfg))

    return result, substitutions, diagnostics


# Conjunction breaking

CONNECTOR_RELATIONS = frozenset({"cc", "punct"})
ADJECTIVE_TAGS = frozenset({"JJ", "JJR", "JJS", "ADJ"})


def _project(graph: DepGraph, keep: Iterable[int], root: int,
             rewired: Optional[Dict[int, Tuple[int, str]]] = None) -> DepGraph:
    """Restrict `graph` to `keep`; `rewired` gives new (head, relation) pairs for some tokens."""
    kept: Set[int] = set(keep)
    rewired = rewired or {}
    edges = []
    for tok in graph.tokens:
        if tok.index not in kept or tok.index == root:
            continue
        if tok.index in rewired:
            head, relation = rewired[tok.index]
        else:
            head, relation = graph.head_of(tok.index), graph.relation_of(tok.index)
        edges.append(Edge(head, tok.index, relation))
    tokens = tuple(t for t in graph.tokens if t.index in kept)
    return DepGraph(tokens=tokens, edges=tuple(edges), root=root)


def _connectors(graph: DepGraph, conjunct: int) -> Set[int]:
    """The coordinating word and separating commas that introduce `conjunct`."""
    return {
        e.dependent for e in graph.dependents(conjunct)
        if e.relation in CONNECTOR_RELATIONS and e.dependent < conjunct
    }


def _final_punct(graph: DepGraph, after: int) -> Set[int]:
    """Punctuation on the root that closes the sentence after token `after`."""
    return {
        e.dependent for e in graph.dependents(graph.root)
        if e.relation == "punct" and e.dependent > after
    }


def _split_once(graph: DepGraph, edge: Edge, cfg: TagClassConfig) -> List[DepGraph]:
    head, conjunct = edge.head, edge.dependent
    all_tokens = {t.index for t in graph.tokens}
    conjunct_tree = set(graph.subtree(conjunct))
    connectors = _connectors(graph, conjunct)
    head_relation = graph.relation_of(head)
    head_head = graph.head_of(head)

    if graph.token(head).is_verb and graph.token(conjunct).is_verb:
        first = _project(graph, all_tokens - conjunct_tree, graph.root)
        keep = conjunct_tree - connectors
        rewired: Dict[int, Tuple[int, str]] = {}
        if not any(e.relation in cfg.subject_like for e in graph.dependents(conjunct)):
            for e in graph.dependents(head):
                if e.relation in cfg.subject_like:
                    keep |= set(graph.subtree(e.dependent))
                    rewired[e.dependent] = (conjunct, e.relation)
        if head == graph.root:
            closing = _final_punct(graph, conjunct)
            rewired.update({p: (conjunct, "punct") for p in closing})
            second = _project(graph, keep | closing, conjunct, rewired)
        else:
            rewired[conjunct] = (head_head, head_relation)
            keep |= all_tokens - set(graph.subtree(head))
            second = _project(graph, keep, graph.root, rewired)
        return [first, second]

    if graph.token(conjunct).pos in ADJECTIVE_TAGS:
        if head_head is None:
            return [_project(graph, all_tokens - connectors, graph.root, {conjunct: (head, "amod")})]
        rewired = {conjunct: (head_head, head_relation)}
        return [_project(graph, all_tokens - connectors, graph.root, rewired)]

    first = _project(graph, all_tokens - conjunct_tree, graph.root)
    head_tree = set(graph.subtree(head))
    keep = (all_tokens - head_tree) | (conjunct_tree - connectors)
    if head == graph.root:
        second = _project(graph, keep, conjunct)
    else:
        second = _project(graph, keep, graph.root, {conjunct: (head_head, head_relation)})
    return [first, second]


def split_conjunctions(ann: SentenceAnnotation,
                       cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> List[SentenceAnnotation]:
    """
    Break coordination until no `conj` arc is left.

    Clause coordination splits into independent clauses, a second verb without
    its own subject receiving a copy of the first verb's subject. Coordinated
    subjects or objects give one fragment per conjunct under the same verb.
    Coordinated adjectives lose the conjunction and stay as stacked modifiers.
    """
    done: List[DepGraph] = []
    work = [ann.graph]
    while work:
        graph = work.pop(0)
        conj = next((e for e in sorted(graph.edges, key=lambda e: e.dependent)
                     if e.relation == "conj"), None)
        if conj is None:
            done.append(graph)
            continue
        pieces = _split_once(graph, conj, cfg)
        work[0:0] = pieces
    if len(done) == 1 and done[0] is ann.graph:
        return [ann]
    return [SentenceAnnotation(original_text=detokenize([t.text for t in g.tokens]), graph=g)
            for g in done]


def break_conjunctions(ann: SentenceAnnotation,
                       cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> List[str]:
    """Conjunction-free fragments of `ann`, rendered back to plain text."""
    return [fragment.original_text for fragment in split_conjunctions(ann, cfg)]
