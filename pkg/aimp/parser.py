"""
Built-in restricted-domain tokenizer, tagger and dependency parser.

Covers the clause shapes of grade-school word problems: subject, verb,
direct and indirect objects, numeric and adjectival modifiers, possessives,
prepositional phrases, coordination, and "How many X does S have?" questions.
Anything else raises UnsupportedSentence; callers can fall back to CoNLL-U.
"""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from aimp.annotations import DepGraph, Edge, SentenceAnnotation, Token
from aimp.errors import FormatError, UnsupportedSentence
from aimp.numwords import DEFAULT_NUMBER_WORDS, is_numeral

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_TAGGER_LEXICON = DATA_DIR / "tagger_lexicon.tsv"

TERMINAL_PUNCTUATION = ".?!,"

DETERMINERS = frozenset({"the", "a", "an", "this", "that", "these", "those", "each", "every"})
PERSONAL_PRONOUNS = frozenset({"he", "she", "it", "they", "him", "her", "them", "hers",
                               "i", "you", "we", "me", "us"})
POSSESSIVE_PRONOUNS = frozenset({"his", "its", "their", "my", "your", "our"})
CONJUNCTIONS = frozenset({"and", "or", "but"})
PREPOSITIONS = frozenset({"to", "from", "of", "in", "on", "at", "for", "with", "into", "by", "onto"})
WH_WORDS = frozenset({"how"})
AUXILIARIES = {"does": ("VBZ", "do"), "do": ("VBP", "do"), "did": ("VBD", "do")}
QUANTITY_ADJECTIVES = frozenset({"many", "much", "more", "less", "fewer", "few", "some",
                                 "several", "additional", "extra", "another", "other"})
ADVERBS = frozenset({"now", "then", "left", "altogether", "together", "also", "still",
                     "today", "yesterday", "later", "finally", "again", "total"})
PARTICLES = frozenset({"away", "up", "back", "out", "off", "down"})

NOUN_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})
ADJECTIVE_SUFFIXES = ("less", "ful", "ous", "ive", "able", "ible")

IRREGULAR_PLURALS = {
    "children": "child", "men": "man", "women": "woman", "people": "person",
    "mice": "mouse", "geese": "goose", "feet": "foot", "teeth": "tooth",
    "knives": "knife", "leaves": "leaf", "loaves": "loaf", "wolves": "wolf",
    "halves": "half", "shelves": "shelf",
}


def tokenize(text: str) -> List[str]:
    """Whitespace split, with terminal punctuation and possessive 's as their own tokens."""
    tokens: List[str] = []
    for piece in text.replace("’", "'").split():
        trailing: List[str] = []
        while piece and piece[-1] in TERMINAL_PUNCTUATION and not is_numeral(piece):
            trailing.insert(0, piece[-1])
            piece = piece[:-1]
        if len(piece) > 2 and piece.lower().endswith("'s"):
            tokens.extend([piece[:-2], piece[-2:]])
        elif piece:
            tokens.append(piece)
        tokens.extend(trailing)
    return tokens


def detokenize(tokens: Sequence[str]) -> str:
    """Join tokens with spaces and reattach punctuation and possessives."""
    text = " ".join(tokens)
    text = re.sub(r" ([.?!,])", r"\1", text)
    return re.sub(r" ('s)\b", r"\1", text)


def singularize(word: str) -> str:
    lower = word.lower()
    if lower in IRREGULAR_PLURALS:
        return IRREGULAR_PLURALS[lower]
    if len(lower) > 4 and lower.endswith("ies"):
        return lower[:-3] + "y"
    if lower.endswith(("ches", "shes", "sses", "xes", "zes", "oes")):
        return lower[:-2]
    if lower.endswith("s") and not lower.endswith(("ss", "us", "is")):
        return lower[:-1]
    return lower


def _verb_stem(word: str, suffix: str) -> str:
    stem = word[: -len(suffix)]
    if suffix == "ed" and stem.endswith("i"):
        return stem[:-1] + "y"
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "aeiousl":
        return stem[:-1]
    return stem


@dataclass(frozen=True)
class LexiconEntry:
    pos: str
    lemma: str


class TaggerLexicon:
    """Open-class words of the domain: `word<TAB>POS<TAB>lemma` per line."""

    def __init__(self, entries: Optional[Dict[str, LexiconEntry]] = None):
        self.entries: Dict[str, LexiconEntry] = dict(entries or {})

    @classmethod
    def load(cls, path: Path) -> "TaggerLexicon":
        entries: Dict[str, LexiconEntry] = {}
        for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(line_no, "expected word<TAB>POS<TAB>lemma")
            word, pos, lemma = (p.strip() for p in parts)
            entries[word.lower()] = LexiconEntry(pos=pos, lemma=lemma.lower())
        logger.debug("loaded %d tagger lexicon entries from %s", len(entries), path)
        return cls(entries)

    def lookup(self, word: str) -> Optional[LexiconEntry]:
        return self.entries.get(word.lower())

    def is_noun(self, word: str) -> bool:
        entry = self.lookup(word)
        return entry is not None and entry.pos in NOUN_TAGS

    def __len__(self) -> int:
        return len(self.entries)


def _closed_class(lower: str, numwords: Dict[str, float]) -> Optional[Tuple[str, str]]:
    if lower in DETERMINERS:
        return "DT", lower
    if lower in PERSONAL_PRONOUNS:
        return "PRP", lower
    if lower in POSSESSIVE_PRONOUNS:
        return "PRP$", lower
    if lower in CONJUNCTIONS:
        return "CC", lower
    if lower in PREPOSITIONS:
        return "IN", lower
    if lower in WH_WORDS:
        return "WRB", lower
    if lower in AUXILIARIES:
        return AUXILIARIES[lower]
    if lower in QUANTITY_ADJECTIVES:
        return "JJ", lower
    if lower in ADVERBS:
        return "RB", lower
    if lower in PARTICLES:
        return "RP", lower
    if lower in numwords:
        return "CD", lower
    return None


def _guess(lower: str) -> Tuple[str, str]:
    if lower.endswith("ly") and len(lower) > 3:
        return "RB", lower
    if lower.endswith("ing") and len(lower) > 4:
        return "VBG", _verb_stem(lower, "ing")
    if lower.endswith("ed") and len(lower) > 3:
        return "VBD", _verb_stem(lower, "ed")
    if lower.endswith(ADJECTIVE_SUFFIXES):
        return "JJ", lower
    if lower.endswith("s") and not lower.endswith("ss"):
        return "NNS", singularize(lower)
    return "NN", lower


class Tagger:
    """Closed-class lists, then the lexicon, then capitalization and suffix rules."""

    def __init__(self, lexicon: TaggerLexicon, numwords: Optional[Dict[str, float]] = None):
        self.lexicon = lexicon
        self.numwords = DEFAULT_NUMBER_WORDS if numwords is None else numwords

    def _tag_one(self, word: str, position: int) -> Tuple[str, str]:
        if word in ".?!":
            return ".", word
        if word == ",":
            return ",", word
        if word.lower() == "'s":
            return "POS", "'s"
        if is_numeral(word):
            return "CD", word
        lower = word.lower()
        if word[0].isupper() and position > 0:
            return "NNP", word
        closed = _closed_class(lower, self.numwords)
        if closed:
            return closed
        entry = self.lexicon.lookup(lower)
        if entry:
            return entry.pos, entry.lemma
        if word[0].isupper():
            return "NNP", word
        return _guess(lower)

    def tag(self, words: Sequence[str]) -> List[Token]:
        tagged = [self._tag_one(w, i) for i, w in enumerate(words)]
        tokens = []
        for i, (word, (pos, lemma)) in enumerate(zip(words, tagged)):
            if word.lower() == "her" and i + 1 < len(tagged):
                if tagged[i + 1][0] in NOUN_TAGS | {"JJ", "CD"}:
                    pos = "PRP$"
            tokens.append(Token(index=i + 1, text=word, lemma=lemma, pos=pos))
        return tokens


@dataclass
class _Phrase:
    head: int
    end: int
    edges: List[Edge]


class _ClauseParser:
    """Deterministic arc assignment over one tagged sentence."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.i = 0
        self.edges: Dict[int, Edge] = {}

    # cursor helpers (positions are 0-based, token indices 1-based)

    def tag(self, pos: Optional[int] = None) -> str:
        pos = self.i if pos is None else pos
        return self.tokens[pos].pos if pos < len(self.tokens) else ""

    def lower(self, pos: Optional[int] = None) -> str:
        pos = self.i if pos is None else pos
        return self.tokens[pos].text.lower() if pos < len(self.tokens) else ""

    def is_verb(self, pos: Optional[int] = None) -> bool:
        pos = self.i if pos is None else pos
        return pos < len(self.tokens) and self.tokens[pos].is_verb

    def attach(self, dependent: int, head: int, relation: str) -> None:
        self.edges[dependent] = Edge(head, dependent, relation)

    def commit(self, phrase: _Phrase) -> int:
        for edge in phrase.edges:
            self.edges[edge.dependent] = edge
        self.i = phrase.end
        return phrase.head

    def unsupported(self, message: str, start: Optional[int] = None):
        start = self.i if start is None else start
        span = [t.text for t in self.tokens[start:]] or [t.text for t in self.tokens]
        return UnsupportedSentence(span, message)

    # noun phrases

    def _np_body(self, pos: int) -> Optional[_Phrase]:
        edges: List[Edge] = []
        determiner = possessive = None
        numbers: List[int] = []
        adjectives: List[Tuple[int, Optional[int], Optional[int]]] = []
        if self.tag(pos) == "DT":
            determiner, pos = pos + 1, pos + 1
        elif self.tag(pos) == "PRP$":
            possessive, pos = pos + 1, pos + 1
        while self.tag(pos) == "CD":
            numbers.append(pos + 1)
            pos += 1
        while self.tag(pos) == "JJ":
            first = pos + 1
            adjectives.append((first, None, None))
            pos += 1
            while self.tag(pos) in ("CC", ",") and self.tag(pos + 1) == "JJ":
                adjectives.append((pos + 2, first, pos + 1))
                pos += 2
        nouns: List[int] = []
        while self.tag(pos) in NOUN_TAGS:
            nouns.append(pos + 1)
            pos += 1
        if not nouns:
            return None
        head = nouns[-1]
        if determiner:
            edges.append(Edge(head, determiner, "det"))
        if possessive:
            edges.append(Edge(head, possessive, "nmod:poss"))
        if numbers:
            edges.append(Edge(head, numbers[-1], "nummod"))
            edges.extend(Edge(numbers[-1], n, "compound") for n in numbers[:-1])
        for adjective, conj_of, connector in adjectives:
            if conj_of is None:
                edges.append(Edge(head, adjective, "amod"))
            else:
                edges.append(Edge(conj_of, adjective, "conj"))
                relation = "cc" if self.tokens[connector - 1].pos == "CC" else "punct"
                edges.append(Edge(adjective, connector, relation))
        edges.extend(Edge(head, n, "compound") for n in nouns[:-1])
        return _Phrase(head, pos, edges)

    def noun_phrase(self, pos: Optional[int] = None) -> Optional[_Phrase]:
        pos = self.i if pos is None else pos
        if self.tag(pos) == "PRP":
            return _Phrase(pos + 1, pos + 1, [])
        phrase = self._np_body(pos)
        while phrase is not None and self.tag(phrase.end) == "POS":
            case = phrase.end + 1
            owned = self._np_body(phrase.end + 1)
            if owned is None:
                return None
            owned.edges.extend(phrase.edges)
            owned.edges.append(Edge(phrase.head, case, "case"))
            owned.edges.append(Edge(owned.head, phrase.head, "nmod:poss"))
            phrase = owned
        return phrase

    def _starts_clause(self, pos: int) -> bool:
        """Is there a (subject) verb group at `pos`?"""
        if self.is_verb(pos):
            return True
        phrase = self.noun_phrase(pos)
        if phrase is None:
            return False
        after = phrase.end
        while self.tag(after) == "RB":
            after += 1
        return self.is_verb(after)

    def coordinated_noun_phrase(self, stop_at_clause: bool) -> Optional[int]:
        phrase = self.noun_phrase()
        if phrase is None:
            return None
        first = self.commit(phrase)
        while self.tag() in ("CC", ","):
            connector = self.i
            nxt = connector + 1
            comma_and = self.tag() == "," and self.tag(nxt) == "CC"
            if comma_and:
                nxt += 1
            if stop_at_clause and self._starts_clause(nxt):
                break
            conjunct = self.noun_phrase(nxt)
            if conjunct is None:
                break
            self.i = nxt
            head = self.commit(conjunct)
            self.attach(head, first, "conj")
            if comma_and:
                self.attach(connector + 1, head, "punct")
                self.attach(connector + 2, head, "cc")
            else:
                relation = "cc" if self.tokens[connector].pos == "CC" else "punct"
                self.attach(connector + 1, head, relation)
        return first

    # verbs and clauses

    def verb_group(self, adverbs: List[int]) -> Optional[int]:
        verbs: List[int] = []
        while self.is_verb() or (verbs and self.tag() == "RB" and self.is_verb(self.i + 1)):
            if self.tag() == "RB":
                adverbs.append(self.i + 1)
            else:
                verbs.append(self.i + 1)
            self.i += 1
        if not verbs:
            return None
        main = verbs[-1]
        for aux in verbs[:-1]:
            self.attach(aux, main, "aux")
        while self.tag() == "RP":
            self.attach(self.i + 1, main, "compound:prt")
            self.i += 1
        return main

    def complements(self, verb: int) -> None:
        objects: List[int] = []
        while len(objects) < 2:
            head = self.coordinated_noun_phrase(stop_at_clause=True)
            if head is None:
                break
            objects.append(head)
            if self.tag() in ("CC", ","):
                break
        if len(objects) == 2:
            self.attach(objects[0], verb, "iobj")
            self.attach(objects[1], verb, "dobj")
        elif objects:
            self.attach(objects[0], verb, "dobj")
        while self.tag() == "RP":
            self.attach(self.i + 1, verb, "compound:prt")
            self.i += 1
        self.prepositional_phrases(verb, objects[-1] if objects else None)

    def prepositional_phrases(self, verb: int, last_noun: Optional[int]) -> None:
        while self.tag() in ("IN", "RB"):
            if self.tag() == "RB":
                self.attach(self.i + 1, verb, "advmod")
                self.i += 1
                continue
            prep_pos = self.i
            prep = self.lower()
            self.i += 1
            head = self.coordinated_noun_phrase(stop_at_clause=True)
            if head is None:
                raise self.unsupported(f"no noun phrase after {prep!r}", prep_pos)
            self.attach(prep_pos + 1, head, "case")
            if prep == "of" and last_noun is not None:
                self.attach(head, last_noun, "nmod:of")
            else:
                self.attach(head, verb, f"nmod:{prep}")
            last_noun = head

    def subject(self) -> Optional[int]:
        return self.coordinated_noun_phrase(stop_at_clause=False)

    def clause_coordination(self, verb: int) -> None:
        while self.tag() in ("CC", ","):
            connector = self.i
            nxt = connector + 1
            if self.tag() == "," and self.tag(nxt) == "CC":
                nxt += 1
            if not self._starts_clause(nxt):
                return
            self.i = nxt
            adverbs: List[int] = []
            subject = None
            if not self.is_verb():
                subject = self.subject()
            second = self.verb_group(adverbs)
            if second is None:
                raise self.unsupported("coordinated clause without a verb")
            if subject is not None:
                self.attach(subject, second, "nsubj")
            for adverb in adverbs:
                self.attach(adverb, second, "advmod")
            self.complements(second)
            self.attach(second, verb, "conj")
            for pos in range(connector, nxt):
                relation = "cc" if self.tokens[pos].pos == "CC" else "punct"
                self.attach(pos + 1, second, relation)

    def declarative(self, adverbs: List[int]) -> int:
        subject = self.subject()
        if subject is None:
            raise self.unsupported("no subject noun phrase")
        while self.tag() == "RB":
            adverbs.append(self.i + 1)
            self.i += 1
        verb = self.verb_group(adverbs)
        if verb is None:
            raise self.unsupported("no verb after the subject")
        self.attach(subject, verb, "nsubj")
        self.complements(verb)
        self.clause_coordination(verb)
        return verb

    def question(self, adverbs: List[int]) -> int:
        how = self.i + 1
        self.i += 1
        if self.lower() not in ("many", "much"):
            raise self.unsupported("only 'how many' / 'how much' questions are supported")
        quantity = self.i + 1
        phrase = self.noun_phrase()
        if phrase is None:
            raise self.unsupported("no noun after 'how many'")
        asked = self.commit(phrase)
        self.attach(how, quantity, "advmod")
        if not self.is_verb():
            raise self.unsupported("expected an auxiliary verb")
        aux = self.i + 1
        self.i += 1
        subject = self.subject()
        if subject is None:
            raise self.unsupported("no subject in question")
        verb = self.verb_group(adverbs)
        if verb is None:
            raise self.unsupported("no main verb in question")
        self.attach(aux, verb, "aux")
        self.attach(asked, verb, "dobj")
        self.attach(subject, verb, "nsubj")
        self.prepositional_phrases(verb, asked)
        return verb

    def parse(self) -> DepGraph:
        adverbs: List[int] = []
        commas: List[int] = []
        while self.tag() == "RB" or (adverbs and self.tag() == ","):
            (adverbs if self.tag() == "RB" else commas).append(self.i + 1)
            self.i += 1
        if self.tag() == "WRB":
            root = self.question(adverbs)
        else:
            root = self.declarative(adverbs)
        for adverb in adverbs:
            self.attach(adverb, root, "advmod")
        for comma in commas:
            self.attach(comma, root, "punct")
        while self.tag() == "RB":
            self.attach(self.i + 1, root, "advmod")
            self.i += 1
        while self.tag() in (".", ","):
            self.attach(self.i + 1, root, "punct")
            self.i += 1
        if self.i < len(self.tokens):
            raise self.unsupported("unexpected tokens")
        unattached = [t.index for t in self.tokens if t.index != root and t.index not in self.edges]
        if unattached:
            raise self.unsupported("tokens left without a head", unattached[0] - 1)
        return DepGraph(tokens=tuple(self.tokens), edges=tuple(sorted(
            self.edges.values(), key=lambda e: e.dependent)), root=root)


class RuleParser:
    """Tagger plus clause parser, sharing one lexicon."""

    def __init__(self, lexicon: TaggerLexicon, numwords: Optional[Dict[str, float]] = None):
        self.tagger = Tagger(lexicon, numwords)

    @property
    def lexicon(self) -> TaggerLexicon:
        return self.tagger.lexicon

    def tag(self, words: Sequence[str]) -> List[Token]:
        return self.tagger.tag(words)

    def parse(self, words: Sequence[str]) -> SentenceAnnotation:
        if not words:
            raise UnsupportedSentence([], "empty sentence")
        tokens = self.tag(words)
        graph = _ClauseParser(tokens).parse()
        return SentenceAnnotation(original_text=detokenize(words), graph=graph)

    def parse_text(self, text: str) -> SentenceAnnotation:
        return self.parse(tokenize(text))


@lru_cache(maxsize=None)
def default_parser() -> RuleParser:
    return RuleParser(TaggerLexicon.load(DEFAULT_TAGGER_LEXICON))


def tag_and_parse(tokens: Sequence[str], parser: Optional[RuleParser] = None) -> SentenceAnnotation:
    """Tag and dependency-parse a tokenized sentence with the built-in rules."""
    return (parser or default_parser()).parse(tokens)
