"""
CoNLL-U reader and writer on top of the `conllu` package. Only ID, FORM,
LEMMA, UPOS, HEAD and DEPREL are consumed; multiword-token ranges and
empty nodes are skipped.
"""
import logging
from typing import Iterator, List, Tuple

import conllu
from conllu.exceptions import ParseException
from conllu.models import Token as ConlluToken, TokenList

from aimp.annotations import DepGraph, Edge, SentenceAnnotation, Token
from aimp.errors import FormatError

logger = logging.getLogger(__name__)

FIELDS = ("id", "form", "lemma", "upos", "xpos", "feats", "head", "deprel", "deps", "misc")

# HEAD is kept raw so a bad value can be reported with its line number.
_FIELD_PARSERS = {"head": lambda line, i: line[i]}


def _blocks(text: str) -> Iterator[Tuple[str, List[int]]]:
    """Blank-line separated sentences with the line numbers of their token rows."""
    lines: List[str] = []
    token_lines: List[int] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            if token_lines:
                yield "\n".join(lines) + "\n", token_lines
            lines, token_lines = [], []
            continue
        lines.append(raw)
        if not raw.startswith("#"):
            token_lines.append(line_no)
    if token_lines:
        yield "\n".join(lines) + "\n", token_lines


def _parse_block(block: str, token_lines: List[int]) -> SentenceAnnotation:
    first_line = token_lines[0]
    try:
        [sentence] = conllu.parse(block, field_parsers=_FIELD_PARSERS)
    except ParseException as e:
        raise FormatError(first_line, str(e))

    tokens, edges, roots = [], [], []
    for line_no, row in zip(token_lines, sentence):
        if any(field not in row for field in FIELDS):
            raise FormatError(line_no, "expected 10 tab-separated columns")
        if not isinstance(row["id"], int):
            continue
        if not row["form"]:
            raise FormatError(line_no, "FORM is empty")
        try:
            tokens.append(Token(index=row["id"], text=row["form"], lemma=row["lemma"], pos=row["upos"]))
        except ValueError as e:
            raise FormatError(line_no, str(e))
        head = row["head"]
        if head == "_":
            raise FormatError(line_no, f"token {row['id']} has no head")
        try:
            head_index = int(head)
        except ValueError:
            raise FormatError(line_no, f"HEAD must be an integer, got {head!r}")
        if head_index == 0:
            roots.append(row["id"])
        else:
            edges.append(Edge(head_index, row["id"], row["deprel"]))

    if not tokens:
        raise FormatError(first_line, "sentence has no tokens")
    if len(roots) != 1:
        raise FormatError(first_line, f"sentence must have exactly one root, found {len(roots)}")
    try:
        graph = DepGraph(tokens=tuple(tokens), edges=tuple(edges), root=roots[0])
    except ValueError as e:
        raise FormatError(first_line, str(e))
    text = sentence.metadata.get("text") or " ".join(t.text for t in tokens)
    return SentenceAnnotation(original_text=text, graph=graph)


def load_conllu(text: str) -> List[SentenceAnnotation]:
    """Parse CoNLL-U text into sentence annotations."""
    sentences = [_parse_block(block, token_lines) for block, token_lines in _blocks(text)]
    logger.debug("loaded %d CoNLL-U sentences", len(sentences))
    return sentences


def _token_list(ann: SentenceAnnotation) -> TokenList:
    graph = ann.graph
    rows = [
        ConlluToken(zip(FIELDS, (
            tok.index, tok.text, tok.lemma, tok.pos, None, None,
            graph.head_of(tok.index) or 0, graph.relation_of(tok.index), None, None,
        )))
        for tok in graph.tokens
    ]
    return TokenList(rows, metadata={"text": ann.original_text})


def dump_conllu(annotations: List[SentenceAnnotation]) -> str:
    """Write annotations back out; unconsumed columns are '_'."""
    return "".join(_token_list(ann).serialize() for ann in annotations)
