"""
NLP feature bundle read by every heuristic: tokens, dependency graphs,
and the generalized relation classes used for argument extraction.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

VERB_UPOS = frozenset({"VERB", "AUX"})


@dataclass(frozen=True)
class Token:
    index: int
    text: str
    lemma: str
    pos: str

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"Token index must be 1-based, got {self.index}")
        if not self.text:
            raise ValueError(f"Token {self.index} has empty text")

    @property
    def is_verb(self) -> bool:
        return self.pos.startswith("VB") or self.pos in VERB_UPOS


@dataclass(frozen=True)
class Edge:
    head: int
    dependent: int
    relation: str


@dataclass(frozen=True)
class DepGraph:
    """
    A dependency graph. Every token but the root has exactly one head;
    the graph is acyclic.
    """

    tokens: Tuple[Token, ...]
    edges: Tuple[Edge, ...]
    root: int
    _heads: Dict[int, Edge] = field(init=False, repr=False, compare=False, hash=False)
    _children: Dict[int, List[Edge]] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "edges", tuple(self.edges))
        indices = [t.index for t in self.tokens]
        if len(set(indices)) != len(indices):
            raise ValueError("Token indices must be unique within a sentence")
        known = set(indices)
        if self.root not in known:
            raise ValueError(f"Root {self.root} is not a token index")

        heads: Dict[int, Edge] = {}
        children: Dict[int, List[Edge]] = {i: [] for i in indices}
        for edge in self.edges:
            if edge.head not in known or edge.dependent not in known:
                raise ValueError(f"Edge {edge} references an unknown token")
            if edge.dependent in heads:
                raise ValueError(f"Token {edge.dependent} has more than one head")
            heads[edge.dependent] = edge
            children[edge.head].append(edge)
        if self.root in heads:
            raise ValueError("The root may not have a head")
        missing = known - set(heads) - {self.root}
        if missing:
            raise ValueError(f"Tokens without a head: {sorted(missing)}")

        for start in indices:
            seen = {start}
            node = start
            while node in heads:
                node = heads[node].head
                if node in seen:
                    raise ValueError(f"Dependency cycle through token {node}")
                seen.add(node)

        for edges in children.values():
            edges.sort(key=lambda e: e.dependent)
        object.__setattr__(self, "_heads", heads)
        object.__setattr__(self, "_children", children)

    def token(self, index: int) -> Token:
        for tok in self.tokens:
            if tok.index == index:
                return tok
        raise KeyError(index)

    def head_of(self, index: int) -> Optional[int]:
        edge = self._heads.get(index)
        return edge.head if edge else None

    def relation_of(self, index: int) -> str:
        edge = self._heads.get(index)
        return edge.relation if edge else "root"

    def dependents(self, index: int) -> List[Edge]:
        return list(self._children.get(index, ()))

    def subtree(self, index: int) -> List[int]:
        """All token indices dominated by `index` (inclusive), in token order."""
        result, stack = [], [index]
        while stack:
            node = stack.pop()
            result.append(node)
            stack.extend(e.dependent for e in self._children.get(node, ()))
        return sorted(result)

    def text(self) -> str:
        return " ".join(t.text for t in self.tokens)


@dataclass(frozen=True)
class SentenceAnnotation:
    original_text: str
    graph: DepGraph


class RelationClass(str, Enum):
    SUBJECT_LIKE = "SubjectLike"
    DIRECT_OBJECT_LIKE = "DirectObjectLike"
    INDIRECT_OBJECT_LIKE = "IndirectObjectLike"
    MODIFIER_LIKE = "ModifierLike"
    OTHER = "Other"


@dataclass(frozen=True)
class TagClassConfig:
    """Generalizations over fine-grained dependency labels. The four sets are disjoint."""

    subject_like: FrozenSet[str] = frozenset({"nsubj", "nsubj:pass", "nsubjpass"})
    direct_object_like: FrozenSet[str] = frozenset({"dobj", "obj"})
    indirect_object_like: FrozenSet[str] = frozenset({
        "iobj", "nmod", "obl", "nmod:to", "nmod:from", "obl:to", "obl:from",
    })
    modifier_like: FrozenSet[str] = frozenset({"nmod:poss", "poss", "amod", "compound", "nn"})

    def __post_init__(self):
        groups = {}
        for name in ("subject_like", "direct_object_like", "indirect_object_like", "modifier_like"):
            labels = frozenset(getattr(self, name))
            object.__setattr__(self, name, labels)
            groups[name] = labels
        names = list(groups)
        for i, first in enumerate(names):
            for second in names[i + 1:]:
                overlap = groups[first] & groups[second]
                if overlap:
                    raise ValueError(
                        f"Tag classes {first} and {second} overlap on {sorted(overlap)}"
                    )

    def with_overrides(self, overrides: Mapping[str, Iterable[str]]) -> "TagClassConfig":
        """Replace whole classes, e.g. {"modifier_like": ["amod", "compound"]}."""
        values = {
            "subject_like": self.subject_like,
            "direct_object_like": self.direct_object_like,
            "indirect_object_like": self.indirect_object_like,
            "modifier_like": self.modifier_like,
        }
        for name, labels in overrides.items():
            if name not in values:
                raise ValueError(f"Unknown tag class: {name}")
            values[name] = frozenset(labels)
        return TagClassConfig(**values)


DEFAULT_TAG_CLASSES = TagClassConfig()


def classify_relation(label: str, cfg: TagClassConfig = DEFAULT_TAG_CLASSES) -> RelationClass:
    if label in cfg.subject_like:
        return RelationClass.SUBJECT_LIKE
    if label in cfg.direct_object_like:
        return RelationClass.DIRECT_OBJECT_LIKE
    if label in cfg.indirect_object_like:
        return RelationClass.INDIRECT_OBJECT_LIKE
    if label in cfg.modifier_like:
        return RelationClass.MODIFIER_LIKE
    return RelationClass.OTHER
