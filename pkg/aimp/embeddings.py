"""
Word vectors, the annotated verb lexicon, and polarity disambiguation by
cosine similarity against the annotated verbs.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Union

import numpy as np
from gensim.models import KeyedVectors
from pydantic import BaseModel

from aimp.errors import DimensionMismatch, FormatError, UnknownVerb, ZeroVector

logger = logging.getLogger(__name__)

UNIT_TOLERANCE = 1e-6


class Polarity(str, Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"

    @classmethod
    def parse(cls, text: str) -> "Polarity":
        key = text.strip().lower()
        if key == "positive":
            return cls.POSITIVE
        if key == "negative":
            return cls.NEGATIVE
        raise ValueError(f"polarity must be 'positive' or 'negative', got {text!r}")


def cosine_similarity(v1, v2) -> float:
    a = np.asarray(v1, dtype=np.float64)
    b = np.asarray(v2, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"cannot compare vectors of shape {a.shape} and {b.shape}")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    return float(np.clip(np.dot(a, b) / (norm_a * norm_b), -1.0, 1.0))


class EmbeddingTable:
    """Unit-normalized word vectors over gensim KeyedVectors."""

    def __init__(self, vectors: Union[KeyedVectors, Mapping[str, Iterable[float]]]):
        kv = vectors if isinstance(vectors, KeyedVectors) else _keyed_vectors(vectors)
        if len(kv) == 0:
            raise ValueError("an embedding table needs at least one word")
        if kv.vector_size <= 0:
            raise DimensionMismatch("all vectors must share one positive dimension")
        norms = np.linalg.norm(kv.vectors, axis=1)
        if np.any(norms == 0.0):
            zero = kv.index_to_key[int(np.argmin(norms))]
            raise ZeroVector(f"vector for {zero!r} is zero")
        self._kv = kv
        self._unit = np.asarray(kv.get_normed_vectors(), dtype=np.float64)
        self._unit.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self._kv.vector_size

    def __contains__(self, word: str) -> bool:
        return word in self._kv.key_to_index

    def __len__(self) -> int:
        return len(self._kv)

    def __getitem__(self, word: str) -> np.ndarray:
        return self._unit[self._kv.key_to_index[word]]

    def words(self) -> List[str]:
        return list(self._kv.index_to_key)

    def similarity(self, first: str, second: str) -> float:
        # rows are unit length
        return float(np.clip(np.dot(self[first], self[second]), -1.0, 1.0))


def _keyed_vectors(vectors: Mapping[str, Iterable[float]]) -> KeyedVectors:
    words = list(vectors)
    if not words:
        raise ValueError("an embedding table needs at least one word")
    try:
        matrix = np.array([np.asarray(list(vectors[w]), dtype=np.float64) for w in words])
    except ValueError:
        raise DimensionMismatch("all vectors must share one positive dimension")
    if matrix.ndim != 2 or matrix.shape[1] == 0:
        raise DimensionMismatch("all vectors must share one positive dimension")
    kv = KeyedVectors(matrix.shape[1], dtype=np.float64)
    kv.add_vectors(words, matrix)
    return kv


def load_embeddings(path: Path) -> EmbeddingTable:
    """Read word2vec text format: a `<count> <dimension>` header, then `word v1 ... vd` lines."""
    try:
        kv = KeyedVectors.load_word2vec_format(str(path), binary=False, datatype=np.float64)
    except (ValueError, EOFError, UnicodeDecodeError) as e:
        raise FormatError(None, f"not a word2vec text file: {e}")
    if kv.vector_size <= 0:
        raise FormatError(1, "dimension must be positive")
    if len(kv) == 0:
        raise FormatError(1, "no vectors in embeddings file")
    if not np.isfinite(kv.vectors).all():
        raise FormatError(None, "vector values must be finite")
    zero_rows = np.flatnonzero(~kv.vectors.any(axis=1))
    if zero_rows.size:
        row = int(zero_rows[0])
        raise FormatError(row + 2, f"zero vector for {kv.index_to_key[row]!r}")
    logger.debug("loaded %d vectors of dimension %d from %s", len(kv), kv.vector_size, path)
    return EmbeddingTable(kv)


@dataclass(frozen=True)
class VerbLexicon:
    """Annotated seed verbs: lowercase lemma to polarity."""

    entries: Mapping[str, Polarity] = field(default_factory=dict)

    def __post_init__(self):
        checked = {}
        for lemma, polarity in self.entries.items():
            if lemma != lemma.lower():
                raise ValueError(f"lexicon lemmas must be lowercase, got {lemma!r}")
            checked[lemma] = Polarity(polarity)
        object.__setattr__(self, "entries", checked)

    @classmethod
    def load(cls, path: Path) -> "VerbLexicon":
        entries: Dict[str, Polarity] = {}
        for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(line_no, "expected verb<TAB>positive|negative")
            lemma = parts[0].strip().lower()
            try:
                polarity = Polarity.parse(parts[1])
            except ValueError as e:
                raise FormatError(line_no, str(e))
            if lemma in entries and entries[lemma] is not polarity:
                raise FormatError(line_no, f"{lemma!r} is annotated both positive and negative")
            entries[lemma] = polarity
        logger.debug("loaded %d annotated verbs from %s", len(entries), path)
        return cls(entries)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, lemma: str) -> Optional[Polarity]:
        return self.entries.get(lemma)

    def without(self, *lemmas: str) -> "VerbLexicon":
        dropped = set(lemmas)
        return VerbLexicon({w: p for w, p in self.entries.items() if w not in dropped})


class VerbDecision(BaseModel):
    """How a verb's polarity was decided. `source` is "lexicon" or "similarity"."""

    lemma: str
    polarity: Polarity
    source: str
    nearest: Optional[str] = None
    similarity: Optional[float] = None
    scores: Dict[str, float] = {}


class VerbClassifier:
    def __init__(self, lexicon: VerbLexicon, embeddings: Optional[EmbeddingTable]):
        self.lexicon = lexicon
        self.embeddings = embeddings

    def classify(self, lemma: str) -> VerbDecision:
        lemma = lemma.lower()
        annotated = self.lexicon.get(lemma)
        if annotated is not None:
            return VerbDecision(lemma=lemma, polarity=annotated, source="lexicon")
        if self.embeddings is None or lemma not in self.embeddings:
            raise UnknownVerb(f"no embedding for verb {lemma!r}")
        candidates = sorted(w for w in self.lexicon.entries if w in self.embeddings and w != lemma)
        if not candidates:
            raise UnknownVerb("no annotated verb has an embedding")

        query = self.embeddings[lemma]
        matrix = np.stack([self.embeddings[w] for w in candidates])
        sims = np.clip(matrix @ query, -1.0, 1.0)
        scores = {w: float(s) for w, s in zip(candidates, sims)}
        best = min(candidates, key=lambda w: (
            -scores[w], self.lexicon.entries[w] is not Polarity.POSITIVE, w,
        ))
        logger.debug("verb %r nearest annotated verb %r (%.4f)", lemma, best, scores[best])
        return VerbDecision(
            lemma=lemma, polarity=self.lexicon.entries[best], source="similarity",
            nearest=best, similarity=scores[best], scores=scores,
        )


def classify_verb(lemma: str, lexicon: VerbLexicon, embeddings: Optional[EmbeddingTable]) -> Polarity:
    return VerbClassifier(lexicon, embeddings).classify(lemma).polarity


class HeldOutEntry(BaseModel):
    verb: str
    annotated: Polarity
    predicted: Polarity
    nearest: str
    similarity: float
    correct: bool


class HeldOutReport(BaseModel):
    entries: List[HeldOutEntry]
    skipped: List[str]
    correct: int
    total: int
    accuracy: float
    fraction: Optional[float] = None
    seed: Optional[int] = None


def _held_out_entry(verb: str, annotated: Polarity, training: VerbLexicon,
                    embeddings: EmbeddingTable) -> HeldOutEntry:
    decision = VerbClassifier(training, embeddings).classify(verb)
    return HeldOutEntry(
        verb=verb, annotated=annotated, predicted=decision.polarity,
        nearest=decision.nearest, similarity=decision.similarity,
        correct=decision.polarity is annotated,
    )


def _report(entries: List[HeldOutEntry], skipped: List[str], **extra) -> HeldOutReport:
    correct = sum(1 for e in entries if e.correct)
    total = len(entries)
    return HeldOutReport(
        entries=entries, skipped=skipped, correct=correct, total=total,
        accuracy=correct / total if total else 0.0, **extra,
    )


def leave_one_out(lexicon: VerbLexicon, embeddings: EmbeddingTable) -> HeldOutReport:
    """
    Hold out each annotated verb that has an embedding and classify it against
    the remaining annotations. Verbs without an embedding are listed as skipped.
    """
    entries: List[HeldOutEntry] = []
    skipped: List[str] = []
    for verb in sorted(lexicon.entries):
        if verb not in embeddings:
            skipped.append(verb)
            continue
        entries.append(_held_out_entry(verb, lexicon.entries[verb], lexicon.without(verb), embeddings))
    return _report(entries, skipped)


def holdout(lexicon: VerbLexicon, embeddings: EmbeddingTable,
            fraction: float = 0.3, seed: int = 0) -> HeldOutReport:
    """
    Sample `fraction` of the embedded annotated verbs, the same share from
    each polarity, and classify every sampled verb against the rest.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"held-out fraction must be between 0 and 1, got {fraction}")
    rng = np.random.default_rng(seed)
    skipped = sorted(w for w in lexicon.entries if w not in embeddings)
    held: List[str] = []
    for polarity in Polarity:
        verbs = sorted(w for w, p in lexicon.entries.items() if p is polarity and w in embeddings)
        if not verbs:
            continue
        size = min(len(verbs), max(1, int(round(fraction * len(verbs)))))
        held.extend(str(w) for w in rng.choice(verbs, size=size, replace=False))
    training = lexicon.without(*held)
    logger.debug("holding out %d of %d annotated verbs (seed %d)", len(held), len(lexicon), seed)
    entries = [
        _held_out_entry(verb, lexicon.entries[verb], training, embeddings)
        for verb in sorted(held)
    ]
    return _report(entries, skipped, fraction=fraction, seed=seed)
