"""
The compiler pipeline: preprocess, categorize each fragment's verb, build its
signature, lower to A-IMP, and join the commands into one program.
"""
import json
import logging
import threading
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from aimp.annotations import SentenceAnnotation
from aimp.categorize import (
    ProgramState, build_signature, find_quantifiers,
    head_verb_of, infer_variable_name, select_candidates,
)
from aimp.config import PipelineConfig, load_config
from aimp.conllu import load_conllu
from aimp.embeddings import (
    EmbeddingTable, VerbClassifier, VerbDecision, VerbLexicon, load_embeddings,
)
from aimp.errors import (
    AimpError, CompileError, ConfigError, Diagnostic, TypeCheckError,
)
from aimp.language import (
    Program, Store, exec_cmd, format_number, print_cmd, program_to_json, seq_all,
    typecheck_cmd,
)
from aimp.numwords import DEFAULT_NUMBER_WORDS, load_numwords
from aimp.parser import RuleParser, TaggerLexicon
from aimp.preprocess import (
    Substitution, break_conjunctions, resolve_annotation_coreferences,
    resolve_coreferences, split_conjunctions, split_sentences,
)
from aimp.signatures import (
    assigned_addresses, lower, read_addresses, signature_to_json,
)

logger = logging.getLogger(__name__)

INTEGER_TOLERANCE = 1e-9


class QuantifierRecord(BaseModel):
    token_index: int
    text: str
    value: Optional[float] = None


class VariableRecord(BaseModel):
    subject: str
    object: str
    combined: str
    indirect: Optional[str] = None
    indirect_relation: Optional[str] = None


class StepRecord(BaseModel):
    """One quantifier's path from fragment to command."""

    quantifier: QuantifierRecord
    head_verb: Optional[str] = None
    variables: Optional[VariableRecord] = None
    candidates: List[str] = Field(default_factory=list)
    decision: Optional[VerbDecision] = None
    signature: Optional[Dict[str, Any]] = None
    command: Optional[str] = None


class FragmentRecord(BaseModel):
    fragment: str
    skipped: bool = False
    steps: List[StepRecord] = Field(default_factory=list)


class CompilationTrace(BaseModel):
    problem: str
    sentences: List[str] = Field(default_factory=list)
    substitutions: List[Substitution] = Field(default_factory=list)
    fragments: List[FragmentRecord] = Field(default_factory=list)
    diagnostics: List[Diagnostic] = Field(default_factory=list)


class Solution(NamedTuple):
    answers: List[float]
    program: Program
    trace: CompilationTrace


def format_answer(value: float) -> str:
    """Integral values within 1e-9 print as integers, others as decimals."""
    nearest = round(value)
    if abs(value - nearest) <= INTEGER_TOLERANCE:
        return str(int(nearest))
    return format_number(value)


def trace_comments(trace: CompilationTrace) -> List[str]:
    """The trace as `#` comment lines, so A-IMP output still parses."""
    dumped = json.dumps(trace.model_dump(mode="json"), indent=2)
    return [f"# {line}" for line in dumped.splitlines()]


def _is_question(fragment: SentenceAnnotation) -> bool:
    return "?" in fragment.original_text


class Compiler:
    """
    Holds the loaded resources for one configuration. The tagger lexicon is
    read up front; the verb lexicon and embeddings on first use.
    """

    def __init__(self, cfg: Optional[PipelineConfig] = None):
        self.cfg = cfg or load_config()
        try:
            self.tag_classes = self.cfg.tag_classes()
        except ValueError as e:
            raise ConfigError(str(e)) from e
        self.numwords = (
            load_numwords(self.cfg.numwords_path) if self.cfg.numwords_path else DEFAULT_NUMBER_WORDS
        )
        if not self.cfg.tagger_lexicon_path.is_file():
            raise ConfigError(f"tagger lexicon not found: {self.cfg.tagger_lexicon_path}")
        self.parser = RuleParser(TaggerLexicon.load(self.cfg.tagger_lexicon_path), self.numwords)
        self._lock = threading.Lock()
        self._lexicon: Optional[VerbLexicon] = None
        self._embeddings: Optional[EmbeddingTable] = None

    # resources

    def lexicon(self) -> VerbLexicon:
        with self._lock:
            if self._lexicon is None:
                path = self.cfg.lexicon_path
                if not path.is_file():
                    raise ConfigError(f"verb lexicon not found: {path}")
                self._lexicon = VerbLexicon.load(path)
            return self._lexicon

    def embeddings(self) -> EmbeddingTable:
        with self._lock:
            if self._embeddings is None:
                path = self.cfg.embeddings_path
                if not path.is_file():
                    raise ConfigError(f"embeddings not found: {path}")
                self._embeddings = load_embeddings(path)
            return self._embeddings

    def classify(self, lemma: str) -> VerbDecision:
        lexicon = self.lexicon()
        if lemma.lower() in lexicon:
            return VerbClassifier(lexicon, None).classify(lemma)
        return VerbClassifier(lexicon, self.embeddings()).classify(lemma)

    # stages

    def _fragments_from_text(self, problem: str, trace: CompilationTrace) -> List[SentenceAnnotation]:
        resolved = resolve_coreferences(split_sentences(problem), self.parser, self.tag_classes)
        trace.sentences = list(resolved.sentences)
        trace.substitutions = list(resolved.substitutions)
        trace.diagnostics.extend(resolved.diagnostics)

        fragments = []
        for sentence in resolved.sentences:
            try:
                ann = self.parser.parse_text(sentence)
                pieces = break_conjunctions(ann, self.tag_classes)
                fragments.extend(self.parser.parse_text(piece) for piece in pieces)
            except AimpError as e:
                raise CompileError(f"{type(e).__name__}: {e}", fragment=sentence, trace=trace) from e
        return fragments

    def _fragments_from_annotations(self, annotations: Sequence[SentenceAnnotation],
                                    trace: CompilationTrace) -> List[SentenceAnnotation]:
        resolved, substitutions, diagnostics = resolve_annotation_coreferences(annotations, self.tag_classes)
        trace.sentences = [ann.original_text for ann in resolved]
        trace.substitutions = substitutions
        trace.diagnostics.extend(diagnostics)
        fragments = []
        for ann in resolved:
            fragments.extend(split_conjunctions(ann, self.tag_classes))
        return fragments

    def _compile_fragment(self, fragment: SentenceAnnotation, record: FragmentRecord,
                          state: ProgramState, trace: CompilationTrace) -> List:
        graph = fragment.graph
        quantifiers = find_quantifiers(fragment, self.numwords, self.tag_classes)
        if not quantifiers:
            if _is_question(fragment):
                raise CompileError("question has no quantifier", fragment=fragment.original_text)
            record.skipped = True
            logger.warning("skipping fragment without a quantifier: %r", fragment.original_text)
            trace.diagnostics.append(Diagnostic(
                stage="categorize", code="no_quantifier",
                message="fragment has no quantifier and is not a question; skipped",
                fragment=fragment.original_text,
            ))
            return []

        commands = []
        for q in quantifiers:
            step = StepRecord(quantifier=QuantifierRecord(token_index=q.token_index, text=q.text, value=q.value))
            record.steps.append(step)
            verb = head_verb_of(q, graph)
            step.head_verb = graph.token(verb).lemma
            names = infer_variable_name(verb, graph, self.tag_classes)
            step.variables = VariableRecord(
                subject=names.subject, object=names.object, combined=names.combined,
                indirect=names.indirect, indirect_relation=names.indirect_relation,
            )
            candidates = select_candidates(fragment, q, names, state, graph, self.tag_classes)
            step.candidates = list(candidates.names)
            polarity = None
            if candidates.needs_polarity:
                step.decision = self.classify(step.head_verb)
                polarity = step.decision.polarity
            signature = build_signature(candidates, polarity, names, q)
            step.signature = signature_to_json(signature)

            for address in read_addresses(signature):
                if address not in state.declared:
                    logger.warning("%s reads undeclared address %s", candidates.names[0], address)
                    trace.diagnostics.append(Diagnostic(
                        stage="categorize", code="undeclared_address",
                        message=f"{address} is read before any observation; it starts at 0",
                        fragment=fragment.original_text,
                    ))
            command = lower(signature)
            state.declare(assigned_addresses(signature))
            step.command = print_cmd(command)
            commands.append(command)
            logger.debug("%r -> %s", fragment.original_text, step.command)
        return commands

    # entry points

    def compile(self, problem: str,
                annotations: Optional[Sequence[SentenceAnnotation]] = None) -> Tuple[Program, CompilationTrace]:
        """
        Compile a word problem. With `annotations` (parsed CoNLL-U) the given
        parses replace sentence splitting and the built-in parser.
        """
        trace = CompilationTrace(problem=problem)
        if annotations is None and self.cfg.conllu_path is not None:
            annotations = load_conllu(self.cfg.conllu_path.read_text(encoding="utf-8"))
        if annotations is not None:
            if not annotations:
                raise CompileError("EmptyProblem: no sentences to compile", trace=trace)
            fragments = self._fragments_from_annotations(annotations, trace)
        else:
            if not problem.strip():
                raise CompileError("EmptyProblem: no sentences to compile", trace=trace)
            fragments = self._fragments_from_text(problem, trace)

        state = ProgramState()
        commands = []
        for fragment in fragments:
            record = FragmentRecord(fragment=fragment.original_text)
            trace.fragments.append(record)
            try:
                commands.extend(self._compile_fragment(fragment, record, state, trace))
            except CompileError as e:
                e.trace = trace
                raise
            except ConfigError:
                raise
            except (AimpError, ValueError) as e:
                raise CompileError(
                    f"{type(e).__name__}: {e}", fragment=fragment.original_text, trace=trace,
                ) from e

        program = Program(seq_all(commands))
        try:
            typecheck_cmd(program.root)
        except TypeCheckError as e:
            raise CompileError(f"emitted program does not typecheck: {e}", trace=trace) from e
        return program, trace

    def solve(self, problem: str,
              annotations: Optional[Sequence[SentenceAnnotation]] = None) -> Solution:
        program, trace = self.compile(problem, annotations)
        result = exec_cmd(Store(), program.root)
        for diagnostic in result.diagnostics:
            trace.diagnostics.append(diagnostic)
        return Solution(list(result.outputs), program, trace)


def compile(problem: str, cfg: Optional[PipelineConfig] = None) -> Tuple[Program, CompilationTrace]:
    return Compiler(cfg).compile(problem)


def solve(problem: str, cfg: Optional[PipelineConfig] = None) -> Solution:
    return Compiler(cfg).solve(problem)


def solution_to_json(program: Program, trace: CompilationTrace,
                     answers: Optional[List[float]] = None) -> Dict[str, Any]:
    """The `--emit json` document: program, trace and answers."""
    return {
        "program": program_to_json(program),
        "trace": trace.model_dump(mode="json"),
        "answers": answers,
    }
