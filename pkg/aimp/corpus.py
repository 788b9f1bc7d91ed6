"""
Corpus runner: compile and solve every problem in a `---`-separated corpus
and compare the printed answers with the EXPECTED lines.
"""
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import BaseModel, Field

from aimp.config import PipelineConfig, load_config
from aimp.errors import AimpError, CompileError, ConfigError, Diagnostic, FormatError
from aimp.pipeline import CompilationTrace, Compiler, INTEGER_TOLERANCE, format_answer, trace_comments
from aimp.results_db import ProblemStatus

logger = logging.getLogger(__name__)

SEPARATOR = "---"
EXPECTED_PREFIX = "EXPECTED:"


class CorpusProblem(BaseModel):
    index: int
    text: str
    expected: Optional[List[float]] = None
    line: int = 1


STATUS_MARKERS = {
    ProblemStatus.PASS: "✅", ProblemStatus.FAIL: "❌",
    ProblemStatus.ERROR: "⚠️", ProblemStatus.UNCHECKED: "•",
}

class ProblemResult(BaseModel):
    index: int
    problem: str
    expected: Optional[List[float]] = None
    answers: List[float] = Field(default_factory=list)
    status: ProblemStatus
    error: Optional[str] = None
    diagnostics: List[Diagnostic] = Field(default_factory=list)
    trace: Optional[CompilationTrace] = None


class CorpusReport(BaseModel):
    corpus: str
    results: List[ProblemResult] = Field(default_factory=list)
    total: int = 0
    passed: int = 0
    failed: int = 0
    errors: int = 0
    unchecked: int = 0
    accuracy: float = 0.0

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


def _parse_expected(text: str, line_no: int) -> List[float]:
    values = [v for v in re.split(r"[,\s]+", text.strip()) if v]
    try:
        return [float(v) for v in values]
    except ValueError:
        raise FormatError(line_no, f"EXPECTED must list numbers, got {text.strip()!r}")


def parse_corpus(text: str) -> List[CorpusProblem]:
    """Problems separated by `---` lines; `#` lines are comments."""
    problems: List[CorpusProblem] = []
    lines: List[str] = []
    expected: Optional[List[float]] = None
    start = 1

    def flush(end_line: int):
        body = " ".join(lines).strip()
        if body:
            problems.append(CorpusProblem(index=len(problems) + 1, text=body, expected=expected, line=start))
        elif expected is not None:
            raise FormatError(end_line, "EXPECTED line without a problem")

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line == SEPARATOR:
            flush(line_no)
            lines, expected, start = [], None, line_no + 1
        elif not line or line.startswith("#"):
            continue
        elif line.upper().startswith(EXPECTED_PREFIX):
            if expected is not None:
                raise FormatError(line_no, "more than one EXPECTED line")
            expected = _parse_expected(line[len(EXPECTED_PREFIX):], line_no)
        else:
            if not lines:
                start = line_no
            lines.append(line)
    flush(len(text.splitlines()))
    return problems


def answers_match(answers: Sequence[float], expected: Sequence[float]) -> bool:
    if len(answers) != len(expected):
        return False
    return all(abs(a - e) <= INTEGER_TOLERANCE for a, e in zip(answers, expected))


def evaluate_problem(compiler: Compiler, problem: CorpusProblem) -> ProblemResult:
    result = ProblemResult(index=problem.index, problem=problem.text,
                           expected=problem.expected, status=ProblemStatus.UNCHECKED)
    try:
        solution = compiler.solve(problem.text)
    except ConfigError:
        raise
    except AimpError as e:
        trace = getattr(e, "trace", None) if isinstance(e, CompileError) else None
        result.error = f"{type(e).__name__}: {e}"
        result.diagnostics = list(trace.diagnostics) if trace is not None else []
        if compiler.cfg.trace:
            result.trace = trace
        result.status = ProblemStatus.ERROR if problem.expected is None else ProblemStatus.FAIL
        logger.info("problem %d failed: %s", problem.index, result.error)
        return result

    result.answers = solution.answers
    result.diagnostics = solution.trace.diagnostics
    if compiler.cfg.trace:
        result.trace = solution.trace
    if problem.expected is not None:
        matched = answers_match(solution.answers, problem.expected)
        result.status = ProblemStatus.PASS if matched else ProblemStatus.FAIL
    return result


def _read_corpus(path: Path) -> List[CorpusProblem]:
    if path.is_dir():
        problems: List[CorpusProblem] = []
        for file in sorted(path.glob("*.txt")):
            for problem in parse_corpus(file.read_text(encoding="utf-8")):
                problems.append(problem.model_copy(update={"index": len(problems) + 1}))
        return problems
    return parse_corpus(path.read_text(encoding="utf-8"))


def run_corpus(path: Path, cfg: Optional[PipelineConfig] = None,
               compiler: Optional[Compiler] = None) -> CorpusReport:
    """
    Compile and solve every problem under `path` (a corpus file, or a
    directory of them). Per-problem failures are recorded in the report.
    """
    cfg = cfg or load_config()
    compiler = compiler or Compiler(cfg)
    problems = _read_corpus(Path(path))
    logger.info("running %d problems from %s with %d worker(s)", len(problems), path, cfg.workers)

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        results = list(pool.map(lambda p: evaluate_problem(compiler, p), problems))

    passed = sum(1 for r in results if r.status is ProblemStatus.PASS)
    failed = sum(1 for r in results if r.status is ProblemStatus.FAIL)
    errors = sum(1 for r in results if r.status is ProblemStatus.ERROR)
    unchecked = sum(1 for r in results if r.status is ProblemStatus.UNCHECKED)
    checked = passed + failed
    return CorpusReport(
        corpus=str(path), results=results, total=len(results),
        passed=passed, failed=failed, errors=errors, unchecked=unchecked,
        accuracy=passed / checked if checked else 0.0,
    )


def format_report(report: CorpusReport) -> List[str]:
    """Human-readable report lines."""
    lines = []
    for r in report.results:
        answers = ", ".join(format_answer(a) for a in r.answers) or "-"
        line = f"{STATUS_MARKERS[r.status]} [{r.index}] {r.status.value}: {answers}"
        if r.expected is not None and r.status is not ProblemStatus.PASS:
            line += f" (expected {', '.join(format_answer(e) for e in r.expected) or '-'})"
        if r.error:
            line += f" {r.error}"
        lines.append(line)
        if r.trace is not None:
            lines.extend(trace_comments(r.trace))
    lines.append(
        f"📊 {report.passed}/{report.passed + report.failed} passed, "
        f"{report.errors} error(s), {report.unchecked} unchecked, accuracy {report.accuracy:.2%}"
    )
    return lines
