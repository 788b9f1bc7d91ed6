"""
Command-line interface: compile, run, corpus, loo and history.

Exit codes: 0 success, 1 corpus answer mismatch, 2 compile or evaluation
error, 3 usage or configuration error.
"""
import json
import logging
from enum import Enum
from pathlib import Path
from typing import List, Optional

import typer
from typer._click.types import FloatRange

from aimp.config import PipelineConfig, describe, load_config
from aimp.corpus import STATUS_MARKERS, format_report, run_corpus
from aimp.embeddings import VerbLexicon, holdout, leave_one_out, load_embeddings
from aimp.errors import AimpError, CompileError, ConfigError, EvalError
from aimp.language import print_program
from aimp.pipeline import Compiler, format_answer, solution_to_json, trace_comments
from aimp.results_db import ProblemStatus, ResultsDatabase

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_COMPILE = 2
EXIT_USAGE = 3

app = typer.Typer(
    name="aimp",
    help="Compile grade-school word problems into A-IMP programs and run them.",
    add_completion=False,
    no_args_is_help=True,
)


class Emit(str, Enum):
    aimp = "aimp"
    json = "json"


class ReportFormat(str, Enum):
    text = "text"
    json = "json"


ConlluOption = typer.Option(None, "--conllu", help="CoNLL-U parses to use instead of the built-in parser.")
EmbeddingsOption = typer.Option(None, "--embeddings", help="word2vec text-format embeddings.")
LexiconOption = typer.Option(None, "--lexicon", help="Annotated verb lexicon (verb<TAB>positive|negative).")
EmitOption = typer.Option(Emit.aimp, "--emit", help="Output format.")
TraceOption = typer.Option(None, "--trace/--no-trace", help="Include the compilation trace.")
VerboseOption = typer.Option(False, "--verbose", "-v", help="Log pipeline stages to stderr.")


def _setup_logging(verbose: bool, cfg: Optional[PipelineConfig] = None) -> None:
    name = "DEBUG" if verbose else (cfg.log_level if cfg else "WARNING")
    level = getattr(logging, name.upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def _fail(message: str, code: int) -> typer.Exit:
    typer.echo(f"❌ {message}", err=True)
    return typer.Exit(code)


def _config(verbose: bool, **overrides) -> PipelineConfig:
    try:
        cfg = load_config(**overrides)
    except ConfigError as e:
        raise _fail(f"Configuration error: {e}", EXIT_USAGE)
    _setup_logging(verbose, cfg)
    if verbose:
        typer.echo(describe(cfg), err=True)
    return cfg


def _read_problem(file: Path) -> str:
    if not file.is_file():
        raise _fail(f"No such file: {file}", EXIT_USAGE)
    return file.read_text(encoding="utf-8").strip()


def _compile_and_emit(file: Path, conllu: Optional[Path], embeddings: Optional[Path],
                      lexicon: Optional[Path], emit: Emit, trace: Optional[bool],
                      verbose: bool, run: bool) -> None:
    problem = _read_problem(file)
    cfg = _config(verbose, conllu_path=conllu, embeddings_path=embeddings,
                  lexicon_path=lexicon, trace=trace)
    try:
        compiler = Compiler(cfg)
        if run:
            answers, program, compiled_trace = compiler.solve(problem)
        else:
            program, compiled_trace = compiler.compile(problem)
            answers = None
    except ConfigError as e:
        raise _fail(f"Configuration error: {e}", EXIT_USAGE)
    except CompileError as e:
        if cfg.trace and e.trace is not None:
            for line in trace_comments(e.trace):
                typer.echo(line, err=True)
        raise _fail(f"Compile error: {e}", EXIT_COMPILE)
    except EvalError as e:
        raise _fail(f"Evaluation error: {e}", EXIT_COMPILE)
    except AimpError as e:
        raise _fail(f"{type(e).__name__}: {e}", EXIT_COMPILE)

    if emit is Emit.json:
        typer.echo(json.dumps(solution_to_json(program, compiled_trace, answers), indent=2))
        return

    typer.echo(print_program(program))
    if answers is not None:
        for value in answers:
            typer.echo(format_answer(value))
    if cfg.trace:
        for line in trace_comments(compiled_trace):
            typer.echo(line)
    for diagnostic in compiled_trace.diagnostics:
        typer.echo(f"⚠️ {diagnostic.stage}/{diagnostic.code}: {diagnostic.message}", err=True)


@app.command("compile")
def compile_command(
    file: Path = typer.Argument(..., help="Word problem text file."),
    conllu: Optional[Path] = ConlluOption,
    embeddings: Optional[Path] = EmbeddingsOption,
    lexicon: Optional[Path] = LexiconOption,
    emit: Emit = EmitOption,
    trace: Optional[bool] = TraceOption,
    verbose: bool = VerboseOption,
):
    """Compile a word problem and print the A-IMP program."""
    _compile_and_emit(file, conllu, embeddings, lexicon, emit, trace, verbose, run=False)


@app.command("run")
def run_command(
    file: Path = typer.Argument(..., help="Word problem text file."),
    conllu: Optional[Path] = ConlluOption,
    embeddings: Optional[Path] = EmbeddingsOption,
    lexicon: Optional[Path] = LexiconOption,
    emit: Emit = EmitOption,
    trace: Optional[bool] = TraceOption,
    verbose: bool = VerboseOption,
):
    """Compile a word problem, execute it, and print the program and its answers."""
    _compile_and_emit(file, conllu, embeddings, lexicon, emit, trace, verbose, run=True)


@app.command("corpus")
def corpus_command(
    path: Path = typer.Argument(..., help="Corpus file, or a directory of *.txt corpus files."),
    embeddings: Optional[Path] = EmbeddingsOption,
    lexicon: Optional[Path] = LexiconOption,
    emit: ReportFormat = typer.Option(ReportFormat.text, "--emit", help="Report format."),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Problems solved in parallel."),
    db: Optional[Path] = typer.Option(None, "--db", help="SQLite file to record the run in."),
    trace: Optional[bool] = TraceOption,
    verbose: bool = VerboseOption,
):
    """Solve every problem in a corpus and compare with the EXPECTED answers."""
    if not path.exists():
        raise _fail(f"No such corpus: {path}", EXIT_USAGE)
    cfg = _config(verbose, embeddings_path=embeddings, lexicon_path=lexicon,
                  workers=workers, results_db=db, trace=trace)
    try:
        report = run_corpus(path, cfg)
    except ConfigError as e:
        raise _fail(f"Configuration error: {e}", EXIT_USAGE)
    except AimpError as e:
        raise _fail(f"Cannot read corpus: {e}", EXIT_USAGE)

    if cfg.results_db is not None:
        run_id = ResultsDatabase(cfg.results_db).record_run(report)
        typer.echo(f"📁 Recorded run {run_id} in {cfg.results_db}", err=True)

    if emit is ReportFormat.json:
        typer.echo(json.dumps(report.model_dump(mode="json"), indent=2))
    else:
        for line in format_report(report):
            typer.echo(line)
    raise typer.Exit(report.exit_code)


@app.command("loo")
def loo_command(
    embeddings: Optional[Path] = EmbeddingsOption,
    lexicon: Optional[Path] = LexiconOption,
    emit: ReportFormat = typer.Option(ReportFormat.text, "--emit", help="Report format."),
    held_out: Optional[float] = typer.Option(
        None, "--holdout", click_type=FloatRange(0.0, 1.0, min_open=True, max_open=True),
        help="Classify a polarity-balanced sample of this share of the verbs instead.",
    ),
    seed: int = typer.Option(0, "--seed", help="Sampling seed for --holdout."),
    verbose: bool = VerboseOption,
):
    """Leave-one-out (or sampled held-out) classification of the annotated verbs."""
    cfg = _config(verbose, embeddings_path=embeddings, lexicon_path=lexicon)
    for label, path in (("verb lexicon", cfg.lexicon_path), ("embeddings", cfg.embeddings_path)):
        if not path.is_file():
            raise _fail(f"Configuration error: {label} not found: {path}", EXIT_USAGE)
    try:
        verbs, table = VerbLexicon.load(cfg.lexicon_path), load_embeddings(cfg.embeddings_path)
        if held_out is None:
            report = leave_one_out(verbs, table)
        else:
            report = holdout(verbs, table, fraction=held_out, seed=seed)
    except AimpError as e:
        raise _fail(f"{type(e).__name__}: {e}", EXIT_USAGE)

    if emit is ReportFormat.json:
        typer.echo(json.dumps(report.model_dump(mode="json"), indent=2))
        return
    for entry in report.entries:
        marker = "✅" if entry.correct else "❌"
        typer.echo(f"{marker} {entry.verb}: {entry.predicted.value} via {entry.nearest} "
                   f"({entry.similarity:.4f}), annotated {entry.annotated.value}")
    for verb in report.skipped:
        typer.echo(f"⚠️ {verb}: no embedding, skipped")
    typer.echo(f"📊 {report.correct}/{report.total} correct, accuracy {report.accuracy:.2%}")


@app.command("history")
def history_command(
    db: Optional[Path] = typer.Option(None, "--db", help="SQLite file holding recorded runs (default AIMP_RESULTS_DB)."),
    run: Optional[int] = typer.Option(None, "--run", help="Show one run's problem results."),
    status: Optional[ProblemStatus] = typer.Option(None, "--status", help="Only results with this status (with --run)."),
    clear: bool = typer.Option(False, "--clear", help="Delete every recorded run."),
    yes: bool = typer.Option(False, "--yes", "-y", help="Do not ask before --clear."),
    emit: ReportFormat = typer.Option(ReportFormat.text, "--emit", help="Report format."),
    verbose: bool = VerboseOption,
):
    """Show, or clear, the corpus runs recorded with --db."""
    cfg = _config(verbose, results_db=db)
    if cfg.results_db is None:
        raise _fail("No results database: pass --db or set AIMP_RESULTS_DB", EXIT_USAGE)
    if not cfg.results_db.is_file():
        raise _fail(f"No such results database: {cfg.results_db}", EXIT_USAGE)
    database = ResultsDatabase(cfg.results_db)

    if clear:
        if not yes:
            typer.confirm(f"Delete every run recorded in {cfg.results_db}?", abort=True)
        database.clear_all_data()
        typer.echo(f"🗑️ Cleared {cfg.results_db}")
        return

    if run is None:
        metrics = database.get_metrics()
        if emit is ReportFormat.json:
            typer.echo(json.dumps(metrics, indent=2))
            return
        latest = metrics["latest_accuracy"]
        accuracy = "-" if latest is None else f"{latest:.2%}"
        typer.echo(f"📊 {metrics['total_runs']} run(s), {metrics['total_problems']} problem(s), "
                   f"{metrics['passed']} passed, {metrics['failed']} failed, latest accuracy {accuracy}")
        return

    rows = database.get_run_results(run, status)
    if emit is ReportFormat.json:
        typer.echo(json.dumps(rows, indent=2))
        return
    if not rows:
        typer.echo(f"⚠️ No results for run {run}")
    for row in rows:
        answers = ", ".join(format_answer(a) for a in row["answers"]) or "-"
        line = f"{STATUS_MARKERS[ProblemStatus(row['status'])]} [{row['problem_index']}] {row['status']}: {answers}"
        if row["error"]:
            line += f" {row['error']}"
        typer.echo(line)


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point mapping usage errors and aborts to exit status 3."""
    command = typer.main.get_command(app)
    try:
        result = command.main(args=argv, prog_name="aimp", standalone_mode=False)
    except typer.Abort:
        typer.echo("Aborted!", err=True)
        return EXIT_USAGE
    except Exception as e:
        # usage errors come from the click that typer bundles
        if not (callable(getattr(e, "show", None)) and hasattr(e, "exit_code")):
            raise
        e.show()
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
