import json

import pytest

from aimp.corpus import answers_match, format_report, parse_corpus, run_corpus
from aimp.errors import FormatError
from aimp.results_db import ProblemStatus


def test_golden_corpus_passes(compiler, golden_corpus):
    report = run_corpus(golden_corpus, compiler=compiler)
    failures = [(r.index, r.answers, r.error) for r in report.results if r.status is not ProblemStatus.PASS]
    assert failures == []
    assert (report.total, report.passed, report.accuracy) == (10, 10, 1.0)
    assert report.exit_code == 0


def test_golden_corpus_in_parallel(golden_corpus):
    from aimp.config import load_config
    report = run_corpus(golden_corpus, load_config(workers=4))
    assert [r.index for r in report.results] == list(range(1, 11))
    assert report.passed == 10


def test_empty_corpus(write_file, compiler):
    report = run_corpus(write_file("empty.txt", ""), compiler=compiler)
    assert report.total == 0
    assert report.exit_code == 0


def test_mismatch_fails(write_file, compiler):
    path = write_file("wrong.txt", "Pooja has 3 apples. How many apples does Pooja have?\nEXPECTED: 4\n")
    report = run_corpus(path, compiler=compiler)
    [result] = report.results
    assert result.status is ProblemStatus.FAIL
    assert result.answers == [3]
    assert report.exit_code == 1


def test_compile_error_without_expected_is_not_a_failure(write_file, compiler):
    path = write_file("broken.txt", "Colorless green ideas sleep furiously twice.\n")
    report = run_corpus(path, compiler=compiler)
    [result] = report.results
    assert result.status is ProblemStatus.ERROR
    assert result.error.startswith("CompileError")
    assert report.exit_code == 0


def test_compile_error_with_expected_fails(write_file, compiler):
    path = write_file("broken.txt", "Colorless green ideas sleep furiously twice.\nEXPECTED: 1\n")
    report = run_corpus(path, compiler=compiler)
    assert report.results[0].status is ProblemStatus.FAIL
    assert report.exit_code == 1


def test_unchecked_problem(write_file, compiler):
    report = run_corpus(write_file("open.txt", "Pooja has 3 apples. How many apples does Pooja have?"),
                        compiler=compiler)
    assert report.results[0].status is ProblemStatus.UNCHECKED
    assert report.results[0].answers == [3]
    assert report.unchecked == 1


def test_directory_corpus(tmp_path, compiler):
    (tmp_path / "a.txt").write_text("Pooja has 3 apples.\nEXPECTED:\n---\nTom has 2 pens.\nEXPECTED:\n")
    (tmp_path / "b.txt").write_text("Ali has 1 ball. How many balls does Ali have?\nEXPECTED: 1\n")
    (tmp_path / "notes.md").write_text("not a corpus")
    report = run_corpus(tmp_path, compiler=compiler)
    assert [r.index for r in report.results] == [1, 2, 3]
    assert report.passed == 3


def test_parse_corpus():
    problems = parse_corpus(
        "# header\n"
        "Pooja has 3 apples.\n"
        "How many apples does Pooja have?\n"
        "EXPECTED: 3\n"
        "---\n"
        "---\n"
        "Tom has 2 pens. How many pens does Tom have? How many pens does Tom have?\n"
        "expected: 2, 2\n"
    )
    assert [p.index for p in problems] == [1, 2]
    assert problems[0].text == "Pooja has 3 apples. How many apples does Pooja have?"
    assert problems[0].expected == [3]
    assert problems[0].line == 2
    assert problems[1].expected == [2, 2]


@pytest.mark.parametrize("text", [
    "Pooja has 3 apples.\nEXPECTED: 3\nEXPECTED: 3\n",
    "EXPECTED: 3\n---\nPooja has 3 apples.\n",
    "Pooja has 3 apples.\nEXPECTED: three\n",
])
def test_parse_corpus_format_errors(text):
    with pytest.raises(FormatError):
        parse_corpus(text)


def test_answers_match():
    assert answers_match([2.0], [2])
    assert answers_match([], [])
    assert not answers_match([2.0, 1.0], [2])
    assert not answers_match([2.5], [2])


def test_format_report(write_file, compiler):
    path = write_file("wrong.txt", "Pooja has 3 apples. How many apples does Pooja have?\nEXPECTED: 4\n")
    lines = format_report(run_corpus(path, compiler=compiler))
    assert lines[0] == "❌ [1] FAIL: 3 (expected 4)"
    assert lines[-1].startswith("📊 0/1 passed")


def test_traced_report_carries_comments(write_file):
    from aimp.config import load_config
    from aimp.pipeline import Compiler
    path = write_file("ok.txt", "Pooja has 3 apples. How many apples does Pooja have?\nEXPECTED: 3\n")
    report = run_corpus(path, compiler=Compiler(load_config(trace=True)))
    [result] = report.results
    assert result.trace is not None
    assert result.trace.problem.startswith("Pooja has 3 apples.")

    lines = format_report(report)
    assert lines[0] == "✅ [1] PASS: 3"
    comments = [line for line in lines if line.startswith("# ")]
    assert json.loads("\n".join(line[2:] for line in comments))["problem"] == result.trace.problem


def test_untraced_report_has_no_comments(write_file, compiler):
    path = write_file("ok.txt", "Pooja has 3 apples. How many apples does Pooja have?\nEXPECTED: 3\n")
    report = run_corpus(path, compiler=compiler)
    assert report.results[0].trace is None
    assert not any(line.startswith("# ") for line in format_report(report))
