import pytest

from aimp.conllu import load_conllu
from aimp.config import load_config
from aimp.errors import CompileError, ConfigError
from aimp.language import parse_program, print_program
from aimp.pipeline import Compiler, format_answer, solution_to_json

from conftest import EXAMPLE_PROBLEM, conllu_rows


def test_compile_example(compiler):
    program, trace = compiler.compile(EXAMPLE_PROBLEM)
    assert program == parse_program(
        "pooja_apple := 3 ; pooja_apple := pooja_apple - 1 ; print pooja_apple"
    )
    assert [f.fragment for f in trace.fragments] == [
        "Pooja has 3 apples.", "Pooja eats one apple.", "How many apples does Pooja have now?",
    ]
    assert [step.candidates for f in trace.fragments for step in f.steps] == [
        ["observation"], ["construct", "destroy"], ["get"],
    ]
    eat = trace.fragments[1].steps[0]
    assert eat.head_verb == "eat"
    assert eat.decision.source == "lexicon"
    assert eat.command == "pooja_apple := pooja_apple - 1"


def test_solve_example(compiler):
    answers, program, trace = compiler.solve(EXAMPLE_PROBLEM)
    assert answers == [2]
    assert trace.diagnostics == []


def test_empty_problem(compiler):
    with pytest.raises(CompileError) as info:
        compiler.compile("")
    assert "EmptyProblem" in str(info.value)
    assert info.value.trace is not None


@pytest.mark.parametrize("problem, answers", [
    ("Pooja has two apples and three oranges. How many oranges does Pooja have?", [3]),
    ("Pooja has 3 apples. Pooja gave John 2 apples. How many apples does Pooja have?", [1]),
    ("Pooja has 3 apples.", []),
    ("Mary has 4 cookies. Tom has 6 cookies. Mary took 2 cookies from Tom. "
     "How many cookies does Mary have?", [6]),
    ("Pooja has 3 apples. How many apples does Pooja have? Pooja eats one apple. "
     "How many apples does Pooja have?", [3, 2]),
])
def test_solve(compiler, problem, answers):
    assert compiler.solve(problem).answers == answers


def test_transfer_to_new_variable_is_reported(compiler):
    answers, program, trace = compiler.solve(
        "Pooja has 3 apples. Pooja gave John 2 apples. How many apples does John have?"
    )
    assert answers == [2]
    codes = [d.code for d in trace.diagnostics]
    assert "undeclared_address" in codes
    assert "unbound_address" in codes


def test_unseen_verb_is_classified_by_similarity(compiler):
    answers, program, trace = compiler.solve(
        "Sara has 10 stickers. Sara purchases 5 stickers. How many stickers does Sara have?"
    )
    assert answers == [15]
    decision = trace.fragments[1].steps[0].decision
    assert (decision.source, decision.nearest) == ("similarity", "buy")


def test_fragment_without_quantifier_is_skipped(compiler):
    answers, program, trace = compiler.solve(
        "Pooja has 3 apples. Pooja eats. How many apples does Pooja have?"
    )
    assert answers == [3]
    assert [f.skipped for f in trace.fragments] == [False, True, False]
    assert [d.code for d in trace.diagnostics] == ["no_quantifier"]


def test_compile_error_names_the_fragment(compiler):
    with pytest.raises(CompileError) as info:
        compiler.compile("Pooja has 3 apples. Colorless green ideas sleep furiously twice.")
    assert info.value.fragment == "Colorless green ideas sleep furiously twice."
    assert info.value.trace.sentences[0] == "Pooja has 3 apples."


def test_missing_object_is_a_compile_error(compiler):
    text = conllu_rows(
        (1, "Pooja", "Pooja", "NNP", 2, "nsubj"),
        (2, "walks", "walk", "VBZ", 0, "root"),
        (3, "3", "3", "CD", 4, "nummod"),
        (4, "miles", "mile", "NNS", 2, "obl"),
    )
    with pytest.raises(CompileError) as info:
        compiler.compile("", annotations=load_conllu(text))
    assert "MissingArgument" in str(info.value)
    assert info.value.fragment == "Pooja walks 3 miles"


def test_compile_is_deterministic(compiler):
    first_program, first_trace = compiler.compile(EXAMPLE_PROBLEM)
    second_program, second_trace = Compiler().compile(EXAMPLE_PROBLEM)
    assert print_program(first_program) == print_program(second_program)
    assert first_trace.model_dump() == second_trace.model_dump()


def test_compile_from_conllu(compiler):
    text = conllu_rows(
        (1, "Pooja", "Pooja", "NNP", 2, "nsubj"),
        (2, "has", "have", "VBZ", 0, "root"),
        (3, "3", "3", "CD", 4, "nummod"),
        (4, "apples", "apple", "NNS", 2, "dobj"),
    ) + "\n\n" + conllu_rows(
        (1, "How", "how", "WRB", 2, "advmod"),
        (2, "many", "many", "JJ", 3, "amod"),
        (3, "apples", "apple", "NNS", 6, "dobj"),
        (4, "does", "do", "VBZ", 6, "aux"),
        (5, "she", "she", "PRP", 6, "nsubj"),
        (6, "have", "have", "VB", 0, "root"),
        (7, "?", "?", ".", 6, "punct"),
    )
    answers, program, trace = compiler.solve("", annotations=load_conllu(text))
    assert answers == [3]
    assert [s.replacement for s in trace.substitutions] == ["Pooja"]


def test_conllu_path_from_config(write_file):
    path = write_file("problem.conllu", conllu_rows(
        (1, "Pooja", "Pooja", "NNP", 2, "nsubj"),
        (2, "has", "have", "VBZ", 0, "root"),
        (3, "3", "3", "CD", 4, "nummod"),
        (4, "apples", "apple", "NNS", 2, "dobj"),
    ))
    program, trace = Compiler(load_config(conllu_path=path)).compile("")
    assert print_program(program) == "pooja_apple := 3"


def test_missing_lexicon_fails_at_first_disambiguation(tmp_path):
    compiler = Compiler(load_config(lexicon_path=tmp_path / "missing.tsv"))
    assert compiler.solve("Pooja has 3 apples. How many apples does Pooja have?").answers == [3]
    with pytest.raises(ConfigError):
        compiler.solve("Pooja has 3 apples. Pooja eats one apple.")


@pytest.mark.parametrize("value, text", [(2.0, "2"), (2.0000000001, "2"), (2.5, "2.5"), (-1.0, "-1")])
def test_format_answer(value, text):
    assert format_answer(value) == text


def test_solution_to_json(compiler):
    answers, program, trace = compiler.solve(EXAMPLE_PROBLEM)
    document = solution_to_json(program, trace, answers)
    assert document["answers"] == [2]
    assert document["program"]["cmd"] == "seq"
    assert document["trace"]["problem"] == EXAMPLE_PROBLEM
