import os
from pathlib import Path

import pytest

from aimp.config import DATA_DIR, load_config
from aimp.parser import default_parser
from aimp.pipeline import Compiler

GOLDEN_CORPUS = DATA_DIR / "golden_corpus.txt"

EXAMPLE_PROBLEM = (
    "Pooja has 3 apples. She eats one apple. How many apples does Pooja have now?"
)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep AIMP_* settings from the developer's shell out of the tests."""
    for key in list(os.environ):
        if key.startswith("AIMP_"):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture(scope="session")
def parser():
    return default_parser()


@pytest.fixture(scope="session")
def compiler():
    return Compiler(load_config())


@pytest.fixture
def golden_corpus() -> Path:
    return GOLDEN_CORPUS


@pytest.fixture
def write_file(tmp_path):
    def write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write


def conllu_rows(*rows):
    """Build CoNLL-U lines from (id, form, lemma, pos, head, deprel) tuples."""
    return "\n".join(
        "\t".join([str(i), form, lemma, pos, "_", "_", str(head), deprel, "_", "_"])
        for i, form, lemma, pos, head, deprel in rows
    )
