from pathlib import Path

import pytest

from eojeol import corpus_io, load_mini_corpus

FIXTURES = Path(__file__).parent / "fixtures"

# acceptance lines collected by test_acceptance.report()
ACCEPTANCE_LINES = {}


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def read_sections(name: str):
    """``[level N]`` sections of a fixture file as {N: [lines]}."""
    out, cur = {}, None
    for line in read_fixture(name).splitlines():
        if not line or line.startswith("#"):
            continue
        if line.startswith("[level "):
            cur = int(line[7:-1])
            out[cur] = []
        else:
            out[cur].append(line)
    return out


@pytest.fixture(scope="session")
def example_sentence():
    return corpus_io.read_morph_corpus(read_fixture("example_morph.txt"))[0]


@pytest.fixture(scope="session")
def example_tree():
    return corpus_io.read_treebank(read_fixture("example_tree.txt"))[0]


@pytest.fixture(scope="session")
def mini_sentences():
    return load_mini_corpus("morph")


@pytest.fixture(scope="session")
def mini_trees():
    return load_mini_corpus("tree")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
