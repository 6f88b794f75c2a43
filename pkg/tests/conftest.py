import pathlib
from importlib import resources

import pytest

from askman.lingua import Lexicon, Pipeline
from askman.logform import ConceptLexicon
from askman.store import CorpusStore


def data_path(name: str) -> str:
    return str(resources.files("askman") / "data" / name)


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return Lexicon.load(data_path("lexicon.tsv"))


@pytest.fixture(scope="session")
def concepts() -> ConceptLexicon:
    return ConceptLexicon.load(data_path("concepts.tsv"))


@pytest.fixture(scope="session")
def pipeline(lexicon) -> Pipeline:
    return Pipeline(lexicon)


def build_fixture_store(root: pathlib.Path) -> CorpusStore:
    store = CorpusStore.create(root, data_path("lexicon.tsv"), data_path("concepts.tsv"))
    corpus = pathlib.Path(data_path("corpus"))
    for doc in sorted(corpus.glob("*.txt")):
        store.ingest_document(doc.stem, doc.read_text(encoding="utf-8"))
    store.save_index()
    return store


@pytest.fixture(scope="session")
def fixture_store(tmp_path_factory) -> CorpusStore:
    return build_fixture_store(tmp_path_factory.mktemp("store") / "root")


@pytest.fixture(scope="session")
def fixture_queries() -> list[str]:
    text = pathlib.Path(data_path("queries.txt")).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]
