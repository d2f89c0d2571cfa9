import json
from pathlib import Path

import pytest

from mushaf import CorpusIndex, RelationalStore, ingest_files
from mushaf.corpus import load_metadata
from mushaf.store import build_store

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR.parent / "data"
TOY_DIR = TESTS_DIR / "data" / "toy"


def toy_metadata():
    return load_metadata(
        TOY_DIR / "surahs.tsv",
        TOY_DIR / "pages.tsv",
        TOY_DIR / "juzs.tsv",
        TOY_DIR / "rubs.tsv",
    )


def toy_corpus_lines() -> list[str]:
    with open(TOY_DIR / "corpus.txt", encoding="utf-8") as f:
        return f.readlines()


@pytest.fixture(scope="session")
def toy_oracle() -> dict:
    with open(TOY_DIR / "oracle.json", encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture(scope="session")
def toy_index() -> CorpusIndex:
    from mushaf import ingest

    return ingest(toy_corpus_lines(), toy_metadata())


@pytest.fixture(scope="session")
def full_index() -> CorpusIndex:
    return ingest_files(DATA_DIR / "quran-uthmani.txt", DATA_DIR)


@pytest.fixture(scope="session")
def toy_store_path(toy_index, tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("toy") / "toy-index.db"
    build_store(toy_index, path)
    return path


@pytest.fixture(scope="session")
def toy_store(toy_store_path) -> RelationalStore:
    return RelationalStore(toy_store_path)


@pytest.fixture(scope="session")
def full_store_path(full_index, tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("full") / "index.db"
    build_store(full_index, path)
    return path


@pytest.fixture(scope="session")
def full_store(full_store_path) -> RelationalStore:
    return RelationalStore(full_store_path)
