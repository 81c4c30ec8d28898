import pathlib

import pytest

from eiwa import load_bundle, load_corpus

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


def bundle_with_config(config_name):
    return load_bundle(
        FIXTURES / "grammar.txt",
        FIXTURES / "lexicon.txt",
        FIXTURES / "taxonomy.txt",
        FIXTURES / "xforms.txt",
        FIXTURES / config_name,
    )


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def bundle():
    return bundle_with_config("config.txt")


@pytest.fixture(scope="session")
def bundle_warg0():
    return bundle_with_config("config_warg0.txt")


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(fixture_text("corpus.tsv"))
