import pytest

from storynet.data import demo_quote_path, mini_corpus_manifest


@pytest.fixture(scope="session")
def quote_text() -> str:
    return demo_quote_path().read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def mini_manifest_path():
    return mini_corpus_manifest()
