import pytest

from tunegram.corpus import load_mini_corpus


@pytest.fixture(scope="session")
def mini_corpus():
    """The bundled 20-tune corpus, loaded once per session."""
    tunes = load_mini_corpus()
    assert len(tunes) == 20
    return tunes
