import pytest

from postsift.textproc import Lexicon


@pytest.fixture(scope="session")
def fixture_slang() -> Lexicon:
    return Lexicon(["omg", "lol", "btw"], "slang")


@pytest.fixture(scope="session")
def fixture_interj() -> Lexicon:
    return Lexicon(["wow", "ouch", "yay"], "interjection")


@pytest.fixture(scope="session")
def empty_slang() -> Lexicon:
    return Lexicon([], "slang")


@pytest.fixture(scope="session")
def empty_interj() -> Lexicon:
    return Lexicon([], "interjection")
