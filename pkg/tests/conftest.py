import sys
from pathlib import Path

import pytest
from hypothesis import settings

from chordprop import corpus
from chordprop.diagram import reduce

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

CORPUS_DIR = Path(corpus.__file__).parent


@pytest.fixture(scope="session")
def diagrams():
    return corpus.load_all("diagrams")


@pytest.fixture(scope="session")
def reduced_diagrams(diagrams):
    return {name: reduce(d) for name, d in diagrams.items()}


@pytest.fixture(scope="session")
def graphs():
    return corpus.load_all("graphs")


@pytest.fixture(scope="session")
def algebras():
    return corpus.load_all("algebras")


def corpus_path(kind: str, name: str) -> str:
    return str(CORPUS_DIR / kind / f"{name}.sd")
