from fractions import Fraction

import pytest

from gamesep.config import Settings, get_settings
from gamesep.hypergraph import DiGraph


@pytest.fixture(autouse=True)
def _fresh_settings_cache():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings() -> Settings:
    return Settings(_env_file=None)


@pytest.fixture
def half() -> Fraction:
    return Fraction(1, 2)


@pytest.fixture
def ring3() -> DiGraph:
    return DiGraph.ring(3)


@pytest.fixture
def ring6() -> DiGraph:
    return DiGraph.ring(6)


@pytest.fixture
def line5() -> DiGraph:
    return DiGraph.line(5)
