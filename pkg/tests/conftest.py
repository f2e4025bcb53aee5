import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from geocastlab.simengine import SimEngine
from geocastlab.topology import load_fixture, shortest_paths


@pytest.fixture(scope="session")
def fig7():
    return load_fixture("fig7")


@pytest.fixture(scope="session")
def fig9():
    return load_fixture("fig9")


@pytest.fixture(scope="session")
def fig5rd():
    return load_fixture("fig5rd")


@pytest.fixture(scope="session")
def loop9():
    return load_fixture("loop9")


@pytest.fixture(scope="session")
def fixtures(fig7, fig9, fig5rd, loop9):
    return [fig7, fig9, fig5rd, loop9]


@pytest.fixture(scope="session")
def engines(fixtures):
    return {t.name: SimEngine(t) for t in fixtures}


@pytest.fixture(scope="session")
def pathdbs(fixtures):
    return {t.name: shortest_paths(t) for t in fixtures}
