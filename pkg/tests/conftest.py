from pathlib import Path

import pytest

from causalsynth.game import load_game
from causalsynth.strategy import load_strategy
from causalsynth.traces import DependencyAlphabet

DATA = Path(__file__).parent / "data"
GOLDENS = Path(__file__).parent / "goldens"


@pytest.fixture(scope="session")
def games():
    return {name: load_game(DATA / f"{name}.zgame") for name in ("G1", "G2", "G3", "G4")}


@pytest.fixture(scope="session")
def t1():
    return DependencyAlphabet({"a": {"1"}, "b": {"2"}, "c": {"1", "2"}})


@pytest.fixture
def sigma6(games):
    return load_strategy(DATA / "G3_sigma6.zstrat", games["G3"])


@pytest.fixture
def sigma_star(games):
    return load_strategy(DATA / "G1_star.zstrat", games["G1"])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
