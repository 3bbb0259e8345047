import itertools
import random

import pytest

from cyclic_align.channel import DeltaChannel, MessagingMatrix, YChannel

ACCEPTANCE_LINES: list[str] = []


def random_delta(rng: random.Random, n: int) -> DeltaChannel:
    return DeltaChannel(n, tuple(tuple(rng.randrange(n) for _ in range(3)) for _ in range(3)))


def random_y(rng: random.Random, n: int) -> YChannel:
    return YChannel(n, tuple(rng.randrange(n) for _ in range(3)), tuple(rng.randrange(n) for _ in range(3)))


def all_delta(n: int):
    for e in itertools.product(range(n), repeat=9):
        yield DeltaChannel(n, (e[0:3], e[3:6], e[6:9]))


@pytest.fixture
def uniform():
    return MessagingMatrix.uniform(1)


@pytest.fixture
def asym():
    """alpha_12 = 2, every other off-diagonal entry 1."""
    return MessagingMatrix(((0, 2, 1), (1, 0, 1), (1, 1, 0)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
