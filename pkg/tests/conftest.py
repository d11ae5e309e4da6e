import itertools
import random

import numpy as np
import pytest

from dyadic_limit.dyadic import DyadicPartition, StandardDyadicInterval


def _trees(iv, depth):
    # every list of leaves obtainable by splitting iv at most ``depth`` more levels
    yield [iv]
    if depth > 0:
        left, right = iv.children()
        for a in list(_trees(left, depth - 1)):
            for b in _trees(right, depth - 1):
                yield a + b


def all_partitions(max_depth):
    return [DyadicPartition(leaves) for leaves in _trees(StandardDyadicInterval(0, 0), max_depth)]


def all_intervals(max_n):
    return [StandardDyadicInterval(n, p) for n in range(max_n + 1) for p in range(2**n)]


@pytest.fixture(scope="session")
def partitions3():
    return all_partitions(3)


@pytest.fixture(scope="session")
def partitions4():
    return all_partitions(4)


@pytest.fixture
def pyrng():
    return random.Random(12345)


@pytest.fixture
def nprng():
    return np.random.default_rng(2024)


def random_state(rng: np.random.Generator, partition, d):
    v = rng.standard_normal(d ** len(partition)) + 1j * rng.standard_normal(d ** len(partition))
    return v / np.linalg.norm(v)


# Verdict lines from the acceptance suite, echoed in the terminal summary so they
# show up even when pytest captures stdout.
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
