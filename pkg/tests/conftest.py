import random

import pytest

from husrm.model import SequenceDatabase, Threshold, build_database

# Hand-authored demo database used across the suite. Expected values for
# it (rule sets, bounds, projection rows) were derived by hand and by the
# brute-force reference and are frozen in the tests.
SAMPLE_ROWS = [
    [("a", 1), ("c", 2), ("c", 3)],
    [("b", 5), ("c", 2), ("e", 8), ("b", 6)],
    [("a", 2), ("c", 2), ("f", 10)],
    [("a", 2), ("a", 1), ("a", 2), ("b", 6), ("c", 3), ("a", 3)],
    [("d", 1), ("a", 1), ("b", 4)],
]

SAMPLE_NATIVE = """\
# demo utility sequence database
a:1 c:2 c:3
b:5 c:2 e:8 b:6
a:2 c:2 f:10
a:2 a:1 a:2 b:6 c:3 a:3
d:1 a:1 b:4
"""


@pytest.fixture
def sample_db() -> SequenceDatabase:
    return build_database(SAMPLE_ROWS)


@pytest.fixture
def small_db() -> SequenceDatabase:
    # First three rows only: small enough to check projection tables by hand.
    return build_database(SAMPLE_ROWS[:3])


def make_random_db(seed: int) -> SequenceDatabase:
    """Seeded desk-scale database: <= 8 sequences of <= 8 events over <= 6 items."""
    rng = random.Random(seed)
    alphabet = "abcdef"[: rng.randint(1, 6)]
    rows = []
    for _ in range(rng.randint(1, 8)):
        rows.append(
            [(rng.choice(alphabet), rng.randint(1, 9)) for _ in range(rng.randint(1, 8))]
        )
    return build_database(rows)


def canon(rules) -> set[tuple]:
    return {rule.key() for rule in rules}


def thr(text: str) -> Threshold:
    return Threshold.from_string(text)
