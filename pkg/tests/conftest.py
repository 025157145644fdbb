import random
from fractions import Fraction

import pytest

from symcone import GroundSet, Partition, SetFunction


def all_set_partitions(n: int):
    """Every partition of {1..n}, via restricted growth strings."""
    ground = GroundSet(n)
    out = []

    def grow(prefix, maxval):
        if len(prefix) == n:
            blocks = {}
            for elem, label in enumerate(prefix, start=1):
                blocks.setdefault(label, 0)
                blocks[label] |= 1 << (elem - 1)
            out.append(Partition(ground, tuple(blocks[k] for k in sorted(blocks))))
            return
        for v in range(maxval + 2):
            grow(prefix + [v], max(maxval, v))

    grow([0], 0)
    return out


def brute_integer_partition_count(n: int) -> int:
    """Independent count of integer partitions (descending-part recursion)."""

    def count(remaining, largest):
        if remaining == 0:
            return 1
        return sum(
            count(remaining - part, part)
            for part in range(min(remaining, largest), 0, -1)
        )

    return count(n, n)


def random_rational_function(ground: GroundSet, rng: random.Random) -> SetFunction:
    values = [Fraction(0)] + [
        Fraction(rng.randint(-6, 9), rng.randint(1, 4))
        for _ in range((1 << ground.n) - 1)
    ]
    return SetFunction(ground, tuple(values))


@pytest.fixture
def rng():
    return random.Random(20240817)
