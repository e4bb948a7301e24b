import math

import numpy as np
import pytest

from nearcoll.cycle_finder import (
    ENGINE_NAMES,
    brent,
    find_cycle,
    find_cycle_hash,
    find_cycle_table,
    floyd,
    nivasch,
)
from nearcoll.hashing import Truncation, step_function


def walk_oracle(table, x0):
    """Brute force: record first-visit times until a state repeats."""
    seen = {}
    x = x0
    i = 0
    while x not in seen:
        seen[x] = i
        x = int(table[x])
        i += 1
    tail = seen[x]
    return tail, i - tail


def predecessors(table, x0, tail, cycle):
    path = [x0]
    for _ in range(tail + cycle):
        path.append(int(table[path[-1]]))
    if tail == 0:
        return None
    return path[tail - 1], path[tail + cycle - 1]


class Counting:
    def __init__(self, table):
        self.table = table
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return self.table[x]


HAND = {0: 1, 1: 2, 2: 3, 3: 4, 4: 2, 5: 0}


@pytest.mark.parametrize("engine", [floyd, brent, nivasch])
def test_hand_examples(engine):
    out = engine(HAND.__getitem__, 0)
    assert (out.tail, out.cycle, out.colliding_pair) == (2, 3, (1, 4))
    out = engine(lambda x: x, 7)
    assert (out.tail, out.cycle, out.colliding_pair) == (0, 1, None)
    out = engine(lambda x: 3, 9)
    assert (out.tail, out.cycle, out.colliding_pair) == (1, 1, (9, 3))


@pytest.mark.parametrize("engine", ENGINE_NAMES)
def test_random_functions_against_oracle(engine):
    rng = np.random.default_rng(2024)
    for _ in range(300):
        N = int(rng.integers(1, 1 << 10))
        table = rng.integers(0, N, size=N, dtype=np.uint64)
        x0 = int(rng.integers(0, N))
        tail, cycle = walk_oracle(table, x0)
        pair = predecessors(table, x0, tail, cycle)
        out = find_cycle_table(table, x0, engine)
        assert (out.tail, out.cycle, out.colliding_pair) == (tail, cycle, pair)
        lst = table.tolist()
        counter = Counting(lst)
        slow = find_cycle(counter, x0, engine)
        assert (slow.tail, slow.cycle, slow.colliding_pair) == (tail, cycle, pair)
        assert slow.evaluations == counter.calls
        assert out.evaluations == slow.evaluations
        if pair:
            a, b = pair
            assert a != b and lst[a] == lst[b]


def test_evaluation_bounds():
    rng = np.random.default_rng(7)
    for _ in range(500):
        N = int(rng.integers(2, 5000))
        table = rng.integers(0, N, size=N, dtype=np.uint64)
        x0 = int(rng.integers(0, N))
        rho = sum(walk_oracle(table, x0))
        assert find_cycle_table(table, x0, "floyd").evaluations <= 5 * rho + 2
        assert find_cycle_table(table, x0, "brent").evaluations <= 4 * rho + 1
        assert find_cycle_table(table, x0, "nivasch").evaluations <= 3 * rho


@pytest.mark.parametrize("tail,cycle", [(0, 1), (1, 1), (5, 1), (0, 7), (3, 64), (64, 3), (100, 1000), (1000, 100)])
def test_structured_rho_shapes(tail, cycle):
    # path 0 -> 1 -> ... -> tail+cycle-1 -> tail
    N = tail + cycle
    table = np.arange(1, N + 1, dtype=np.uint64)
    table[-1] = tail
    for engine in ENGINE_NAMES:
        out = find_cycle_table(table, 0, engine)
        assert (out.tail, out.cycle) == (tail, cycle)


def test_mean_rho_length():
    rng = np.random.default_rng(99)
    N = 1 << 12
    rhos = []
    for _ in range(2000):
        table = rng.integers(0, N, size=N, dtype=np.uint64)
        out = find_cycle_table(table, int(rng.integers(0, N)), "brent")
        rhos.append(out.rho)
    assert abs(np.mean(rhos) / math.sqrt(math.pi * N / 2) - 1) < 0.1


def test_hash_engine_matches_python_reference():
    t = Truncation.suffix(24, 6)
    f = step_function(t, 24, 5)
    ref = brent(f, 1234)
    for engine in ENGINE_NAMES:
        out = find_cycle_hash(t, 24, 5, 1234, engine)
        assert (out.tail, out.cycle, out.colliding_pair) == (ref.tail, ref.cycle, ref.colliding_pair)


def test_unknown_engine():
    with pytest.raises(ValueError):
        find_cycle(lambda x: x, 0, "pollard")
