import random

import pytest

from subshift_lab.sofic import make_graph, trim


@pytest.fixture
def golden_mean():
    # no-11 shift: q0 --0--> q0, q0 --1--> q1, q1 --0--> q0
    return make_graph(["0", "1"], ["q0", "q1"],
                      [("q0", "0", "q0"), ("q0", "1", "q1"), ("q1", "0", "q0")])


@pytest.fixture
def sunny():
    # at most one 1: L --0--> L, L --1--> R, R --0--> R
    return make_graph(["0", "1"], ["L", "R"],
                      [("L", "0", "L"), ("L", "1", "R"), ("R", "0", "R")])


@pytest.fixture
def full_shift2():
    return make_graph(["0", "1"], ["s"], [("s", "0", "s"), ("s", "1", "s")])


def random_trim_graph(rng, max_states=5, max_symbols=2):
    """Seeded random trim presentation; retries until non-empty."""
    symbols = ["0", "1", "2"][:max_symbols]
    while True:
        n = rng.randint(1, max_states)
        states = ["s%d" % i for i in range(n)]
        edges = set()
        for s in states:
            for a in symbols:
                if rng.random() < 0.55:
                    edges.add((s, a, rng.choice(states)))
        g = trim(make_graph(symbols, states, edges))
        if not g.is_empty:
            return g
