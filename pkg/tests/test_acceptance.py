"""Acceptance suite: one timed pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import itertools
import random
import time

import pytest

from subshift_lab.sofic import (
    make_graph, trim, language_words, language_equal, transition_relation,
    word_in_language, context_class_count,
)
from subshift_lab.derivative import (
    INFINITE, derive, rank_chain, is_countable, growth_classification,
)
from subshift_lab.sft2d import (
    Budget, HOLE, Pattern2D, approx_derivative_member, complete_patterns,
    locally_admissible,
)
from subshift_lab.constructions.grid import grid_shift
from subshift_lab.constructions.diamond import (
    CONTINUATION_PROBE, ISOLATION_PROBE, core_pattern, diamond_config,
    diamond_shift, _pairs,
)
from subshift_lab.constructions.chain import verify_chain
from subshift_lab.constructions.posets import (
    make_poset, phi, poset_stats, verify_embedding,
)
from subshift_lab.constructions.counter import (
    cm_step, cone_render, doubling_machine, read_cone_trace,
)

from conftest import random_trim_graph


def check(number, label, limit_s, fn):
    start = time.monotonic()
    try:
        fn()
        elapsed = time.monotonic() - start
        ok = elapsed < limit_s
        verdict = "PASS" if ok else "FAIL (overtime)"
    except AssertionError as exc:
        elapsed = time.monotonic() - start
        print("[FAIL] criterion %2d: %s (%.2fs): %s" % (number, label, elapsed, exc))
        raise
    print("[%s] criterion %2d: %s (%.2fs < %ds)"
          % (verdict, number, label, elapsed, limit_s))
    assert ok, "criterion %d exceeded its %ds budget (%.2fs)" % (
        number, limit_s, elapsed)


SUNNY = make_graph(["0", "1"], ["L", "R"],
                   [("L", "0", "L"), ("L", "1", "R"), ("R", "0", "R")])
GOLDEN = make_graph(["0", "1"], ["q0", "q1"],
                    [("q0", "0", "q0"), ("q0", "1", "q1"), ("q1", "0", "q0")])

_SUITE_CACHE = {}


def suite_graphs():
    """50 seeded random trim presentations (<= 5 states, <= 2 symbols)."""
    if "graphs" not in _SUITE_CACHE:
        rng = random.Random(20240)
        _SUITE_CACHE["graphs"] = [random_trim_graph(rng, 5, 2) for _ in range(50)]
    return _SUITE_CACHE["graphs"]


def test_criterion_01_exact_derivative_sunny():
    def body():
        d = derive(SUNNY)
        for n in range(1, 9):
            assert language_words(d, n) == {("0",) * n}
        rc = rank_chain(SUNNY)
        assert rc.rank == 2
        assert is_countable(SUNNY)
        # independent growth oracle agrees on every short word
        for n in range(5):
            for w in itertools.product("01", repeat=n):
                in_derivative = word_in_language(d, w)
                assert in_derivative == (growth_classification(SUNNY, w) == INFINITE)
    check(1, "exact 1-D derivative (sunny-side-up)", 1, body)


def test_criterion_02_perfect_fixpoint_golden_mean():
    def body():
        d = derive(GOLDEN)
        assert language_equal(d, GOLDEN)
        for n in range(9):
            assert language_words(d, n) == language_words(GOLDEN, n)
        rc = rank_chain(GOLDEN)
        assert rc.rank == 0
        assert not is_countable(GOLDEN)
    check(2, "perfect-shift fixpoint (golden mean)", 1, body)


def test_criterion_03_rank_bound_and_oracle_agreement():
    def body():
        for g in suite_graphs():
            assert rank_chain(g).rank <= context_class_count(g)
            d = derive(g)
            for n in range(6):
                for w in itertools.product(g.alphabet, repeat=n):
                    oracle = growth_classification(g, w)
                    assert word_in_language(d, w) == (oracle == INFINITE), (g, w)
    check(3, "rank bound + growth-oracle agreement on 50 graphs", 120, body)


def test_criterion_04_relation_invariance_in_derivative():
    def body():
        violations = 0
        for g in suite_graphs():
            d = derive(g)
            contexts = [(a, b)
                        for la in range(4) for lb in range(4)
                        for a in itertools.product(g.alphabet, repeat=la)
                        for b in itertools.product(g.alphabet, repeat=lb)]
            sig = {}
            for n in range(5):
                for u in itertools.product(g.alphabet, repeat=n):
                    rel = transition_relation(g, u)
                    if not rel:
                        continue
                    vec = tuple(word_in_language(d, a + u + b)
                                for (a, b) in contexts)
                    if rel in sig:
                        if sig[rel] != vec:
                            violations += 1
                    else:
                        sig[rel] = vec
        assert violations == 0
    check(4, "derivative membership is a relation-class invariant", 120, body)


def test_criterion_05_phi_table():
    def body():
        for n in range(1, 51):
            assert phi(n, 1) == n
        assert phi(3, 3) == 10
        for r in range(2, 7):
            for n in range(2, 51):
                assert phi(n, r) - phi(n - 1, r) == phi(n, r - 1)
    check(5, "phi recurrence table", 1, body)


def _pinned_rect(win, w, h, off=(3, 3)):
    ox, oy = off
    rows = [[HOLE] * win for _ in range(win)]
    for x in range(ox, ox + w + 2):
        for y in range(oy, oy + h + 2):
            cx, cy = x - ox, y - oy
            if cx in (0, w + 1) and cy in (0, h + 1):
                rows[y][x] = "+"
            elif cy in (0, h + 1):
                rows[y][x] = "-"
            elif cx in (0, w + 1):
                rows[y][x] = "|"
    return Pattern2D((0, 0), tuple(tuple(r) for r in rows))


def test_criterion_06_grid_squares():
    def body():
        ts = grid_shift()
        for w in range(1, 5):
            for h in range(1, 5):
                p = _pinned_rect(12, w, h)
                completable = False
                for _ in complete_patterns(
                        ts, p, budget=Budget(max_nodes=10_000_000, timeout_s=240)):
                    completable = True
                    break
                assert completable == (w == h), (w, h)
    check(6, "grid windows force square rectangles", 300, body)


def test_criterion_07_diamond_isolation_evidence():
    def body():
        ts = diamond_shift()
        for n in (1, 2):
            for m in (1, 2):
                pairs = _pairs(n, m)
                x_lo = pairs[0][0] - max(pairs[0][1], pairs[0][2]) - 4
                x_hi = pairs[-1][0] + max(pairs[-1][1], pairs[-1][2]) + 4
                cw = diamond_config(n, m, x_lo, -(n + m) - 4,
                                    x_hi - x_lo + 1, (m + 5) + (n + m + 4) + 1)
                assert locally_admissible(ts, cw.window), (n, m)
        budget = Budget(max_nodes=10_000_000, timeout_s=400)
        assert approx_derivative_member(
            ts, core_pattern(1, 1, radius=3),
            ISOLATION_PROBE["agree"], ISOLATION_PROBE["margin"],
            budget=budget) is False
        assert approx_derivative_member(
            ts, core_pattern(2, 2, radius=3),
            CONTINUATION_PROBE["agree"], CONTINUATION_PROBE["margin"],
            budget=budget) is True
    check(7, "diamond type-(1,1) isolation evidence", 600, body)


def test_criterion_08_chain_evidence():
    def body():
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                got = verify_chain(i, j, 8, 512)
                if i == j:
                    assert got == (True, True), (i, j, got)
                elif i < j:
                    assert got == (True, False), (i, j, got)
    check(8, "descending-chain window evidence", 120, body)


def test_criterion_09_poset_embedding():
    def body():
        posets = [
            make_poset(["a", "b"], [("a", "a"), ("b", "b"), ("a", "b")]),
            make_poset(["a", "b"], [("a", "a"), ("b", "b")]),
            make_poset(["bot", "m1", "m2", "top"],
                       [("bot", "bot"), ("m1", "m1"), ("m2", "m2"),
                        ("top", "top"), ("bot", "m1"), ("bot", "m2"),
                        ("bot", "top"), ("m1", "top"), ("m2", "top")]),
        ]
        for p in posets:
            mat = verify_embedding(p, 4, 512)
            want = {(x, y): p.below(y, x)
                    for x in p.elements for y in p.elements}
            assert mat == want
            for x in p.elements:
                assert mat[(x, x)]
            for x, y, z in itertools.product(p.elements, repeat=3):
                if mat[(x, y)] and mat[(y, z)]:
                    assert mat[(x, z)]
    check(9, "finite poset order-embedding evidence", 300, body)


def test_criterion_10_cone_consistency():
    def body():
        m = doubling_machine()
        cw = cone_render(m, 1, 0, 8)
        trace = read_cone_trace(m, cw, 8)
        assert len(trace) == 9
        for a, b in zip(trace, trace[1:]):
            assert b in cm_step(m, a[0], a[1]), (a, b)
        # vertical constancy between update rows, away from the ball track
        p = cw.window
        x0, _ = p.origin
        from subshift_lab.constructions.counter import update_rows
        boundaries = set(update_rows(8))
        for y in range(1, p.height):
            if y in boundaries:
                continue
            for x in range(x0, 1):
                assert p.get(x, y) == p.get(x, y - 1)
        assert cone_render(m, 1, 0, 8) == cw
    check(10, "counter-machine cone consistency", 1, body)
