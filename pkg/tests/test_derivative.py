import itertools
import random

import pytest

from subshift_lab.errors import ContractViolationError
from subshift_lab.sofic import (
    EPSILON, make_graph, empty_graph, trim, from_forbidden_words,
    language_words, language_equal, resolve_left, resolve_right,
    transition_relation, word_in_language, context_class_count,
)
from subshift_lab.derivative import (
    ZERO, FINITE, INFINITE, EMPTY,
    ray_cardinality, cylinder_class, derive, rank_chain, is_countable,
    cylinder_growth_oracle, growth_classification,
)

from conftest import random_trim_graph


def brute_centered_counts(g, word, k_max):
    """Oracle for the oracle: enumerate centered extensions explicitly."""
    counts = []
    for k in range(k_max + 1):
        n = 0
        for alpha in itertools.product(g.alphabet, repeat=k):
            for beta in itertools.product(g.alphabet, repeat=k):
                if word_in_language(g, alpha + word + beta):
                    n += 1
        counts.append(n)
    return tuple(counts)


def w(text):
    return tuple(text)


# --- ray cardinality -------------------------------------------------------

def test_ray_cardinality_sunny(sunny):
    # sunny is both left- and right-resolving
    assert ray_cardinality(sunny, "L", "right") == INFINITE
    assert ray_cardinality(sunny, "R", "right") == FINITE
    assert ray_cardinality(sunny, "R", "left") == INFINITE
    assert ray_cardinality(sunny, "L", "left") == FINITE


def test_ray_cardinality_single_loop():
    g = make_graph(["0"], ["a"], [("a", "0", "a")])
    assert ray_cardinality(g, "a", "left") == FINITE
    assert ray_cardinality(g, "a", "right") == FINITE


def test_ray_cardinality_requires_resolved():
    g = make_graph(["0", "1"], ["a", "b"],
                   [("a", "0", "a"), ("a", "0", "b"), ("b", "1", "a")])
    with pytest.raises(ContractViolationError):
        ray_cardinality(g, "a", "right")


# --- cylinder classes ------------------------------------------------------

def test_cylinder_class_sunny(sunny):
    assert cylinder_class(sunny, w("010")) == FINITE
    assert cylinder_class(sunny, w("00")) == INFINITE
    assert cylinder_class(sunny, w("1")) == FINITE


def test_cylinder_class_golden_mean(golden_mean):
    assert cylinder_class(golden_mean, w("11")) == EMPTY
    for n in range(4):
        for word in itertools.product("01", repeat=n):
            if word_in_language(golden_mean, word):
                assert cylinder_class(golden_mean, word) == INFINITE


# --- derive ----------------------------------------------------------------

def test_derive_sunny_is_zero_loop(sunny):
    d = derive(sunny, validate_len=4)
    for n in range(1, 9):
        assert language_words(d, n) == {("0",) * n}


def test_derive_golden_mean_fixpoint(golden_mean):
    d = derive(golden_mean, validate_len=6)
    assert language_equal(d, golden_mean)
    for n in range(9):
        assert language_words(d, n) == language_words(golden_mean, n)


def test_derive_empty():
    e = empty_graph(["0"])
    assert derive(e).is_empty


def test_rank_chain_examples(sunny, golden_mean):
    rc = rank_chain(sunny)
    assert rc.rank == 2 and rc.perfect_kernel_empty
    assert len(rc.presentations) == 3
    rc = rank_chain(golden_mean)
    assert rc.rank == 0 and not rc.perfect_kernel_empty


def test_rank_chain_two_loops_bridge():
    # {0^inf, 1^inf} plus the orbit of 0^inf.1^inf : rank 2
    g = make_graph(["0", "1"], ["L", "R"],
                   [("L", "0", "L"), ("R", "1", "R"), ("L", "1", "R")])
    rc = rank_chain(g)
    assert rc.rank == 2 and rc.perfect_kernel_empty
    mid = rc.presentations[1]
    for n in range(1, 5):
        assert language_words(mid, n) == {("0",) * n, ("1",) * n}


def test_is_countable(sunny, golden_mean):
    assert is_countable(sunny)
    assert not is_countable(golden_mean)
    assert is_countable(empty_graph(["0"]))


def test_chain_languages_nested():
    rng = random.Random(17)
    for _ in range(10):
        g = random_trim_graph(rng)
        rc = rank_chain(g)
        for a, b in zip(rc.presentations, rc.presentations[1:]):
            for n in range(5):
                assert language_words(b, n) <= language_words(a, n)


def test_derive_second_iterate_consistency(sunny):
    rc = rank_chain(sunny)
    assert language_equal(derive(rc.presentations[1]), rc.presentations[2])


def test_derive_commutes_with_presentation(golden_mean):
    alt = from_forbidden_words(["0", "1"], [("1", "1")])
    for g1, g2 in [(golden_mean, alt),
                   (golden_mean, resolve_left(golden_mean)),
                   (alt, resolve_right(alt))]:
        assert language_equal(g1, g2)
        assert language_equal(derive(g1), derive(g2))


def test_rank_bounded_by_context_count():
    rng = random.Random(29)
    for _ in range(15):
        g = random_trim_graph(rng)
        assert rank_chain(g).rank <= context_class_count(g)


# --- growth oracle ---------------------------------------------------------

def test_growth_oracle_sunny_values(sunny):
    # only one word of each centered length passes through a fixed "1"
    assert cylinder_growth_oracle(sunny, w("1"), 4) == (1, 1, 1, 1, 1)
    assert cylinder_growth_oracle(sunny, w("010"), 3) == (1, 1, 1, 1)
    counts = cylinder_growth_oracle(sunny, w("00"), 4)
    assert all(b > a for a, b in zip(counts, counts[1:]))


def test_growth_oracle_golden_mean_strictly_increasing(golden_mean):
    counts = cylinder_growth_oracle(golden_mean, w("0"), 4)
    assert all(b > a for a, b in zip(counts, counts[1:]))
    assert counts == brute_centered_counts(golden_mean, w("0"), 4)


def test_growth_oracle_matches_brute_force():
    rng = random.Random(31)
    for _ in range(8):
        g = random_trim_graph(rng, max_states=4)
        for n in range(3):
            for word in itertools.product(g.alphabet, repeat=n):
                assert (cylinder_growth_oracle(g, word, 3)
                        == brute_centered_counts(g, word, 3))


def test_growth_oracle_nondecreasing():
    rng = random.Random(37)
    for _ in range(10):
        g = random_trim_graph(rng)
        for word in itertools.product(g.alphabet, repeat=2):
            counts = cylinder_growth_oracle(g, word, 6)
            assert all(b >= a for a, b in zip(counts, counts[1:]))


def test_growth_classification_agrees_with_cylinder_class():
    rng = random.Random(41)
    for _ in range(12):
        g = random_trim_graph(rng)
        for n in range(4):
            for word in itertools.product(g.alphabet, repeat=n):
                got = growth_classification(g, word)
                want = cylinder_class(g, word)
                assert got == want, (g, word, got, want)


def test_fixpoint_is_perfect():
    # at the fixpoint presentation every word has an infinite cylinder
    rng = random.Random(43)
    for _ in range(10):
        g = random_trim_graph(rng)
        fix = rank_chain(g).presentations[-1]
        for n in range(4):
            for word in language_words(fix, n):
                assert cylinder_class(fix, word) == INFINITE


def test_relation_invariance_in_derivative():
    # equal transition relations give equal membership patterns in the
    # derivative language (context invariance, tested via bounded contexts)
    rng = random.Random(47)
    for _ in range(10):
        g = random_trim_graph(rng, max_states=4)
        d = derive(g)
        sig = {}
        for n in range(4):
            for u in itertools.product(g.alphabet, repeat=n):
                rel = transition_relation(g, u)
                if not rel:
                    continue
                vec = frozenset(
                    (a, b)
                    for la in range(3) for lb in range(3)
                    for a in itertools.product(g.alphabet, repeat=la)
                    for b in itertools.product(g.alphabet, repeat=lb)
                    if word_in_language(d, a + u + b))
                sig.setdefault(rel, set()).add(vec)
        for rel, vecs in sig.items():
            assert len(vecs) == 1
