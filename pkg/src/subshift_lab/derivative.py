"""Exact Cantor-Bendixson derivative, rank and countability for sofic shifts.

A word survives into the derivative iff its position cylinder holds
infinitely many points, and on a trim presentation that reduces to a
per-state question: does some path reading the word start at a state with
infinitely many left label rays, or end at one with infinitely many right
label rays?  Ray counts are decided on a determinized view, where label
rays and paths coincide, by looking for a branching state on or after a
cycle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import ContractViolationError, InputError
from .sofic import (
    LabeledGraph, make_graph, trim, reverse, transition_relation,
    language_equal, language_words, word_in_language,
    is_right_resolving, is_left_resolving,
    _membership_dfa, _out_edges, _in_edges, context_class_count,
)

ZERO, FINITE, INFINITE = "zero", "finite", "infinite"
EMPTY = "empty"


# ---------------------------------------------------------------------------
# Counting one-sided label rays


def _branching_on_or_after_cycle(trans, start):
    """Infinitely many infinite paths from ``start`` in a deterministic graph?

    ``trans``: state -> {symbol -> state}, every state with >= 1 successor.
    True iff the part reachable from start has a branching state lying on a
    cycle or reachable from one; otherwise the path tree is eventually a
    finite bundle of eventually-periodic spines.
    """
    # reachable part
    reach = {start}
    stack = [start]
    while stack:
        s = stack.pop()
        for t in trans[s].values():
            if t not in reach:
                reach.add(t)
                stack.append(t)
    # states on cycles: nontrivial SCCs or self-loops (iterative Tarjan)
    index, low, onstk = {}, {}, set()
    order, comp = [], {}
    counter = [0]
    for root in reach:
        if root in index:
            continue
        work = [(root, iter(sorted(trans[root].values())))]
        index[root] = low[root] = counter[0]; counter[0] += 1
        order.append(root); onstk.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in reach:
                    continue
                if nxt not in index:
                    index[nxt] = low[nxt] = counter[0]; counter[0] += 1
                    order.append(nxt); onstk.add(nxt)
                    work.append((nxt, iter(sorted(trans[nxt].values()))))
                    advanced = True
                    break
                elif nxt in onstk:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[node])
            if low[node] == index[node]:
                scc = []
                while True:
                    m = order.pop(); onstk.discard(m)
                    scc.append(m)
                    if m == node:
                        break
                for m in scc:
                    comp[m] = node
    on_cycle = set()
    members = {}
    for s in reach:
        members.setdefault(comp[s], []).append(s)
    for rep, group in members.items():
        if len(group) > 1:
            on_cycle.update(group)
        else:
            s = group[0]
            if s in trans[s].values():
                on_cycle.add(s)
    # forward closure of cycle states
    marked = set(on_cycle)
    stack = list(on_cycle)
    while stack:
        s = stack.pop()
        for t in trans[s].values():
            if t not in marked:
                marked.add(t)
                stack.append(t)
    return any(len(trans[s]) >= 2 for s in marked)


@lru_cache(maxsize=None)
def _singleton_dfa(g, backwards):
    """Powerset transitions of g (or its reverse) seeded from every singleton."""
    h = reverse(g) if backwards else g
    out = _out_edges(h)

    def step(A, a):
        return frozenset(e[2] for s in A for e in out[s] if e[1] == a)

    table = {}
    queue = deque(frozenset([s]) for s in h.states)
    for s in h.states:
        table.setdefault(frozenset([s]), None)
    while queue:
        A = queue.popleft()
        if table.get(A):
            continue
        row = {}
        for a in h.alphabet:
            B = step(A, a)
            if B:
                row[a] = B
                if B not in table:
                    table[B] = None
                    queue.append(B)
        table[A] = row
    return table


def _label_rays_infinite(g, state, side):
    """Infinitely many one-sided label rays from (right) or into (left) a state?"""
    table = _singleton_dfa(g, backwards=(side == "left"))
    start = frozenset([state])
    return _branching_on_or_after_cycle(table, start)


def ray_cardinality(g, state, side):
    """Classify the set of one-sided label rays at a state of a resolved graph.

    Requires the graph to be resolved on the queried side so that rays and
    paths coincide; on such input the answer is read off the reachable
    subgraph directly.
    """
    if side not in ("left", "right"):
        raise InputError("side must be 'left' or 'right'")
    if state not in set(g.states):
        raise InputError("unknown state %r" % state)
    if side == "right" and not is_right_resolving(g):
        raise ContractViolationError("graph is not right-resolving")
    if side == "left" and not is_left_resolving(g):
        raise ContractViolationError("graph is not left-resolving")
    h = g if side == "right" else reverse(g)
    out = _out_edges(h)
    if not out[state]:
        return ZERO
    trans = {s: {a: d for (_, a, d) in out[s]} for s in h.states}
    return INFINITE if _branching_on_or_after_cycle(trans, state) else FINITE


def cylinder_class(g, word):
    """Cardinality class of the position cylinder of ``word``.

    Empty iff the word is outside the language; infinite iff some path
    reading it starts at a state with infinitely many left label rays or
    ends at one with infinitely many right label rays.
    """
    g = trim(g)
    rel = transition_relation(g, word)
    if not rel:
        return EMPTY
    ilc, irc = _ray_profile(g)
    for (p, q) in rel:
        if p in ilc or q in irc:
            return INFINITE
    return FINITE


@lru_cache(maxsize=None)
def _ray_profile(g):
    ilc = frozenset(s for s in g.states if _label_rays_infinite(g, s, "left"))
    irc = frozenset(s for s in g.states if _label_rays_infinite(g, s, "right"))
    return ilc, irc


# ---------------------------------------------------------------------------
# The derivative presentation


def derive(g, validate_len=None):
    """Presentation of the derivative: words whose cylinders are infinite.

    Construction: mark states whose left (right) label-ray count is
    infinite, take the forward closure of the left-infinite states and the
    backward closure of the right-infinite ones, and return the disjoint
    union of the two closed subgraphs.  Any path in the forward part
    extends backward to a left-infinite state, and symmetrically, so the
    union's language is exactly the derivative language.  The two parts
    stay disjoint: gluing them could splice histories that no single
    witness path realizes.
    """
    g = trim(g)
    if g.is_empty:
        return g
    ilc, irc = _ray_profile(g)
    out, inc = _out_edges(g), _in_edges(g)

    fwd = set(ilc)
    stack = list(ilc)
    while stack:
        s = stack.pop()
        for (_, a, d) in out[s]:
            if d not in fwd:
                fwd.add(d)
                stack.append(d)
    bwd = set(irc)
    stack = list(irc)
    while stack:
        s = stack.pop()
        for (src, a, _) in inc[s]:
            if src not in bwd:
                bwd.add(src)
                stack.append(src)

    states = {"f." + s for s in fwd} | {"b." + s for s in bwd}
    edges = set()
    for (s, a, d) in g.edges:
        if s in fwd:  # forward-closed: d in fwd automatically
            edges.add(("f." + s, a, "f." + d))
        if d in bwd:
            edges.add(("b." + s, a, "b." + d))
    result = trim(make_graph(g.alphabet, states, edges))
    if validate_len is not None:
        for n in range(validate_len + 1):
            expect = {w for w in language_words(g, n)
                      if cylinder_class(g, w) == INFINITE}
            assert language_words(result, n) == expect, \
                "derivative language mismatch at length %d" % n
    return result


@dataclass(frozen=True, slots=True)
class DerivativeChain:
    presentations: tuple  # X = X^(0), X^(1), ..., X^(rank)
    rank: int
    perfect_kernel_empty: bool


def rank_chain(g):
    """Iterate the derivative to its language fixpoint."""
    g = trim(g)
    chain = [g]
    while True:
        nxt = derive(chain[-1])
        if language_equal(chain[-1], nxt):
            break
        chain.append(nxt)
    return DerivativeChain(tuple(chain), len(chain) - 1, chain[-1].is_empty)


def is_countable(g):
    """True iff the derivative chain terminates at the empty shift."""
    return rank_chain(g).perfect_kernel_empty


# ---------------------------------------------------------------------------
# Independent growth oracle


def cylinder_growth_oracle(g, word, k_max):
    """Counts of centered extensions of ``word``: for k = 0..k_max the number
    of words alpha+word+beta in the language with |alpha| = |beta| = k.

    The sequence is nondecreasing and stabilizes iff the cylinder is finite.
    Counted on the membership DFA, where distinct words are distinct paths.
    """
    g = trim(g)
    if g.is_empty:
        return tuple(0 for _ in range(k_max + 1))
    table = _membership_dfa(g)
    top = frozenset(g.states)

    def push(counts):
        nxt = {}
        for A, c in counts.items():
            for a in g.alphabet:
                B = table[A][a]
                if B:
                    nxt[B] = nxt.get(B, 0) + c
        return nxt

    def through_word(counts):
        nxt = {}
        for A, c in counts.items():
            B = A
            for sym in word:
                B = table[B].get(sym) if B in table else None
                if not B:
                    B = None
                    break
            if B:
                nxt[B] = nxt.get(B, 0) + c
        return nxt

    out = []
    left = {top: 1}
    for k in range(k_max + 1):
        if k > 0:
            left = push(left)
        mid = through_word(left)
        right = mid
        for _ in range(k):
            right = push(right)
        out.append(sum(right.values()))
    return tuple(out)


def growth_classification(g, word, window=None, k_cap=None):
    """Oracle verdict on the cylinder of ``word`` from centered-count growth.

    Finite once ``window`` + 1 consecutive counts are equal (window defaults
    to the squared state count, justified by pumping boundary state pairs of
    centered extensions); infinite if growth continues past ``k_cap``.
    """
    g = trim(g)
    if not word_in_language(g, word):
        return EMPTY
    n = len(g.states)
    if window is None:
        window = n * n
    if k_cap is None:
        k_cap = 3 * (window + 1) + len(word) + 4
    counts = cylinder_growth_oracle(g, word, k_cap)
    run = 0
    for k in range(1, len(counts)):
        if counts[k] == counts[k - 1]:
            run += 1
            if run >= window:
                return FINITE
        else:
            run = 0
    return INFINITE
