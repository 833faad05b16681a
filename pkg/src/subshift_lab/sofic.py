"""Labeled-graph presentations of one-dimensional sofic shifts.

A shift space is represented by a finite directed multigraph with
symbol-labeled edges; the bi-infinite label sequences of its bi-infinite
paths form the presented shift.  On a trim graph the label words of finite
paths are exactly the finite words of the shift, and two words with equal
transition relation have equal context, which is the finite invariant all
the derivative machinery rests on.

Everything here is a pure function of immutable data; results are cached
per graph and safe to share across threads.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError

Word = tuple  # tuple of symbol strings

EPSILON: Word = ()


@dataclass(frozen=True, slots=True)
class LabeledGraph:
    alphabet: tuple
    states: tuple
    edges: frozenset  # of (source, label, target)

    @property
    def is_empty(self):
        return not self.states

    def __repr__(self):
        return "LabeledGraph(states=%d, edges=%d, alphabet=%r)" % (
            len(self.states), len(self.edges), list(self.alphabet))


def make_graph(alphabet, states, edges):
    """Validate and normalize a graph; duplicate edges are collapsed."""
    alphabet = tuple(str(a) for a in alphabet)
    if not alphabet:
        raise InputError("alphabet must be non-empty")
    if len(set(alphabet)) != len(alphabet):
        raise InputError("duplicate symbols in alphabet")
    states = tuple(sorted(str(s) for s in states))
    if len(set(states)) != len(states):
        raise InputError("duplicate state ids")
    sset, aset = set(states), set(alphabet)
    norm = set()
    for (src, label, dst) in edges:
        src, label, dst = str(src), str(label), str(dst)
        if src not in sset or dst not in sset:
            raise InputError("edge endpoint %r/%r not a declared state" % (src, dst))
        if label not in aset:
            raise InputError("edge label %r not in alphabet" % label)
        norm.add((src, label, dst))
    return LabeledGraph(alphabet, states, frozenset(norm))


def empty_graph(alphabet):
    return make_graph(alphabet, (), ())


def graph_to_json(g):
    return json.dumps({
        "alphabet": list(g.alphabet),
        "states": list(g.states),
        "edges": [list(e) for e in sorted(g.edges)],
    }, indent=2)


def graph_from_json(text):
    try:
        data = json.loads(text)
        return make_graph(data["alphabet"], data["states"], data["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("bad graph JSON: %s" % exc) from exc


def parse_word(text, alphabet):
    """Parse the textual word form: plain characters, or comma separated."""
    if text == "":
        return EPSILON
    if "," in text or any(len(a) > 1 for a in alphabet):
        syms = tuple(s for s in text.split(",") if s != "")
    else:
        syms = tuple(text)
    aset = set(alphabet)
    for s in syms:
        if s not in aset:
            raise InputError("symbol %r not in alphabet" % s)
    return syms


def format_word(word):
    if any(len(s) > 1 for s in word):
        return ",".join(word)
    return "".join(word)


@lru_cache(maxsize=None)
def _out_edges(g):
    out = {s: [] for s in g.states}
    for e in sorted(g.edges):
        out[e[0]].append(e)
    return {s: tuple(es) for s, es in out.items()}


@lru_cache(maxsize=None)
def _in_edges(g):
    inc = {s: [] for s in g.states}
    for e in sorted(g.edges):
        inc[e[2]].append(e)
    return {s: tuple(es) for s, es in inc.items()}


def trim(g):
    """Maximal subgraph in which every state has an in and an out edge.

    Iterated to a fixed point, so every surviving state lies on a
    bi-infinite path.  Returns the empty graph when no such path exists.
    """
    edges = set(g.edges)
    states = set(g.states)
    while True:
        has_out = {e[0] for e in edges}
        has_in = {e[2] for e in edges}
        keep = {s for s in states if s in has_out and s in has_in}
        new_edges = {e for e in edges if e[0] in keep and e[2] in keep}
        if keep == states and new_edges == edges:
            break
        states, edges = keep, new_edges
    return make_graph(g.alphabet, states, edges)


def is_trim(g):
    return trim(g) == g


def reverse(g):
    """Edge-reversed graph (presents the mirror-image shift)."""
    return make_graph(g.alphabet, g.states, [(d, a, s) for (s, a, d) in g.edges])


def is_right_resolving(g):
    for s, es in _out_edges(g).items():
        labels = [e[1] for e in es]
        if len(labels) != len(set(labels)):
            return False
    return True


def is_left_resolving(g):
    return is_right_resolving(reverse(g))


# ---------------------------------------------------------------------------
# Transition relations and contexts


def transition_relation(g, word):
    """Set of state pairs (p, q) joined by a path labeled ``word``."""
    aset = set(g.alphabet)
    for s in word:
        if s not in aset:
            raise InputError("symbol %r not in alphabet" % s)
    rel = frozenset((s, s) for s in g.states)
    for sym in word:
        rel = compose_relations(g, rel, _symbol_relation(g, sym))
        if not rel:
            return rel
    return rel


@lru_cache(maxsize=None)
def _symbol_relation(g, sym):
    return frozenset((s, d) for (s, a, d) in g.edges if a == sym)


def compose_relations(g, r1, r2):
    by_src = {}
    for (a, b) in r2:
        by_src.setdefault(a, []).append(b)
    out = set()
    for (a, b) in r1:
        for c in by_src.get(b, ()):
            out.add((a, c))
    return frozenset(out)


@dataclass(frozen=True, slots=True)
class ContextClass:
    representative: Word
    relation: frozenset
    members: int  # words of length <= probe_len in this class


@dataclass(frozen=True, slots=True)
class ContextPartition:
    classes: tuple
    probe_len: int
    stabilized: bool
    stabilized_at: object  # int or None
    has_empty_class: bool  # some word lies outside the language


def context_partition(g, probe_len):
    """Partition the words of length <= probe_len in the language by relation.

    Stabilization is detected by closure: once a whole length adds no new
    relation and the collected set is closed under composition, no longer
    word can produce a new class.
    """
    if g.is_empty:
        return ContextPartition((), probe_len, True, 0, True)
    identity = frozenset((s, s) for s in g.states)
    sym_rels = {a: _symbol_relation(g, a) for a in g.alphabet}
    # DP over relation classes: relation -> (representative, count at this length)
    current = {identity: (EPSILON, 1)}
    totals = {identity: [EPSILON, 1]}
    seen = {identity}
    has_empty = False
    stabilized_at = None
    for length in range(1, probe_len + 1):
        nxt = {}
        new_rel = False
        for rel, (rep, cnt) in current.items():
            for a in g.alphabet:
                r2 = compose_relations(g, rel, sym_rels[a])
                if not r2:
                    has_empty = True
                    continue
                rep2 = rep + (a,)
                if r2 in nxt:
                    old_rep, old_cnt = nxt[r2]
                    nxt[r2] = (min(old_rep, rep2), old_cnt + cnt)
                else:
                    nxt[r2] = (rep2, cnt)
        for rel, (rep, cnt) in nxt.items():
            if rel not in seen:
                seen.add(rel)
                new_rel = True
            if rel in totals:
                totals[rel][1] += cnt
                totals[rel][0] = min(totals[rel][0], rep, key=lambda w: (len(w), w))
            else:
                totals[rel] = [rep, cnt]
        if stabilized_at is None and not new_rel and _closed_under_composition(g, seen):
            stabilized_at = length
        current = nxt
        if not current:
            break
    classes = tuple(sorted(
        (ContextClass(tuple(rep), rel, cnt) for rel, (rep, cnt) in totals.items()),
        key=lambda c: (len(c.representative), c.representative)))
    if not has_empty:
        has_empty = _language_is_proper(g)
    return ContextPartition(classes, probe_len, stabilized_at is not None,
                            stabilized_at, has_empty)


def _closed_under_composition(g, rels):
    rels = list(rels)
    rset = set(rels)
    for r1 in rels:
        for r2 in rels:
            c = compose_relations(g, r1, r2)
            if c and c not in rset:
                return False
    return True


def _language_is_proper(g):
    """True iff some word lies outside the language (membership DFA can die)."""
    for A in _membership_dfa(g):
        for a in g.alphabet:
            if not _subset_step(g, A, a):
                return True
    return False


@lru_cache(maxsize=None)
def context_class_count(g):
    """Stabilized number of contexts, counting the empty context when present.

    The probe length grows until the relation monoid closes, so the result
    does not depend on any caller-supplied bound.
    """
    if g.is_empty:
        return 1
    probe = 1
    while True:
        part = context_partition(g, probe)
        if part.stabilized:
            return len(part.classes) + (1 if part.has_empty_class else 0)
        probe += max(2, probe)


# ---------------------------------------------------------------------------
# Language via the membership DFA (powerset from the full state set)


def _subset_step(g, subset, sym):
    out = _out_edges(g)
    return frozenset(e[2] for s in subset for e in out[s] if e[1] == sym)


@lru_cache(maxsize=None)
def _membership_dfa(g):
    """All subsets reachable from the full state set, with transitions.

    A word is in the language iff walking it from the top subset never
    hits the empty set.
    """
    top = frozenset(g.states)
    table = {}
    if not top:
        return table
    queue = deque([top])
    table[top] = {}
    while queue:
        A = queue.popleft()
        for a in g.alphabet:
            B = _subset_step(g, A, a)
            table[A][a] = B
            if B and B not in table:
                table[B] = {}
                queue.append(B)
    return table


def word_in_language(g, word):
    if g.is_empty:
        return False
    table = _membership_dfa(g)
    A = frozenset(g.states)
    for sym in word:
        A = table[A].get(sym) if A in table else None
        if not A:
            return False
    return True


def language_words(g, n):
    """All length-n label words of paths (equals the length-n language on trim input)."""
    if g.is_empty:
        return set()
    table = _membership_dfa(g)
    words = set()
    stack = [(frozenset(g.states), EPSILON)]
    while stack:
        A, w = stack.pop()
        if len(w) == n:
            words.add(w)
            continue
        for a in g.alphabet:
            B = table[A][a]
            if B:
                stack.append((B, w + (a,)))
    return words


def language_equal(g1, g2, _witness=False):
    """Exact language equality via a product walk of the membership DFAs."""
    alphabet = tuple(dict.fromkeys(g1.alphabet + g2.alphabet))
    t1, t2 = _membership_dfa(g1), _membership_dfa(g2)
    start = (frozenset(g1.states) or None, frozenset(g2.states) or None)
    if (start[0] is None) != (start[1] is None):
        return False
    if start[0] is None:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        A, B = queue.popleft()
        for a in alphabet:
            A2 = t1[A].get(a) if A is not None else None
            B2 = t2[B].get(a) if B is not None else None
            A2 = A2 or None
            B2 = B2 or None
            if (A2 is None) != (B2 is None):
                return False
            if A2 is None:
                continue
            pair = (A2, B2)
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return True


# ---------------------------------------------------------------------------
# Resolving presentations (powerset construction) and SFT ingestion


def _powerset_presentation(g):
    """Subset graph explored from the full state set, then trimmed.

    The trimmed result is right-resolving and presents the same shift:
    every point of the original shift is read along the stabilized
    decreasing subset sequence of its left tails.
    """
    if g.is_empty:
        return g
    table = _membership_dfa(g)
    def name(A):
        return "+".join(sorted(A))
    states = set()
    edges = set()
    for A, row in table.items():
        states.add(name(A))
        for a, B in row.items():
            if B:
                edges.add((name(A), a, name(B)))
    return trim(make_graph(g.alphabet, states, edges))


def resolve_right(g):
    """Right-resolving presentation of the same shift (subset construction + trim)."""
    return _powerset_presentation(g)


def resolve_left(g):
    """Left-resolving presentation of the same shift."""
    return reverse(_powerset_presentation(reverse(g)))


def from_forbidden_words(alphabet, forbidden):
    """De-Bruijn-style presentation of the SFT avoiding the given words.

    States are the allowed words of length m-1 (m the longest forbidden
    word); edges advance by one symbol when the combined m-window avoids
    every forbidden factor.  The result is trimmed and may be empty.
    """
    alphabet = tuple(str(a) for a in alphabet)
    forb = {tuple(w) for w in forbidden}
    if EPSILON in forb:
        return empty_graph(alphabet)
    m = max((len(w) for w in forb), default=1)

    def clean(word):
        return not any(word[i:i + len(f)] == f for f in forb
                       for i in range(len(word) - len(f) + 1))

    def name(word):
        return "".join(word) if word else "^"

    level = [EPSILON]
    for _ in range(m - 1):
        level = [w + (a,) for w in level for a in alphabet if clean(w + (a,))]
    states = list(level)
    edges = set()
    for w in states:
        for a in alphabet:
            nxt = w + (a,)
            if clean(nxt):
                edges.add((name(w), a, name(nxt[1:])))
    return trim(make_graph(alphabet, {name(w) for w in states}, edges))
