"""Finite posets and their order-embedding configurations.

Every non-minimal element x is rendered as a configuration with a dedicated
half-line to the right of the origin, a staircase of ruler rectangles below
it and, above it, one rectangle sequence per immediate predecessor whose
nth member shows a growing centered window of that predecessor's own
configuration.  Minimal elements are unary.  Each element uses fresh
symbols, so patterns of one configuration can occur in another only through
these embedded windows; that makes finite-window pattern containment mirror
the order relation.

Scheme "poset-1" geometry, writing rho = depth(x) and W(t) = phi(t, rho+1):
column span t covers [W(t-1), W(t)-1] and has width phi(t, rho).  Ruler t
fills rows -t..-1 of its span; rank-1 rulers are squares with a diagonal,
higher ranks tile into lower-rank rulers hanging from the line.  The data
rectangle of predecessor y at span t is t*k(y) rows tall and shows f(y)
over a window centered on y's origin (clipped to the span width, at most
2t columns each way); sequences for successive predecessors are stacked
with one separator row between them.
"""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from ..errors import InputError
from .base import render_window

SCHEME_VERSION = "poset-1"


@dataclass(frozen=True, slots=True)
class Poset:
    elements: tuple
    leq: frozenset  # pairs (a, b) meaning a <= b

    def below(self, a, b):
        return (a, b) in self.leq


def make_poset(elements, leq):
    """Validate reflexivity, antisymmetry and transitivity on ingest."""
    elements = tuple(str(e) for e in elements)
    if len(set(elements)) != len(elements) or not elements:
        raise InputError("elements must be distinct and non-empty")
    eset = set(elements)
    rel = set()
    for (a, b) in leq:
        a, b = str(a), str(b)
        if a not in eset or b not in eset:
            raise InputError("relation mentions unknown element")
        rel.add((a, b))
    for e in elements:
        if (e, e) not in rel:
            raise InputError("relation is not reflexive at %r" % e)
    for (a, b) in rel:
        if a != b and (b, a) in rel:
            raise InputError("relation is not antisymmetric on %r,%r" % (a, b))
    for (a, b) in rel:
        for (c, d) in rel:
            if b == c and (a, d) not in rel:
                raise InputError("relation is not transitive")
    return Poset(elements, frozenset(rel))


def poset_to_json(p):
    return json.dumps({"elements": list(p.elements),
                       "leq": [list(x) for x in sorted(p.leq)]})


def poset_from_json(text):
    try:
        data = json.loads(text)
        return make_poset(data["elements"], data["leq"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("bad poset JSON: %s" % exc) from exc


@dataclass(frozen=True, slots=True)
class PosetStats:
    depth: tuple        # ((element, r), ...): longest descending chain - 1
    predecessors: tuple  # ((element, (immediate predecessors...)), ...)
    weight: tuple       # ((element, k), ...): 1 + sum of predecessor weights
    minimal: tuple

    def r(self, x):
        return dict(self.depth)[x]

    def p(self, x):
        return dict(self.predecessors)[x]

    def k(self, x):
        return dict(self.weight)[x]


def poset_stats(p):
    """Depth, immediate predecessors, weights and minimal elements."""
    strictly_below = {e: [y for y in p.elements if y != e and p.below(y, e)]
                      for e in p.elements}
    depth = {}

    def r(x):
        if x not in depth:
            depth[x] = 1 + max((r(y) for y in strictly_below[x]), default=-1)
        return depth[x]

    for e in p.elements:
        r(e)
    preds = {}
    for x in p.elements:
        below = strictly_below[x]
        preds[x] = tuple(sorted(
            y for y in below
            if not any(p.below(y, z) and p.below(z, x) and z not in (x, y)
                       for z in below)))
    weight = {}

    def k(x):
        if x not in weight:
            weight[x] = 1 if not preds[x] else 1 + sum(k(y) for y in preds[x])
        return weight[x]

    for e in p.elements:
        k(e)
    minimal = tuple(sorted(e for e in p.elements if depth[e] == 0))
    return PosetStats(tuple(sorted(depth.items())),
                      tuple(sorted(preds.items())),
                      tuple(sorted(weight.items())),
                      minimal)


@lru_cache(maxsize=None)
def phi(n, r):
    """phi(n, 1) = n and phi(n, r) = sum of phi(i, r-1) for i = 1..n."""
    if n < 1 or r < 1:
        raise InputError("phi needs n >= 1 and r >= 1")
    if r == 1:
        return n
    return sum(phi(i, r - 1) for i in range(1, n + 1))


# ---------------------------------------------------------------------------
# Configuration rendering


def _ruler_cell(element, t, rho, u, v):
    """Cell inside ruler (size t, rank rho); u from its left, v from its top."""
    if rho == 1:
        return "%s.dg" % element if u == v else "%s.r1" % element
    off = 0
    for i in range(1, t + 1):
        w = phi(i, rho - 1)
        if u < off + w:
            if v < i:
                return _ruler_cell(element, i, rho - 1, u - off, v)
            return "%s.r%d" % (element, rho)
        off += w
    return "%s.r%d" % (element, rho)  # unreachable for valid u


def _poset_cell(p, stats, x, cx, cy):
    """Symbol of f(x) at configuration coordinates (cx, cy)."""
    if not stats.p(x):
        return "%s.bg" % x
    rho = stats.r(x)
    if cy == 0:
        return ("%s.ln" % x) if cx >= 0 else ("%s.out" % x)
    if cx < 0:
        return "%s.out" % x
    # locate the column span
    t, left = 1, 0
    while True:
        w = phi(t, rho)
        if cx < left + w:
            break
        left += w
        t += 1
    if cy < 0:
        if -cy <= t:
            return _ruler_cell(x, t, rho, cx - left, -cy - 1)
        return "%s.und" % x
    base = 1
    for y in stats.p(x):
        hgt = t * stats.k(y)
        if cy < base:
            return "%s.sep" % x
        if cy < base + hgt:
            w_here = phi(t, rho)
            a = min(2 * t, (w_here - 1) // 2)
            fy_x = (cx - left) - a
            fy_y = (cy - base) - (hgt - 1) // 2
            return _poset_cell(p, stats, y, fy_x, fy_y)
        base += hgt + 1
    return "%s.sky" % x


def poset_config(p, x, x0, y0, w, h):
    """Window of the configuration attached to element x."""
    if x not in set(p.elements):
        raise InputError("unknown element %r" % x)
    stats = poset_stats(p)
    return render_window(
        "poset", (("element", x),), SCHEME_VERSION,
        lambda cx, cy: _poset_cell(p, stats, x, cx, cy), x0, y0, w, h)


def _blocks(pattern, size):
    out = set()
    H, W = pattern.height, pattern.width
    for y in range(H - size + 1):
        for x in range(W - size + 1):
            out.add(tuple(pattern.cells[y + r][x:x + size] for r in range(size)))
    return out


def thread_cap():
    try:
        return max(1, int(os.environ.get("SUBSHIFT_LAB_THREADS", "1")))
    except ValueError:
        return 1


def verify_embedding(p, small_window, big_window, extract_extent=None):
    """Pattern-containment matrix over element pairs.

    entry (x, y) is True when every small block of f(y)'s small render
    (extent ``extract_extent`` around the origin) occurs in f(x)'s big
    render; at adequate windows this equals y <= x.
    """
    if extract_extent is None:
        extract_extent = max(small_window, 4)
    e = extract_extent
    half = big_window // 2

    def renders(x):
        small = poset_config(p, x, -e, -e, 2 * e + 1, 2 * e + 1).window
        big = poset_config(p, x, -half, -half, big_window, big_window).window
        return x, _blocks(small, small_window), _blocks(big, small_window)

    cap = thread_cap()
    if cap > 1:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            rendered = list(pool.map(renders, p.elements))
    else:
        rendered = [renders(x) for x in p.elements]
    small_of = {x: s for x, s, _ in rendered}
    big_of = {x: b for x, _, b in rendered}
    return {(x, y): small_of[y] <= big_of[x]
            for x in p.elements for y in p.elements}
