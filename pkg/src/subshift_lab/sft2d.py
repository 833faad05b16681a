"""Two-dimensional SFT engine: tile sets, patterns, enumeration and search.

Conventions: a pattern stores its rows bottom-first (y grows upward), cell
``None`` is a hole (an unconstrained cell in searches, a wildcard in
occurrence checks).  A tile set is an alphabet plus a finite list of
hole-free forbidden patterns; a pattern is locally admissible when no
forbidden pattern occurs anywhere inside it.
"""

from __future__ import annotations

import itertools
import json
import time
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import BudgetExceededError, InputError

HOLE = None


@dataclass(frozen=True, slots=True)
class Pattern2D:
    origin: tuple  # (x, y) of the bottom-left cell
    cells: tuple   # rows bottom-first, each a tuple of symbols or None

    @property
    def height(self):
        return len(self.cells)

    @property
    def width(self):
        return len(self.cells[0]) if self.cells else 0

    @property
    def hole_free(self):
        return all(c is not None for row in self.cells for c in row)

    def get(self, x, y):
        return self.cells[y - self.origin[1]][x - self.origin[0]]

    def normalized(self):
        return self if self.origin == (0, 0) else Pattern2D((0, 0), self.cells)

    def translate(self, dx, dy):
        return Pattern2D((self.origin[0] + dx, self.origin[1] + dy), self.cells)

    def sub(self, x0, y0, w, h):
        ox, oy = self.origin
        rows = tuple(self.cells[y0 - oy + r][x0 - ox:x0 - ox + w] for r in range(h))
        return Pattern2D((x0, y0), rows)


def make_pattern(rows_bottom_first, origin=(0, 0)):
    rows = tuple(tuple(r) for r in rows_bottom_first)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise InputError("ragged pattern rows")
    if not rows or not rows[0]:
        raise InputError("pattern must be non-empty")
    return Pattern2D(tuple(origin), rows)


def pattern_to_text(p):
    """Top row first; '.' for holes; commas iff some symbol is multi-character."""
    multi = any(c is not None and len(c) > 1 for row in p.cells for c in row)
    lines = []
    for row in reversed(p.cells):
        syms = ["." if c is None else c for c in row]
        lines.append(",".join(syms) if multi else "".join(syms))
    return "\n".join(lines)


def pattern_from_text(text, origin=(0, 0)):
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise InputError("empty pattern text")
    rows = []
    for ln in lines:
        if "," in ln:
            syms = ln.split(",")
        else:
            syms = list(ln)
        rows.append(tuple(HOLE if s == "." else s for s in syms))
    rows.reverse()  # text is top-first, storage bottom-first
    return make_pattern(rows, origin)


@dataclass(frozen=True, slots=True)
class TileSet2D:
    alphabet: tuple
    forbidden: tuple  # hole-free Pattern2D, origins normalized
    meta: tuple = ()  # ((key, value), ...) informational only

    @property
    def window(self):
        if not self.forbidden:
            return (1, 1)
        return (max(f.width for f in self.forbidden),
                max(f.height for f in self.forbidden))


def make_tileset(alphabet, forbidden, meta=()):
    alphabet = tuple(str(a) for a in alphabet)
    if len(set(alphabet)) != len(alphabet) or not alphabet:
        raise InputError("bad alphabet")
    aset = set(alphabet)
    norm = []
    for f in forbidden:
        f = f.normalized()
        if not f.hole_free:
            raise InputError("forbidden patterns must be hole-free")
        for row in f.cells:
            for c in row:
                if c not in aset:
                    raise InputError("forbidden pattern symbol %r not in alphabet" % (c,))
        norm.append(f)
    return TileSet2D(alphabet, tuple(dict.fromkeys(norm)), tuple(meta))


def tileset_to_json(ts):
    return json.dumps({
        "alphabet": list(ts.alphabet),
        "forbidden": [
            {"w": f.width, "h": f.height,
             "cells": [c for row in f.cells for c in row]}
            for f in ts.forbidden
        ],
        "meta": {k: v for k, v in ts.meta},
    })


def tileset_from_json(text):
    try:
        data = json.loads(text)
        forbidden = []
        for f in data["forbidden"]:
            w, h, cells = f["w"], f["h"], f["cells"]
            if len(cells) != w * h:
                raise InputError("forbidden pattern cell count mismatch")
            rows = [tuple(cells[r * w:(r + 1) * w]) for r in range(h)]
            forbidden.append(make_pattern(rows))
        meta = tuple(sorted(data.get("meta", {}).items()))
        return make_tileset(data["alphabet"], forbidden, meta)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("bad tile set JSON: %s" % exc) from exc


@lru_cache(maxsize=None)
def _forbidden_index(ts):
    """size -> frozenset of flattened cell tuples, for O(1) window checks."""
    idx = {}
    for f in ts.forbidden:
        key = (f.width, f.height)
        idx.setdefault(key, set()).add(tuple(c for row in f.cells for c in row))
    return {k: frozenset(v) for k, v in idx.items()}


class Budget:
    """Explicit node/time budget for searches; never silently truncates."""

    def __init__(self, max_nodes=10_000_000, timeout_s=60.0):
        self.max_nodes = max_nodes
        self.timeout_s = timeout_s
        self.nodes = 0
        self.started = time.monotonic()

    def tick(self, partial=0):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceededError("node budget exhausted", partial=partial)
        if self.nodes % 4096 == 0 and \
                time.monotonic() - self.started > self.timeout_s:
            raise BudgetExceededError("time budget exhausted", partial=partial)


def _check_symbols(ts, p):
    aset = set(ts.alphabet)
    for row in p.cells:
        for c in row:
            if c is not None and c not in aset:
                raise InputError("symbol %r not in tile set alphabet" % (c,))


def locally_admissible(ts, p):
    """True iff no forbidden pattern occurs (at any translate) inside p."""
    if not p.hole_free:
        raise InputError("locally_admissible needs a hole-free pattern")
    _check_symbols(ts, p)
    idx = _forbidden_index(ts)
    W, H = p.width, p.height
    for (fw, fh), bad in idx.items():
        if fw > W or fh > H:
            continue
        for y in range(H - fh + 1):
            for x in range(W - fw + 1):
                win = tuple(p.cells[y + r][x + c]
                            for r in range(fh) for c in range(fw))
                if win in bad:
                    return False
    return True


# ---------------------------------------------------------------------------
# Streaming enumeration with memoized row-boundary states


def _valid_rows(ts, width, boundary):
    """All admissible next rows above ``boundary`` (a tuple of full rows)."""
    idx = _forbidden_index(ts)
    sizes = [s for s in idx if s[0] <= width]
    strip = list(boundary)
    H = len(strip)

    def violates(row, upto):
        # check windows touching the new row, ending at column < upto
        for (fw, fh) in sizes:
            if fh > H + 1:
                continue
            rows = strip[H - fh + 1:] + [row]
            bad = idx[(fw, fh)]
            for x in range(0, upto - fw + 1):
                win = tuple(rows[r][x + c] for r in range(fh) for c in range(fw))
                if win in bad:
                    return True
        return False

    out = []
    row = [None] * width

    def rec(col):
        if col == width:
            out.append(tuple(row))
            return
        for sym in ts.alphabet:
            row[col] = sym
            if not violates(tuple(row[:col + 1]), col + 1):
                rec(col + 1)
        row[col] = None

    rec(0)
    return tuple(out)


@lru_cache(maxsize=200_000)
def _valid_rows_cached(ts, width, boundary):
    return _valid_rows(ts, width, boundary)


def enumerate_admissible(ts, width, height, budget=None):
    """Yield the locally admissible width x height patterns.

    Streamed in lexicographic order of the bottom-first row tuples, row
    symbols ordered by the alphabet.  Boundary states (the last window-1
    rows) memoize the admissible next rows so counting shares work.
    """
    if width < 1 or height < 1:
        raise InputError("width and height must be >= 1")
    budget = budget or Budget()
    wh = ts.window[1]
    stack = [((), ())]  # (boundary, rows so far)
    emitted = 0
    # DFS in reverse option order so the stack pops lexicographically
    while stack:
        boundary, rows = stack.pop()
        budget.tick(partial=emitted)
        if len(rows) == height:
            emitted += 1
            yield make_pattern(rows)
            continue
        options = _valid_rows_cached(ts, width, boundary)
        for row in reversed(options):
            nb = (boundary + (row,))[-(wh - 1):] if wh > 1 else ()
            stack.append((nb, rows + (row,)))


def count_admissible(ts, width, height, budget=None):
    """Number of admissible width x height patterns, via boundary-state DP."""
    if width < 1 or height < 1:
        raise InputError("width and height must be >= 1")
    budget = budget or Budget()
    wh = ts.window[1]
    counts = {(): 1}
    total = 0
    for level in range(height):
        nxt = {}
        for boundary, c in counts.items():
            budget.tick(partial=total)
            for row in _valid_rows_cached(ts, width, boundary):
                nb = (boundary + (row,))[-(wh - 1):] if wh > 1 else ()
                nxt[nb] = nxt.get(nb, 0) + c
        counts = nxt
        total = sum(counts.values())
    return total


# ---------------------------------------------------------------------------
# Completion search (holes to fill), extensibility, derivative probe


def _placements_covering(ts, W, H):
    """For each cell, the forbidden-window placements that cover it."""
    idx = _forbidden_index(ts)
    cover = {}
    for (fw, fh), bad in idx.items():
        if fw > W or fh > H:
            continue
        for y in range(H - fh + 1):
            for x in range(W - fw + 1):
                cells = tuple((x + c, y + r) for r in range(fh) for c in range(fw))
                entry = (cells, bad)
                for pos in cells:
                    cover.setdefault(pos, []).append(entry)
    return cover


def complete_patterns(ts, p, budget=None):
    """Yield all hole-free admissible completions of ``p`` (holes filled).

    Depth-first with forward checking and unit propagation; deterministic
    order (alphabet order at each most-constrained cell).
    """
    _check_symbols(ts, p)
    budget = budget or Budget()
    W, H = p.width, p.height
    cover = _placements_covering(ts, W, H)
    grid = {}
    domains = {}
    for y in range(H):
        for x in range(W):
            c = p.cells[y][x]
            if c is None:
                domains[(x, y)] = list(ts.alphabet)
            else:
                grid[(x, y)] = c
    # fixed cells can already violate; also seed the domain narrowing from
    # them so the search grows as a wave out of the constrained region
    for pos in list(grid):
        for cells, bad in cover.get(pos, ()):
            vals = [grid.get(q) for q in cells]
            if all(v is not None for v in vals) and tuple(vals) in bad:
                return

    def prune(pos):
        """Forward-check all windows covering ``pos``; returns (ok, newly_fixed)."""
        fixed = []
        for cells, bad in cover.get(pos, ()):
            missing = [q for q in cells if q not in grid]
            if not missing:
                if tuple(grid[q] for q in cells) in bad:
                    return False, fixed
            elif len(missing) == 1:
                q = missing[0]
                dom = domains[q]
                keep = []
                for cand in dom:
                    vals = tuple(grid[c] if c in grid else cand for c in cells)
                    if vals not in bad:
                        keep.append(cand)
                if not keep:
                    return False, fixed
                if len(keep) < len(dom):
                    domains[q] = keep
                    fixed.append(q)
        return True, fixed

    for pos in list(grid):
        ok, _ = prune(pos)
        if not ok:
            return

    def solve():
        budget.tick()
        # unit propagation: assign all singleton domains first
        trail = []
        queue = deque(q for q, dom in domains.items() if len(dom) == 1)
        ok = True
        touched = set(queue)
        while queue and ok:
            q = queue.popleft()
            if q in grid:
                continue
            dom = domains.pop(q)
            grid[q] = dom[0]
            trail.append((q, dom))
            ok, shrunk = prune(q)
            for s in shrunk:
                if len(domains[s]) == 1 and s not in touched:
                    touched.add(s)
                    queue.append(s)
        if ok:
            if not domains:
                rows = tuple(tuple(grid[(x, y)] for x in range(W)) for y in range(H))
                yield Pattern2D(p.origin, rows)
            else:
                pos = min(domains, key=lambda q: (len(domains[q]), q))
                dom = domains.pop(pos)
                saved = {q: list(domains[q]) for q in domains}
                for cand in dom:
                    grid[pos] = cand
                    ok2, _ = prune(pos)
                    if ok2:
                        yield from solve()
                    del grid[pos]
                    for q in domains:
                        domains[q] = list(saved[q])
                    for q in saved:
                        if q not in domains:
                            domains[q] = list(saved[q])
                domains[pos] = dom
        # undo unit propagation
        for q, dom in reversed(trail):
            del grid[q]
            domains[q] = dom

    yield from solve()


def extensible(ts, p, margin, budget=None):
    """Does p extend to an admissible pattern with ``margin`` free cells on
    all four sides?  Antitone in the margin."""
    if not p.hole_free:
        raise InputError("extensible needs a hole-free pattern")
    if margin < 0:
        raise InputError("margin must be >= 0")
    if margin == 0:
        return locally_admissible(ts, p)
    framed = embed_with_margin(p, margin)
    for _ in complete_patterns(ts, framed, budget=budget):
        return True
    return False


def embed_with_margin(p, margin):
    W, H = p.width + 2 * margin, p.height + 2 * margin
    rows = []
    for y in range(H):
        row = []
        for x in range(W):
            if margin <= x < margin + p.width and margin <= y < margin + p.height:
                row.append(p.cells[y - margin][x - margin])
            else:
                row.append(HOLE)
        rows.append(tuple(row))
    return Pattern2D((p.origin[0] - margin, p.origin[1] - margin), tuple(rows))


def approx_derivative_member(ts, p, agree, margin, budget=None):
    """Finite-scale derivative membership probe.

    True iff p has two distinct admissible margin extensions that agree on
    the ``agree`` x ``agree`` square centered on p's bounding box (rounded
    toward negative coordinates).  Over-approximates derivative membership
    at this depth; antitone in ``agree`` for fixed margin.
    """
    if not p.hole_free:
        raise InputError("pattern must be hole-free")
    if not (margin >= agree >= max(p.width, p.height)):
        raise InputError("need margin >= agree >= pattern bounding square")
    budget = budget or Budget()
    framed = embed_with_margin(p, margin)
    W, H = framed.width, framed.height
    # center of p inside the frame
    cx = margin + (p.width - 1) // 2
    cy = margin + (p.height - 1) // 2
    half_hi = (agree - 1) // 2
    half_lo = agree - 1 - half_hi  # extra cell toward negative side
    x0, y0 = cx - half_lo, cy - half_lo
    x0, y0 = max(0, x0), max(0, y0)
    x0, y0 = min(x0, W - agree), min(y0, H - agree)
    seen = {}
    for comp in complete_patterns(ts, framed, budget=budget):
        key = tuple(comp.cells[y0 + r][x0:x0 + agree] for r in range(agree))
        if key in seen:
            if seen[key] != comp.cells:
                return True
        else:
            seen[key] = comp.cells
    return False


# ---------------------------------------------------------------------------
# Pattern sets and the finite-window subpattern order


@dataclass(frozen=True, slots=True)
class PatternSet:
    size: tuple  # (w, h), common to all members
    patterns: frozenset  # normalized hole-free Pattern2D


def make_pattern_set(patterns):
    pats = frozenset(p.normalized() for p in patterns)
    if not pats:
        raise InputError("pattern set must be non-empty")
    sizes = {(p.width, p.height) for p in pats}
    if len(sizes) != 1:
        raise InputError("pattern set members must share one size")
    return PatternSet(next(iter(sizes)), pats)


def window_patterns(p, w, h):
    """All w x h sub-blocks of a pattern, deduplicated modulo translation."""
    if w > p.width or h > p.height:
        raise InputError("window exceeds pattern size")
    pats = set()
    for y in range(p.height - h + 1):
        for x in range(p.width - w + 1):
            rows = tuple(p.cells[y + r][x:x + w] for r in range(h))
            pats.add(Pattern2D((0, 0), rows))
    return PatternSet((w, h), frozenset(pats))


def _occurs_in(small, big):
    """Does ``small`` occur as a sub-block of ``big``?  Holes are wildcards."""
    sw, sh = small.width, small.height
    for y in range(big.height - sh + 1):
        for x in range(big.width - sw + 1):
            ok = True
            for r in range(sh):
                brow = big.cells[y + r]
                srow = small.cells[r]
                for c in range(sw):
                    a, b = srow[c], brow[x + c]
                    if a is not None and b is not None and a != b:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True
    return False


def subpattern_leq(a, b):
    """Every pattern of ``a`` occurs in some pattern of ``b``.

    With equal sizes this is set inclusion; smaller-in-larger scans all
    translates.  The source of ``a`` sits below the source of ``b`` in the
    subpattern order, as far as this window can tell.
    """
    if a.size[0] > b.size[0] or a.size[1] > b.size[1]:
        raise InputError("pattern size mismatch: %r cannot occur in %r"
                         % (a.size, b.size))
    if a.size == b.size:
        b_keys = {p.cells for p in b.patterns}
        return all(p.cells in b_keys for p in a.patterns)
    return all(any(_occurs_in(p, q) for q in b.patterns) for p in a.patterns)


# ---------------------------------------------------------------------------
# PGM export


def pattern_to_pgm(p, alphabet):
    """ASCII PGM, gray level by alphabet index (light = late symbols)."""
    if not p.hole_free:
        raise InputError("cannot export holes to PGM")
    index = {a: i for i, a in enumerate(alphabet)}
    hi = max(1, len(alphabet) - 1)
    lines = ["P2", "%d %d" % (p.width, p.height), "255"]
    for row in reversed(p.cells):  # top row first in the file
        lines.append(" ".join(str(round(255 * index[c] / hi)) for c in row))
    return "\n".join(lines) + "\n"
