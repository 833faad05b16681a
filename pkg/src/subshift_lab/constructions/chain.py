"""Doubling-gap shift (1-D) and the descending chain of 2-D configurations.

1-D part: the binary shift whose points carry markers at the powers of two
(2^0 = 1 included).  Consecutive marker gaps must double, the marker at
distance 2g after a gap-g pair is mandatory, and a gap-g pair must be
preceded by a marker at distance g/2 unless it is chain-initial.  The shift
is not sofic; ``powers_of_two_forbidden`` truncates the forbidden family at
a word length, giving a sofic over-approximation that agrees with the true
language below the truncation horizon.

2-D part, scheme "chain-1": configuration x_1 has the marker row on the
x-axis and, on each line at height 2^(h-1), between consecutive markers of
the line below, a prefix of the bottom row's pattern.  The successive chain
points are the left-shift limits of this configuration; they are rendered
exactly by reading x_1 around the self-similar columns

    S_i = sum_{j=2..i} 2^(22 - 6 (j - 2)),   i = 1..4,

where the window content has stabilized (chain indexes above 4 would need
wider offsets and are rejected).  Row contents are resolved lazily through
predecessor/successor queries, so huge offsets cost nothing.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import InputError
from ..sofic import from_forbidden_words
from .base import render_window

SCHEME_VERSION = "chain-1"

MAX_CHAIN_INDEX = 4
_SHIFT_EXPONENTS = (22, 16, 10)  # for chain indexes 2, 3, 4

_HOP_LIMIT = 512


def powers_of_two_forbidden(max_len):
    """All forbidden words of length <= max_len.

    Families: three markers with a non-doubling gap pair; a zero where the
    doubled marker must sit; a gap-g pair preceded by ceil(g/2) zeros (for
    g >= 2), which outlaws non-initial gaps without their half-size
    predecessor.
    """
    if max_len < 1:
        raise InputError("max_len must be >= 1")
    out = set()
    for g1 in range(1, max_len):
        for g2 in range(1, max_len):
            word = ("1",) + ("0",) * (g1 - 1) + ("1",) + ("0",) * (g2 - 1) + ("1",)
            if len(word) <= max_len and g2 != 2 * g1:
                out.add(word)
        word = ("1",) + ("0",) * (g1 - 1) + ("1",) + ("0",) * (2 * g1 - 1) + ("0",)
        if len(word) <= max_len:
            out.add(word)
    for g in range(2, max_len):
        lead = (g + 1) // 2
        word = ("0",) * lead + ("1",) + ("0",) * (g - 1) + ("1",)
        if len(word) <= max_len:
            out.add(word)
    return out


def powers_of_two_graph(max_gap):
    """Trimmed de-Bruijn presentation of the truncated shift.

    The truncation keeps every rule about gaps up to ``max_gap``; the
    longest such word is the forced-doubling rule at 3 * max_gap + 2.
    """
    if max_gap < 1:
        raise InputError("max_gap must be >= 1")
    max_len = 3 * max_gap + 2
    return from_forbidden_words(["0", "1"], powers_of_two_forbidden(max_len))


# ---------------------------------------------------------------------------
# Lazy row engine for the 2-D configuration


def _is_pow2(v):
    return v >= 1 and (v & (v - 1)) == 0


@lru_cache(maxsize=None)
def _succ(h, x):
    """Smallest marker position > x on row h, or None."""
    if h == 0:
        if x < 1:
            return 1
        return 1 << x.bit_length()  # smallest power of two > x
    cur = x
    for _ in range(_HOP_LIMIT):
        p = _pred(h - 1, cur)
        if p is None:
            first = _succ(h - 1, cur)
            if first is None:
                return None
            cur = first  # row-h markers start inside the first gap below
            continue
        q = _succ(h - 1, p)
        if q is None:
            return None
        fill = q - p - 1
        off = cur - p  # want p + 2^t > cur, i.e. 2^t > off
        cand = 1 if off < 1 else 1 << off.bit_length()
        if cand <= fill:
            return p + cand
        cur = q  # nothing left in this gap; continue after its end
    raise InputError("row query exceeded hop limit")


@lru_cache(maxsize=None)
def _pred(h, x):
    """Largest marker position <= x on row h, or None."""
    if h == 0:
        if x < 1:
            return None
        return 1 << (x.bit_length() - 1)
    cur = x
    for _ in range(_HOP_LIMIT):
        p = _pred(h - 1, cur)
        if p is None:
            return None
        q = _succ(h - 1, p)
        fill = (q - p - 1) if q is not None else 0
        off = min(cur - p, fill)
        if off >= 1:
            return p + (1 << (off.bit_length() - 1))
        cur = p - 1  # gap holds nothing at or before cur; try the one before
    raise InputError("row query exceeded hop limit")


def _row_value(h, x):
    if h == 0:
        return 1 if _is_pow2(x) else 0
    p = _pred(h - 1, x - 1)  # largest marker below strictly left of x
    if p is None:
        return 0
    q = _succ(h - 1, p)
    if q is None or x >= q:
        return 0
    off = x - p
    return 1 if (_is_pow2(off) and off <= q - p - 1) else 0


def _height_to_row(y):
    """Occupied lines: y = 0 is row 0, y = 2^(h-1) is row h."""
    if y == 0:
        return 0
    if y >= 1 and _is_pow2(y):
        return y.bit_length()  # 1 -> 1, 2 -> 2, 4 -> 3, ...
    return None


def chain_shift_offset(index):
    if not 1 <= index <= MAX_CHAIN_INDEX:
        raise InputError("chain index must be in 1..%d" % MAX_CHAIN_INDEX)
    return sum(1 << e for e in _SHIFT_EXPONENTS[:index - 1])


def chain_value(index, x, y):
    """Cell of the chain point x_index at (x, y)."""
    h = _height_to_row(y)
    if h is None:
        return "0"
    return str(_row_value(h, x + chain_shift_offset(index)))


def chain_point(index, x0, y0, w, h):
    """Window of the chain point x_index under scheme chain-1."""
    off = chain_shift_offset(index)  # validates the index
    return render_window(
        "chain", (("index", index),), SCHEME_VERSION,
        lambda x, y: chain_value(index, x, y), x0, y0, w, h)


def _blocks(window_pattern, size):
    rows = ["".join(r) for r in window_pattern.cells]
    out = set()
    H, W = len(rows), len(rows[0])
    for y in range(H - size + 1):
        for x in range(W - size + 1):
            out.add(tuple(rows[y + r][x:x + size] for r in range(size)))
    return out


def verify_chain(i, j, small_window, big_window):
    """Finite-window evidence for the subpattern comparison of x_i and x_j.

    Blocks of each point are drawn from its origin window spanning twice
    the block size horizontally and one block vertically (high rows near a
    deeper point's origin are sparser than anything a finite window of the
    shallower point can show, so taller extraction windows would defeat the
    comparison at any feasible size).  They are searched in the other
    point's big render, x centered on the origin and y upward from the
    axis.  ``leq`` reads x_j <= x_i, ``geq`` the reverse.
    """
    if big_window < 4 * small_window:
        raise InputError("big_window must be >= 4 * small_window")
    s = small_window
    x0 = -(big_window // 2)
    big_i = chain_point(i, x0, 0, big_window, big_window).window
    big_j = chain_point(j, x0, 0, big_window, big_window).window
    sm_i = chain_point(i, -(2 * s - 1), 0, 4 * s - 1, s).window
    sm_j = chain_point(j, -(2 * s - 1), 0, 4 * s - 1, s).window
    bi, bj = _blocks(big_i, s), _blocks(big_j, s)
    si, sj = _blocks(sm_i, s), _blocks(sm_j, s)
    return (sj <= bi, si <= bj)
