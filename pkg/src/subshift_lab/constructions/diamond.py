"""Nested-diamond tile set: a dedicated line carrying paired structures
whose sizes walk down by one to the right, with decrement signals.

Scheme "diamond-1" (single layer).  A configuration of type (n, m) carries
pairs k = 1..m around line positions c_k, pair k being a red triangle of
size r_k = m-k+1 above the line and a blue triangle of size b_k = n+k-1
below it, with nested base intervals (corners merge when the sizes agree).
Every red apex absorbs a rightward signal one row above itself and emits
one at its own height, so consecutive red sizes drop by exactly one going
right; blue apexes do the same downward and leftward.  The sky above the
signal canopy, the strip between canopy and line, and their mirrored
counterparts all use distinct symbols, which pins each canopy's height
locally and is what makes the smallest configuration rigid.

Symbols.  Line: 'o' outside, '(' ')' blue corners, '[' ']' red corners,
'{' '}' merged corners, 'x' inside both, 'b' inside blue only, 'r' inside
red only.  Upper half: 'I' red interior, '/' '\\' '^' red edges and apex,
'=' red signal, 'U' below-canopy background, 'S' sky.  Lower half is the
mirror: 'i', '%', '&', 'v', '~', 'u', 's'.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import InputError
from .base import collect_2x2, compile_window2_rules, render_window

DIAMOND_SYMBOLS = (
    "o", "(", ")", "[", "]", "{", "}", "x", "b", "r",
    "I", "/", "\\", "^", "=", "U", "S",
    "i", "%", "&", "v", "~", "u", "s",
)

SCHEME_VERSION = "diamond-1"

PAIR_GAP = 2  # 'o' cells between consecutive pairs in canonical windows

# documented probe scales for the finite-depth derivative evidence
ISOLATION_PROBE = {"agree": 7, "margin": 8}       # type (1,1): expect False
CONTINUATION_PROBE = {"agree": 7, "margin": 12}   # type (2,2): expect True


def _pairs(n, m):
    """Centers and sizes of the canonical type-(n, m) pair sequence."""
    if n < 1 or m < 1:
        raise InputError("type parameters must be >= 1")
    out = []
    c = 0
    prev_extent = None
    for k in range(1, m + 1):
        r, b = m - k + 1, n + k - 1
        e = max(r, b)
        if prev_extent is not None:
            c += prev_extent + e + PAIR_GAP + 1
        out.append((c, r, b))
        prev_extent = e
    return tuple(out)


def _line_symbol(pairs, x):
    for (c, r, b) in pairs:
        dx = x - c
        e = max(r, b)
        if abs(dx) > e:
            continue
        if r == b:
            if dx == -r:
                return "{"
            if dx == r:
                return "}"
            return "x"
        lo, hi = min(r, b), max(r, b)
        inner = "[" if r < b else "("
        outer = "(" if r < b else "["
        inner_r = "]" if r < b else ")"
        outer_r = ")" if r < b else "]"
        between = "b" if r < b else "r"
        if dx == -hi:
            return outer
        if dx == -lo:
            return inner
        if dx == lo:
            return inner_r
        if dx == hi:
            return outer_r
        if abs(dx) < lo:
            return "x"
        return between
    return "o"


def _red_canopy_height(pairs, m, x):
    if x <= pairs[0][0]:
        return m + 1
    for idx in range(len(pairs) - 1):
        if pairs[idx][0] < x <= pairs[idx + 1][0]:
            return pairs[idx][1]
    return pairs[-1][1]


def _blue_canopy_depth(pairs, n, m, x):
    if x < pairs[0][0]:
        return n
    for idx in range(len(pairs) - 1):
        if pairs[idx][0] <= x < pairs[idx + 1][0]:
            return pairs[idx + 1][2]
    return pairs[-1][2] + 1


def diamond_symbol(n, m, x, y):
    """Symbol of the canonical type-(n, m) configuration at (x, y)."""
    pairs = _pairs(n, m)
    if y == 0:
        return _line_symbol(pairs, x)
    if y > 0:
        for (c, r, b) in pairs:
            dx = x - c
            top = r - abs(dx)
            if y < top:
                return "I"
            if y == top:
                if dx == 0:
                    return "^"
                return "/" if dx < 0 else "\\"
        h = _red_canopy_height(pairs, m, x)
        if y == h:
            return "="
        return "S" if y > h else "U"
    d = -y
    for (c, r, b) in pairs:
        dx = x - c
        bot = b - abs(dx)
        if d < bot:
            return "i"
        if d == bot and bot > 0:
            if dx == 0:
                return "v"
            return "%" if dx < 0 else "&"
    dep = _blue_canopy_depth(pairs, n, m, x)
    if d == dep:
        return "~"
    return "s" if d > dep else "u"


@lru_cache(maxsize=1)
def diamond_shift():
    """Tile set compiled from the 2x2 windows of canonical configurations.

    Types (n, m) in 1..4 squared cover every corner arrangement (red wider,
    blue wider, merged), interior depths, both signal directions and all
    far-field columns; larger windows introduce no new 2x2 block.
    """
    allowed = set()
    for n in range(1, 5):
        for m in range(1, 5):
            pairs = _pairs(n, m)
            x_lo = pairs[0][0] - max(pairs[0][1], pairs[0][2]) - 4
            x_hi = pairs[-1][0] + max(pairs[-1][1], pairs[-1][2]) + 4
            y_lo = -(n + m) - 3
            y_hi = m + 4
            allowed |= collect_2x2(
                lambda x, y, n=n, m=m: diamond_symbol(n, m, x, y),
                x_lo, y_lo, x_hi - x_lo + 1, y_hi - y_lo + 1)
    return compile_window2_rules(
        DIAMOND_SYMBOLS, allowed,
        meta=(("name", "diamond"), ("scheme_version", SCHEME_VERSION),
              ("pair_gap", str(PAIR_GAP))))


def diamond_config(n, m, x0, y0, w, h):
    """Window of the canonical type-(n, m) configuration.

    Red sizes decrease to the right starting from m, blue sizes grow so
    that they decrease leftward starting from n at the leftmost pair.
    """
    return render_window(
        "diamond", (("n", n), ("m", m)), SCHEME_VERSION,
        lambda x, y: diamond_symbol(n, m, x, y), x0, y0, w, h)


def core_pattern(n, m, radius=None):
    """Window around the first pair, used as the derivative-probe core."""
    pairs = _pairs(n, m)
    e = max(pairs[0][1], pairs[0][2])
    if radius is None:
        radius = e + 1
    cw = diamond_config(n, m, -radius, -radius, 2 * radius + 1, 2 * radius + 1)
    return cw.window


def island_factor_ok(word):
    """Validate a hand-written factor of the one-dimensional island shift.

    Points look like ... 0 a^k 0* a^(k-1) b 0* a^(k-2) b^2 0* ... b^k 0 ...:
    islands of an a-run followed by a b-run, the a-run dropping and the
    b-run growing by one from island to island, separated by gaps of 0s.
    A factor sees consecutive islands, possibly cut at the word ends; cut
    runs are only bounded, interior runs must step exactly.  ``word`` is a
    sequence over {'0', 'a', 'b'}.
    """
    word = tuple(word)
    if any(c not in ("0", "a", "b") for c in word):
        raise InputError("island words use the alphabet 0, a, b")
    segs = []
    i = 0
    while i < len(word):
        if word[i] == "0":
            i += 1
            continue
        start = i
        while i < len(word) and word[i] == "a":
            i += 1
        a_run = i - start
        b_start = i
        while i < len(word) and word[i] == "b":
            i += 1
        segs.append((a_run, i - b_start))
        if i < len(word) and word[i] != "0":
            return False  # 'a' again inside one island
    if len(segs) <= 1:
        return True
    t = len(segs)
    cut_left = word[0] != "0"
    cut_right = word[-1] != "0"
    # domain per island: (lower bound, exactly known)
    a_dom, b_dom = [], []
    for i, (a, b) in enumerate(segs):
        first, last = i == 0, i == t - 1
        a_cut = (first and cut_left) or (last and cut_right and b == 0)
        a_dom.append((a, not a_cut))
        if first and cut_left and word[0] == "b":
            b_dom.append((b, False))  # left cut fell inside the b-run
        elif last and cut_right:
            b_dom.append((0 if word[-1] == "a" else b, False))
        else:
            b_dom.append((b, True))
    return _arith_chain_ok(a_dom, -1) and _arith_chain_ok(b_dom, +1)


def _arith_chain_ok(domains, step):
    """Can values v_i >= 0 with v_(i+1) = v_i + step fit the domains?

    A domain is (lower bound, exact); exact entries pin the whole chain.
    """
    for i, (lo, exact) in enumerate(domains):
        if exact:
            base = lo - step * i
            return all(
                base + step * j >= max(0, l) and (not ex or base + step * j == l)
                for j, (l, ex) in enumerate(domains))
    return True  # only lower bounds: pick the start large enough
