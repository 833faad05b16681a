"""Square-grid tile set: lines meeting at crosses, cells carrying a
corner-to-corner diagonal that forces every complete rectangle to be square.

The blank is refined by orientation into two background symbols, the open
triangle above the diagonal ('u') and the one below it ('l'); this makes
parallel lines without a grid between them locally visible and hence
forbidden, while keeping the window size at 2x2.

Scheme: in the size-n grid, lines sit on the residues x = 0 and y = 0
mod n+1; writing (i, j) for the in-cell coordinates,

    + at i = j = 0,   - at j = 0,   | at i = 0,
    / at i = j,       l below the diagonal (i > j),   u above it.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import InputError
from .base import ConfigurationWindow, collect_2x2, compile_window2_rules, \
    render_window

GRID_SYMBOLS = ("u", "l", "/", "-", "|", "+")

SCHEME_VERSION = "grid-1"


def grid_symbol(cell_size, x, y):
    """Symbol of the size-``cell_size`` grid configuration at (x, y)."""
    if cell_size < 1:
        raise InputError("cell size must be >= 1")
    p = cell_size + 1
    i, j = x % p, y % p
    if i == 0 and j == 0:
        return "+"
    if j == 0:
        return "-"
    if i == 0:
        return "|"
    if i == j:
        return "/"
    return "l" if i > j else "u"


@lru_cache(maxsize=1)
def grid_shift():
    """Tile set whose admissible grids have square cells only.

    The forbidden list is compiled from the 2x2 windows of the documented
    cell template over cell sizes 1..6, which covers every local situation
    (interiors need size >= 3, the rest stabilizes earlier).
    """
    allowed = set()
    for n in range(1, 7):
        allowed |= collect_2x2(lambda x, y, n=n: grid_symbol(n, x, y),
                               0, 0, n + 3, n + 3)
    return compile_window2_rules(
        GRID_SYMBOLS, allowed,
        meta=(("name", "grid"), ("scheme_version", SCHEME_VERSION)))


def grid_config(cell_size, x0, y0, w, h):
    """Window of the size-``cell_size`` grid configuration."""
    return render_window(
        "grid", (("cell_size", cell_size),), SCHEME_VERSION,
        lambda x, y: grid_symbol(cell_size, x, y), x0, y0, w, h)
