import pytest

from subshift_lab.sft2d import (
    Budget, HOLE, Pattern2D, complete_patterns, locally_admissible,
    make_pattern,
)
from subshift_lab.constructions.grid import grid_config, grid_shift, grid_symbol


def pinned_rect(win, w, h, off=(3, 3)):
    """win x win pattern with a full-bordered w x h rectangle pinned, rest free."""
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


def completable(ts, p):
    for _ in complete_patterns(ts, p, budget=Budget(max_nodes=500_000, timeout_s=30)):
        return True
    return False


def test_template_windows_admissible():
    ts = grid_shift()
    for n in (1, 2, 3):
        cw = grid_config(n, -1, -1, 3 * (n + 1), 3 * (n + 1))
        assert locally_admissible(ts, cw.window)


def test_one_by_one_always_admissible():
    ts = grid_shift()
    for sym in ts.alphabet:
        assert locally_admissible(ts, make_pattern([(sym,)]))


def test_deleted_diagonal_rejected():
    ts = grid_shift()
    cw = grid_config(2, -1, -1, 8, 8)
    rows = [list(r) for r in cw.window.cells]
    # overwrite one diagonal cell with below-diagonal background
    for y, row in enumerate(rows):
        for x, c in enumerate(row):
            if c == "/":
                rows[y][x] = "l"
                broken = Pattern2D((0, 0), tuple(tuple(r) for r in rows))
                assert not locally_admissible(ts, broken)
                return
    pytest.fail("no diagonal found")


def test_squares_forced_small():
    ts = grid_shift()
    for w in (1, 2, 3):
        for h in (1, 2, 3):
            p = pinned_rect(9, w, h, off=(2, 2))
            assert completable(ts, p) == (w == h), (w, h)


def test_symbol_function_periodic():
    for n in (1, 2, 4):
        p = n + 1
        for x in range(-2, 8):
            for y in range(-2, 8):
                assert grid_symbol(n, x, y) == grid_symbol(n, x + p, y)
                assert grid_symbol(n, x, y) == grid_symbol(n, x, y + p)
