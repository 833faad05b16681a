import pytest

from subshift_lab.sft2d import (
    Budget, Pattern2D, approx_derivative_member, locally_admissible,
    make_pattern,
)
from subshift_lab.constructions.diamond import (
    CONTINUATION_PROBE, ISOLATION_PROBE, core_pattern, diamond_config,
    diamond_shift, diamond_symbol, _pairs,
)


def wide_window(n, m, pad=5):
    pairs = _pairs(n, m)
    x_lo = pairs[0][0] - max(pairs[0][1], pairs[0][2]) - pad
    x_hi = pairs[-1][0] + max(pairs[-1][1], pairs[-1][2]) + pad
    y_lo = -(n + m) - pad
    y_hi = m + 1 + pad
    return diamond_config(n, m, x_lo, y_lo, x_hi - x_lo + 1, y_hi - y_lo + 1)


def test_configs_admissible():
    ts = diamond_shift()
    for n in (1, 2, 3):
        for m in (1, 2):
            assert locally_admissible(ts, wide_window(n, m).window), (n, m)


def test_one_pair_counts():
    # type (1,1): exactly one red and one blue structure
    cw = wide_window(1, 1)
    flat = [c for row in cw.window.cells for c in row]
    assert flat.count("^") == 1 and flat.count("v") == 1
    # (2,1): single pair, blue size 2 around a size-1 red
    cw = wide_window(2, 1)
    flat = [c for row in cw.window.cells for c in row]
    assert flat.count("^") == 1 and flat.count("v") == 1
    assert flat.count("(") == 1 and flat.count("[") == 1
    # (1,2): two pairs, red sizes 2 then 1
    cw = wide_window(1, 2)
    flat = [c for row in cw.window.cells for c in row]
    assert flat.count("^") == 2 and flat.count("v") == 2


def test_background_window_admissible():
    ts = diamond_shift()
    sea = make_pattern([("S",) * 5] * 5)
    assert locally_admissible(ts, sea)


def test_corner_off_line_rejected():
    ts = diamond_shift()
    # a red corner surrounded by upper background cannot sit off the line
    bad = make_pattern([("U", "U", "U"), ("U", "[", "U"), ("U", "U", "U")])
    assert not locally_admissible(ts, bad)


def test_apex_must_absorb():
    ts = diamond_shift()
    cw = wide_window(1, 1)
    rows = [list(r) for r in cw.window.cells]
    for y, row in enumerate(rows):
        for x, c in enumerate(row):
            if c == "^":
                rows[y + 1][x] = "S"  # remove the absorbed signal end
                broken = Pattern2D((0, 0), tuple(tuple(r) for r in rows))
                assert not locally_admissible(ts, broken)
                return
    pytest.fail("no apex found")


def test_isolation_probe_false():
    ts = diamond_shift()
    core = core_pattern(1, 1, radius=3)
    assert locally_admissible(ts, core)
    got = approx_derivative_member(
        ts, core, ISOLATION_PROBE["agree"], ISOLATION_PROBE["margin"],
        budget=Budget(max_nodes=3_000_000, timeout_s=120))
    assert got is False


def test_continuation_probe_true():
    ts = diamond_shift()
    core = core_pattern(2, 2, radius=3)
    assert locally_admissible(ts, core)
    got = approx_derivative_member(
        ts, core, CONTINUATION_PROBE["agree"], CONTINUATION_PROBE["margin"],
        budget=Budget(max_nodes=3_000_000, timeout_s=120))
    assert got is True


def test_island_factor_validator():
    from subshift_lab.constructions.diamond import island_factor_ok
    # complete k=2 point fragment: aa 0 ab 0 bb
    assert island_factor_ok("0aa0ab0bb0")
    assert island_factor_ok("aaa")          # single cut run
    assert island_factor_ok("ab0bb")        # cut at both ends
    assert island_factor_ok("b0a")          # deep cut, consistent
    assert island_factor_ok("aa0ab")
    assert not island_factor_ok("ba")       # b before a inside an island
    assert not island_factor_ok("aa0a0aa")  # a-runs must keep dropping
    assert not island_factor_ok("b0aa0ab")  # zero b-run after a b island
    assert not island_factor_ok("a0bb0ab")  # b-run must grow by one
    with pytest.raises(Exception):
        island_factor_ok("xy")


def test_decrement_geometry():
    # outgoing signal height equals the apex size; incoming one above it
    for (n, m) in [(1, 3), (2, 2)]:
        pairs = _pairs(n, m)
        for (c, r, b) in pairs:
            assert diamond_symbol(n, m, c, r) == "^"
            assert diamond_symbol(n, m, c, r + 1) == "="
            assert diamond_symbol(n, m, c + 1, r) == "="
            assert diamond_symbol(n, m, c, -b) == "v"
            assert diamond_symbol(n, m, c, -b - 1) == "~"
            assert diamond_symbol(n, m, c - 1, -b) == "~"
