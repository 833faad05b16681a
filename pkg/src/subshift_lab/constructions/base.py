"""Shared plumbing for the construction generators."""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import InputError
from ..sft2d import Pattern2D, make_pattern, make_tileset, pattern_from_text, \
    pattern_to_text


@dataclass(frozen=True, slots=True)
class ConfigurationWindow:
    """A finite window of a generated configuration.

    Deterministic: the same generator, parameters and window bounds always
    produce the identical pattern, pinned by ``scheme_version``.
    """
    generator: str
    params: tuple  # ((key, value), ...)
    scheme_version: str
    window: Pattern2D


def render_window(generator, params, scheme_version, cell, x0, y0, w, h):
    """Build a ConfigurationWindow from a cell function (x, y) -> symbol."""
    if w < 1 or h < 1:
        raise InputError("window must be at least 1x1")
    rows = tuple(tuple(cell(x0 + c, y0 + r) for c in range(w)) for r in range(h))
    return ConfigurationWindow(generator, tuple(params), scheme_version,
                               Pattern2D((x0, y0), rows))


def window_to_text(cw):
    header = json.dumps({
        "generator": cw.generator,
        "params": {k: v for k, v in cw.params},
        "scheme_version": cw.scheme_version,
        "origin": list(cw.window.origin),
    }, sort_keys=True)
    return header + "\n" + pattern_to_text(cw.window) + "\n"


def window_from_text(text):
    lines = text.splitlines()
    if not lines:
        raise InputError("empty window file")
    try:
        head = json.loads(lines[0])
        pattern = pattern_from_text("\n".join(lines[1:]),
                                    origin=tuple(head.get("origin", (0, 0))))
        return ConfigurationWindow(
            head["generator"], tuple(sorted(head.get("params", {}).items())),
            head.get("scheme_version", "?"), pattern)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("bad window file: %s" % exc) from exc


def compile_window2_rules(alphabet, allowed_2x2, meta=()):
    """Forbidden list equivalent to 'every 2x2 window is in allowed_2x2'.

    Emits the complements of the observed horizontal and vertical dominoes
    plus the 2x2 blocks that pass both domino filters but were never
    observed.  Blocks are flattened row-major, bottom row first.
    """
    H = {(w[0], w[1]) for w in allowed_2x2} | {(w[2], w[3]) for w in allowed_2x2}
    V = {(w[0], w[2]) for w in allowed_2x2} | {(w[1], w[3]) for w in allowed_2x2}
    forbidden = []
    for a in alphabet:
        for b in alphabet:
            if (a, b) not in H:
                forbidden.append(make_pattern([(a, b)]))
            if (a, b) not in V:
                forbidden.append(make_pattern([(a,), (b,)]))
    by_left_col = {}
    for (bl, tl) in V:
        by_left_col.setdefault(bl, []).append(tl)
    for (bl, br) in H:
        for tl in by_left_col.get(bl, ()):
            for tr in alphabet:
                cand = (bl, br, tl, tr)
                if (tl, tr) in H and (br, tr) in V and cand not in allowed_2x2:
                    forbidden.append(make_pattern([(bl, br), (tl, tr)]))
    return make_tileset(alphabet, forbidden, meta)


def collect_2x2(cell, x0, y0, w, h):
    """All 2x2 windows (bl, br, tl, tr) of a cell function over a region."""
    out = set()
    for y in range(y0, y0 + h - 1):
        for x in range(x0, x0 + w - 1):
            out.add((cell(x, y), cell(x + 1, y), cell(x, y + 1), cell(x + 1, y + 1)))
    return out
