"""Matplotlib renderings of patterns and verification matrices."""

from __future__ import annotations

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .errors import InputError


def pattern_figure(pattern, alphabet, title=None):
    """Discrete-color image of a pattern; holes are masked out."""
    index = {a: i for i, a in enumerate(alphabet)}
    arr = np.zeros((pattern.height, pattern.width))
    mask = np.zeros_like(arr, dtype=bool)
    for y, row in enumerate(pattern.cells):
        for x, c in enumerate(row):
            if c is None:
                mask[y, x] = True
            else:
                try:
                    arr[y, x] = index[c]
                except KeyError:
                    raise InputError("symbol %r not in alphabet" % (c,)) from None
    data = np.ma.masked_array(arr, mask)
    fig, ax = plt.subplots(figsize=(max(3, pattern.width / 8),
                                    max(3, pattern.height / 8)))
    cmap = plt.get_cmap("tab20", max(2, len(alphabet)))
    ax.imshow(data, origin="lower", cmap=cmap, interpolation="nearest",
              vmin=0, vmax=max(1, len(alphabet) - 1))
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    return fig


def save_pattern_png(pattern, alphabet, path, title=None):
    fig = pattern_figure(pattern, alphabet, title=title)
    fig.savefig(path, dpi=140)
    plt.close(fig)


def save_matrix_png(matrix, elements, path, title=None):
    """Boolean pair matrix (e.g. embedding evidence) as a heatmap."""
    n = len(elements)
    arr = np.zeros((n, n))
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            arr[i, j] = 1.0 if matrix[(x, y)] else 0.0
    fig, ax = plt.subplots(figsize=(max(3, n), max(3, n)))
    ax.imshow(arr, cmap="Greys", vmin=0, vmax=1)
    ax.set_xticks(range(n), elements, rotation=45, ha="right")
    ax.set_yticks(range(n), elements)
    ax.set_xlabel("contained configuration")
    ax.set_ylabel("containing configuration")
    if title:
        ax.set_title(title, fontsize=9)
    for i in range(n):
        for j in range(n):
            ax.text(j, i, "1" if arr[i, j] else "0", ha="center", va="center",
                    color="red")
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
