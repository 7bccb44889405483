"""Matplotlib renderings written straight to files.

Two figure kinds: layered Hasse diagrams of strict orders on the doubled
carrier, and a summary chart for a batch of verification reports.  The
Agg backend is forced so everything works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .nilpotent import StrictOrder, point_sort_key
from .serialize import mpoint_label

_MARKERS = {"in": "v", "a": "o", "out": "^"}
_COLORS = {"in": "tab:blue", "a": "tab:green", "out": "tab:red"}
_STATUS_COLORS = {"pass": "tab:green", "bounded-pass": "tab:orange", "fail": "tab:red"}


def _layers(order: StrictOrder):
    remaining = set(order.carrier)
    layers = []
    while remaining:
        blocked = {v for u, v in order.pairs if u in remaining and v in remaining}
        layer = remaining - blocked
        layers.append(sorted(layer, key=point_sort_key))
        remaining -= layer
    return layers


def render_order(order: StrictOrder, path, title=None):
    """Draw the Hasse diagram, minimal elements at the bottom.

    Input copies are blue down-triangles, A-points green circles, output
    copies red up-triangles; output copies carry primed labels.
    """
    layers = _layers(order)
    pos = {}
    for y, layer in enumerate(layers):
        for i, p in enumerate(layer):
            pos[p] = (i - (len(layer) - 1) / 2.0, y)
    fig, ax = plt.subplots(figsize=(4.0, 3.0))
    for u, v in order.hasse_pairs():
        (xu, yu), (xv, yv) = pos[u], pos[v]
        ax.plot([xu, xv], [yu, yv], color="0.6", linewidth=1.2, zorder=1)
    for tag in ("in", "a", "out"):
        pts = [p for p in order.carrier if p.tag == tag]
        if not pts:
            continue
        xs = [pos[p][0] for p in pts]
        ys = [pos[p][1] for p in pts]
        ax.scatter(xs, ys, marker=_MARKERS[tag], c=_COLORS[tag], s=180, zorder=2)
    for p, (x, y) in pos.items():
        ax.annotate(
            mpoint_label(p),
            (x, y),
            textcoords="offset points",
            xytext=(10, 4),
            fontsize=10,
        )
    ax.set_xlim(min(x for x, _ in pos.values()) - 1, max(x for x, _ in pos.values()) + 1)
    ax.set_ylim(-0.5, len(layers) - 0.5)
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_summary(reports, path, title=None):
    """Horizontal bar chart of wall times, one bar per check, colored by
    status; intended to land next to the CSV of the same run."""
    reports = list(reports)
    labels = [r.theorem_id for r in reports]
    widths = [max(r.wall_ms, 0.01) for r in reports]
    colors = [_STATUS_COLORS.get(r.status, "0.5") for r in reports]
    fig, ax = plt.subplots(figsize=(7.0, 0.45 * max(len(reports), 2) + 1.2))
    ypos = range(len(reports))
    ax.barh(ypos, widths, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels, fontsize=9)
    ax.invert_yaxis()
    ax.set_xlabel("wall time (ms)")
    ax.set_xscale("log")
    for y, r in zip(ypos, reports):
        ax.text(
            max(r.wall_ms, 0.01),
            y,
            f" {r.status}",
            va="center",
            fontsize=8,
        )
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
