"""Matplotlib summary figures for the report path.

The CLI report command can save a stacked-bar overview of the computed
layouts next to its delimited output. This is a convenience chart for quick
inspection; the deterministic SVG renderer remains the reference output.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .render import DEFAULT_PALETTE, GREY
from .viewlayout import AxisLayout, JOINED_CLASS


def save_layout_figure(
    layouts: Sequence[AxisLayout],
    path: Path,
    class_order: Sequence[str] = (),
    title: str = "",
    dpi: int = 120,
) -> Path:
    """Draw each axis as a stacked frequency bar column and save the figure."""
    colors = {cls: DEFAULT_PALETTE[i % len(DEFAULT_PALETTE)] for i, cls in enumerate(class_order)}
    colors[JOINED_CLASS] = GREY

    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(layouts)), 5))
    for i, layout in enumerate(layouts):
        bottom = 0.0
        for bar in layout.bars:
            if bar.per_class:
                items = sorted(
                    bar.per_class.items(),
                    key=lambda kv: (kv[0] != bar.dominant_class, kv[0] == JOINED_CLASS),
                )
                for cls, count in items:
                    seg = bar.height_fraction * count / bar.total
                    ax.bar(i, seg, width=0.5, bottom=bottom, color=colors.get(cls, GREY))
                    bottom += seg
            else:
                ax.bar(i, bar.height_fraction, width=0.5, bottom=bottom, color="#c8c8c8")
                bottom += bar.height_fraction
            ax.plot([i - 0.3, i + 0.3], [bottom, bottom], color="black", linewidth=0.8)

    ax.set_xticks(range(len(layouts)))
    ax.set_xticklabels([l.attribute for l in layouts], rotation=90, fontsize=7)
    ax.set_ylim(0, 1.02)
    ax.set_ylabel("case fraction")
    if title:
        ax.set_title(title)
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in colors.values()]
    if class_order:
        ax.legend(handles, list(colors), fontsize=7, loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path
