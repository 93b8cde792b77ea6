"""View orchestration shared by the CLI and the HTTP service.

Applies the layout operations in their presentation order: reference layout
(or plain frequency), join, relocate small blocks, filter by purity, sort
bars and axes, then the linguistic report. Both front ends call this module,
so identical inputs give identical results on either path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import Dataset, HetvizError
from . import viewlayout as vl


@dataclass(frozen=True)
class ViewBundle:
    layouts: tuple[vl.AxisLayout, ...]
    edges: tuple[vl.EdgeBundle, ...]
    report: tuple[str, ...]
    axis_order: tuple[str, ...]
    config: vl.ViewConfig


def _axis_names(ds: Dataset, config: vl.ViewConfig, ref: Optional[str]) -> tuple[str, ...]:
    names = [a.name for a in ds.attributes]
    if ref is not None and ref in names:
        names.remove(ref)
    if config.axis_order is not None:
        unknown = [a for a in config.axis_order if a not in names]
        if unknown:
            raise HetvizError(f"axis order names unknown attribute(s): {', '.join(unknown)}")
        rest = [a for a in names if a not in config.axis_order]
        return tuple(config.axis_order) + tuple(rest)
    return tuple(names)


def compute_view(ds: Dataset, config: vl.ViewConfig, with_edges: bool = True) -> ViewBundle:
    """Compute the full layout bundle for one view configuration."""
    ref = config.reference_attr
    if ref is None and ds.target_index is not None:
        ref = ds.target_attribute.name

    axes = _axis_names(ds, config, ref)

    layouts: list[vl.AxisLayout] = []
    for name in axes:
        if ref is not None:
            layout = vl.reference_layout(ds, name, ref)
        else:
            layout = vl.frequency_layout(ds, name)
        if config.join_nondominant and ref is not None:
            layout = vl.join_nondominant(layout)
        layout = vl.relocate_small_blocks(layout, config.small_block_threshold)
        if config.sort_mode == "color" and config.color_priority:
            layout = vl.sort_bars_by_color(layout, config.color_priority)
        if name in config.flips:
            layout = vl.AxisLayout(
                attribute=layout.attribute,
                bars=layout.bars,
                flipped=True,
                residual=layout.residual,
            )
        layouts.append(layout)

    report = tuple(
        vl.linguistic_report(
            layouts,
            threshold=config.purity_threshold,
            min_size=config.min_block_size,
            small_block_threshold=config.small_block_threshold,
        )
    )

    if config.sort_mode == "purity":
        order = vl.sort_axes(layouts, config.purity_threshold, config.min_block_size)
        by_name = {l.attribute: l for l in layouts}
        layouts = [by_name[name] for name in order]

    filtered = [
        vl.filter_by_purity(l, config.purity_threshold, config.min_block_size)
        for l in layouts
    ]

    axis_order = tuple(l.attribute for l in layouts)
    edges: tuple[vl.EdgeBundle, ...] = ()
    if with_edges:
        edges = tuple(
            vl.edge_weights(ds, a, b) for a, b in zip(axis_order, axis_order[1:])
        )
    return ViewBundle(
        layouts=tuple(filtered),
        edges=edges,
        report=report,
        axis_order=axis_order,
        config=config,
    )


# --- JSON forms --------------------------------------------------------------


def bar_to_json(bar: vl.Bar) -> dict:
    return {
        "group": bar.value_group,
        "total": bar.total,
        "per_class": dict(sorted(bar.per_class.items())),
        "dominant": bar.dominant_class,
        "purity": bar.purity,
        "height": bar.height_fraction,
        "joined": bar.joined,
    }


def layout_to_json(layout: vl.AxisLayout) -> dict:
    return {
        "attribute": layout.attribute,
        "flipped": layout.flipped,
        "bars": [bar_to_json(b) for b in layout.bars],
        "residual": [bar_to_json(b) for b in layout.residual],
    }


def edges_to_json(bundle: vl.EdgeBundle) -> dict:
    return {
        "left": bundle.left_attr,
        "right": bundle.right_attr,
        "counts": [
            {"left_group": l, "right_group": r, "class": c, "count": n}
            for (l, r, c), n in sorted(bundle.counts.items())
        ],
    }


def bundle_to_json(bundle: ViewBundle) -> dict:
    return {
        "axis_order": list(bundle.axis_order),
        "params": {
            "ref": bundle.config.reference_attr,
            "purity": bundle.config.purity_threshold,
            "min_size": bundle.config.min_block_size,
            "small_block": bundle.config.small_block_threshold,
            "join": bundle.config.join_nondominant,
            "sort": bundle.config.sort_mode,
            "flips": sorted(bundle.config.flips),
        },
        "layouts": [layout_to_json(l) for l in bundle.layouts],
        "edges": [edges_to_json(e) for e in bundle.edges],
        "report": list(bundle.report),
    }
