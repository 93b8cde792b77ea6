"""Deterministic SVG rendering of parallel coordinates with frequency bars.

Output is plain SVG 1.1 text with coordinates formatted to two decimal
places, so equal inputs produce byte-identical documents on any platform.
Two drawing modes: one polyline per row (lossless), or aggregated edges
whose stroke width grows with the case count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .core import Dataset, HetvizError, value_symbol
from .viewlayout import AxisLayout, Bar, EdgeBundle, JOINED_CLASS, ViewConfig

#: Class palette named after the paletteable classes in the frequency views:
#: magenta, blue, yellow for the first three classes, grey for joined mass.
DEFAULT_PALETTE = (
    "#d633ff",
    "#3366ff",
    "#e6c800",
    "#2e8b57",
    "#ff7f0e",
    "#17becf",
    "#8c564b",
)
GREY = "#9e9e9e"
FRAME_COLOR = "#1db31d"


class RenderError(HetvizError):
    pass


@dataclass(frozen=True)
class RenderSpec:
    width: int = 900
    height: int = 600
    margin: int = 40
    bar_width: int = 16
    mode: str = "lossless_polylines"  # lossless_polylines | aggregated_edges
    show_purity_frames: bool = True
    frame_threshold: float = 0.80

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise RenderError("canvas dimensions must be positive")
        if self.mode not in ("lossless_polylines", "aggregated_edges"):
            raise RenderError(f"unknown render mode {self.mode!r}")


def _fmt(x: float) -> str:
    # Fixed 2-decimal coordinates keep golden files stable across platforms.
    return f"{x:.2f}"


def class_color(cls: Optional[str], color_map: dict[str, str], class_order: Sequence[str]) -> str:
    if cls is None:
        return GREY
    if cls == JOINED_CLASS:
        return GREY
    if cls in color_map:
        return color_map[cls]
    try:
        return DEFAULT_PALETTE[list(class_order).index(cls) % len(DEFAULT_PALETTE)]
    except ValueError:
        return GREY


@dataclass
class _AxisGeometry:
    x: float
    top: float
    height: float
    layout: AxisLayout
    # group -> (y_bottom, y_top) in SVG coordinates (y grows downward)
    spans: dict[str, tuple[float, float]] = field(default_factory=dict)

    def build(self) -> None:
        y = self.top + self.height  # bottom of the axis
        bars = self.layout.bars
        if self.layout.flipped:
            bars = tuple(reversed(bars))
        for bar in bars:
            h = bar.height_fraction * self.height
            self.spans[bar.value_group] = (y, y - h)
            y -= h


def _axis_geometries(
    layouts: Sequence[AxisLayout], order: Sequence[str], spec: RenderSpec
) -> list[_AxisGeometry]:
    by_name = {l.attribute: l for l in layouts}
    missing = [a for a in order if a not in by_name]
    if missing:
        raise RenderError(f"no layout for axis/axes: {', '.join(missing)}")
    n = len(order)
    inner = spec.width - 2 * spec.margin
    spacing = inner / max(n - 1, 1)
    geoms = []
    for i, name in enumerate(order):
        g = _AxisGeometry(
            x=spec.margin + i * spacing,
            top=spec.margin,
            height=spec.height - 2 * spec.margin,
            layout=by_name[name],
        )
        g.build()
        geoms.append(g)
    return geoms


def _bar_elements(
    geom: _AxisGeometry,
    spec: RenderSpec,
    color_map: dict[str, str],
    class_order: Sequence[str],
) -> list[str]:
    out = []
    half = spec.bar_width / 2
    bars = geom.layout.bars
    if geom.layout.flipped:
        bars = tuple(reversed(bars))
    for bar in bars:
        y_bottom, y_top = geom.spans[bar.value_group]
        h = y_bottom - y_top
        if h <= 0:
            continue
        x = geom.x - half
        if bar.per_class:
            # Stacked class segments, dominant first (bottom of the bar).
            items = sorted(
                bar.per_class.items(),
                key=lambda kv: (kv[0] != bar.dominant_class, kv[0] == JOINED_CLASS),
            )
            y = y_bottom
            for cls, count in items:
                seg = h * count / bar.total
                out.append(
                    f'<rect x="{_fmt(x)}" y="{_fmt(y - seg)}" '
                    f'width="{_fmt(spec.bar_width)}" height="{_fmt(seg)}" '
                    f'fill="{class_color(cls, color_map, class_order)}"/>'
                )
                y -= seg
        else:
            out.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y_top)}" '
                f'width="{_fmt(spec.bar_width)}" height="{_fmt(h)}" '
                f'fill="#c8c8c8"/>'
            )
        # Black separator under each bar.
        out.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(y_bottom)}" '
            f'x2="{_fmt(x + spec.bar_width)}" y2="{_fmt(y_bottom)}" '
            f'stroke="#000000" stroke-width="1.00"/>'
        )
        if spec.show_purity_frames and bar.purity >= spec.frame_threshold and bar.per_class:
            out.append(
                f'<rect x="{_fmt(x - 1.5)}" y="{_fmt(y_top - 1.5)}" '
                f'width="{_fmt(spec.bar_width + 3)}" height="{_fmt(h + 3)}" '
                f'fill="none" stroke="{FRAME_COLOR}" stroke-width="2.00"/>'
            )
    return out


def _row_positions(
    ds: Dataset, geoms: Sequence[_AxisGeometry]
) -> dict[str, dict[int, float]]:
    """Per axis, the y coordinate of every row: rows sharing a bar are stacked
    in stable row order and spread evenly across the bar's height, so equal
    rows coincide and distinct rows stay distinguishable."""
    out: dict[str, dict[int, float]] = {}
    for geom in geoms:
        name = geom.layout.attribute
        col = ds.column(name)
        groups = [value_symbol(v) for v in col]
        members: dict[str, list[int]] = {}
        for r, g in enumerate(groups):
            members.setdefault(g, []).append(r)
        ys: dict[int, float] = {}
        for g, rows_in_bar in members.items():
            span = geom.spans.get(g)
            if span is None:
                continue
            y_bottom, y_top = span
            k = len(rows_in_bar)
            for pos, r in enumerate(rows_in_bar):
                frac = (pos + 0.5) / k
                ys[r] = y_bottom - frac * (y_bottom - y_top)
        out[name] = ys
    return out


def _polyline_elements(
    ds: Dataset,
    geoms: Sequence[_AxisGeometry],
    color_map: dict[str, str],
    class_order: Sequence[str],
) -> list[str]:
    positions = _row_positions(ds, geoms)
    targets = (
        [value_symbol(v) for v in ds.target_column()]
        if ds.target_index is not None
        else [None] * len(ds.rows)
    )
    out = []
    for r in range(len(ds.rows)):
        points = []
        for geom in geoms:
            y = positions[geom.layout.attribute].get(r)
            if y is None:
                continue
            points.append(f"{_fmt(geom.x)},{_fmt(y)}")
        if not points:
            continue
        color = class_color(targets[r], color_map, class_order)
        out.append(
            f'<polyline points="{" ".join(points)}" fill="none" '
            f'stroke="{color}" stroke-width="1.00" stroke-opacity="0.60"/>'
        )
    return out


def _edge_elements(
    edges: Sequence[EdgeBundle],
    geoms: Sequence[_AxisGeometry],
    color_map: dict[str, str],
    class_order: Sequence[str],
) -> list[str]:
    by_name = {g.layout.attribute: g for g in geoms}
    max_count = max(
        (c for bundle in edges for c in bundle.counts.values()), default=1
    )
    out = []
    for bundle in edges:
        left = by_name.get(bundle.left_attr)
        right = by_name.get(bundle.right_attr)
        if left is None or right is None:
            raise RenderError(
                f"edge bundle {bundle.left_attr!r}->{bundle.right_attr!r} "
                "references an axis without a layout"
            )
        for (lg, rg, cls), count in sorted(bundle.counts.items()):
            ls = left.spans.get(lg)
            rs = right.spans.get(rg)
            if ls is None or rs is None:
                continue
            y1 = (ls[0] + ls[1]) / 2
            y2 = (rs[0] + rs[1]) / 2
            width = 1.0 + 5.0 * count / max_count  # monotone in count
            out.append(
                f'<line x1="{_fmt(left.x)}" y1="{_fmt(y1)}" '
                f'x2="{_fmt(right.x)}" y2="{_fmt(y2)}" '
                f'stroke="{class_color(cls or None, color_map, class_order)}" '
                f'stroke-width="{_fmt(width)}" stroke-opacity="0.70"/>'
            )
    return out


def render_svg(
    ds: Dataset,
    view: ViewConfig,
    layouts: Sequence[AxisLayout],
    edges: Sequence[EdgeBundle] = (),
    spec: RenderSpec = RenderSpec(),
) -> str:
    """Render axes, stacked frequency bars, and case lines to an SVG document."""
    order = view.axis_order or tuple(l.attribute for l in layouts)
    geoms = _axis_geometries(layouts, order, spec)
    class_order = ds.class_labels() if ds.target_index is not None else ()

    body: list[str] = []
    body.append(
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="#ffffff"/>'
    )
    if spec.mode == "lossless_polylines":
        body.extend(_polyline_elements(ds, geoms, view.color_map, class_order))
    else:
        body.extend(_edge_elements(edges, geoms, view.color_map, class_order))
    for geom in geoms:
        body.append(
            f'<line x1="{_fmt(geom.x)}" y1="{_fmt(geom.top)}" '
            f'x2="{_fmt(geom.x)}" y2="{_fmt(geom.top + geom.height)}" '
            f'stroke="#444444" stroke-width="1.00"/>'
        )
        body.extend(_bar_elements(geom, spec, view.color_map, class_order))
        body.append(
            f'<text x="{_fmt(geom.x)}" y="{_fmt(spec.height - spec.margin / 4)}" '
            f'font-size="11" text-anchor="middle" font-family="sans-serif">'
            f"{escape(geom.layout.attribute)}</text>"
        )

    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )


def render_report_panel(
    statements: Sequence[str], width: int = 420, line_height: int = 18, wrap: int = 64
) -> str:
    """Render report sentences as a text column SVG fragment (a <g> element).

    Long statements wrap onto continuation lines; nothing is truncated.
    """
    lines: list[tuple[str, bool]] = []
    for s in statements:
        rest = s
        first = True
        while True:
            lines.append((rest[:wrap], first))
            rest = rest[wrap:]
            first = False
            if not rest:
                break
    body = []
    for i, (line, is_first) in enumerate(lines):
        indent = 8 if is_first else 24
        body.append(
            f'<text x="{indent}" y="{(i + 1) * line_height}" font-size="13" '
            f'font-family="sans-serif">{escape(line)}</text>'
        )
    inner = "\n".join(body)
    if inner:
        inner = "\n" + inner + "\n"
    return f'<g class="report" data-width="{width}">{inner}</g>'
