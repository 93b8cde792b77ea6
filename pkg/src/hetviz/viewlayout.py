"""Frequency and reference-frequency layouts for parallel-coordinates axes.

A layout is an ordered list of bars per attribute (bottom to top), each bar
holding total and per-class counts, the dominant class, and purity. All
operations are pure, deterministic, and conserve case counts; removed mass
is reported in a residual rather than silently dropped.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .core import (
    Dataset,
    HetvizError,
    MISSING,
    Scale,
    Value,
    value_symbol,
)

MISSING_GROUP = "?"
JOINED_CLASS = "(joined)"


class LayoutError(HetvizError):
    pass


@dataclass(frozen=True)
class Bar:
    value_group: str
    total: int
    per_class: dict[str, int]
    dominant_class: Optional[str]
    purity: float
    height_fraction: float
    joined: bool = False


@dataclass(frozen=True)
class AxisLayout:
    attribute: str
    bars: tuple[Bar, ...]  # bottom to top
    flipped: bool = False
    residual: tuple[Bar, ...] = ()


@dataclass(frozen=True)
class ViewConfig:
    reference_attr: Optional[str] = None
    purity_threshold: float = 0.80
    min_block_size: float = 0.10
    small_block_threshold: float = 0.20
    join_nondominant: bool = False
    sort_mode: str = "frequency_desc"  # frequency_desc | purity | color
    color_priority: tuple[str, ...] = ()
    axis_order: Optional[tuple[str, ...]] = None
    flips: frozenset[str] = frozenset()
    line_width_mode: str = "uniform"  # uniform | frequency_weighted
    color_map: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, x in (
            ("purity_threshold", self.purity_threshold),
            ("min_block_size", self.min_block_size),
            ("small_block_threshold", self.small_block_threshold),
        ):
            if not 0.0 <= x <= 1.0:
                raise LayoutError(f"{name} must lie in [0, 1], got {x}")


@dataclass(frozen=True)
class EdgeBundle:
    """Row counts between bars of two adjacent axes, split by class."""

    left_attr: str
    right_attr: str
    counts: dict[tuple[str, str, str], int]  # (left group, right group, class) -> count


def _groups(ds: Dataset, attr: str) -> tuple[str, ...]:
    """Per-row group symbol; missing collapses to the dedicated '?' group."""
    return tuple(value_symbol(v) for v in ds.column(attr))


def _is_discrete(ds: Dataset, attr: str) -> bool:
    a = ds.attribute(attr)
    if not a.mtype.is_numeric:
        return True
    # Numeric attributes count as discrete once coded to integers (grouping).
    return all(
        v is MISSING or (isinstance(v, float) and float(v).is_integer())
        for v in ds.column(attr)
    )


def _ordered_groups(ds: Dataset, attr: str) -> tuple[list[str], dict[str, int]]:
    symbols = _groups(ds, attr)
    counts = Counter(symbols)
    seen: dict[str, None] = {}
    for s in symbols:
        if s != MISSING_GROUP:
            seen.setdefault(s, None)
    order = sorted(seen, key=lambda s: (-counts[s], list(seen).index(s)))
    return order, counts


def frequency_layout(ds: Dataset, attr: str) -> AxisLayout:
    """One bar per distinct value, largest frequency at the bottom.

    Equal-frequency values keep their own bars (lossless); ties break by
    first-appearance order. Missing values form a dedicated top bar.
    """
    symbols = _groups(ds, attr)
    n = len(symbols)
    order, counts = _ordered_groups(ds, attr)
    bars = [
        Bar(
            value_group=g,
            total=counts[g],
            per_class={},
            dominant_class=None,
            purity=1.0,
            height_fraction=counts[g] / n if n else 0.0,
        )
        for g in order
    ]
    if counts.get(MISSING_GROUP):
        bars.append(
            Bar(
                value_group=MISSING_GROUP,
                total=counts[MISSING_GROUP],
                per_class={},
                dominant_class=None,
                purity=1.0,
                height_fraction=counts[MISSING_GROUP] / n,
            )
        )
    return AxisLayout(attribute=attr, bars=tuple(bars))


def reference_layout(ds: Dataset, attr: str, ref_attr: str) -> AxisLayout:
    """Frequency bars with per-class breakdown against a reference attribute."""
    if not _is_discrete(ds, ref_attr):
        raise LayoutError(
            f"reference attribute {ref_attr!r} is continuous; group it into "
            "intervals before using it as a reference"
        )
    symbols = _groups(ds, attr)
    classes = _groups(ds, ref_attr)
    n = len(symbols)
    order, counts = _ordered_groups(ds, attr)
    if counts.get(MISSING_GROUP):
        order = order + [MISSING_GROUP]

    class_order: dict[str, None] = {}
    for c in classes:
        class_order.setdefault(c, None)

    per_group: dict[str, Counter] = {g: Counter() for g in order}
    for g, c in zip(symbols, classes):
        per_group[g][c] += 1

    bars = []
    for g in order:
        pc = per_group[g]
        total = sum(pc.values())
        dominant = max(pc, key=lambda c: (pc[c], -list(class_order).index(c)))
        bars.append(
            Bar(
                value_group=g,
                total=total,
                per_class=dict(pc),
                dominant_class=dominant,
                purity=pc[dominant] / total,
                height_fraction=total / n if n else 0.0,
            )
        )
    return AxisLayout(attribute=attr, bars=tuple(bars))


def join_nondominant(layout: AxisLayout) -> AxisLayout:
    """Merge each bar's non-dominant class counts into a grey aggregate."""
    bars = []
    for b in layout.bars:
        if b.dominant_class is None:
            bars.append(b)
            continue
        dom = b.per_class.get(b.dominant_class, 0)
        rest = b.total - dom
        per_class = {b.dominant_class: dom}
        if rest:
            per_class[JOINED_CLASS] = rest
        bars.append(replace(b, per_class=per_class, joined=True))
    return replace(layout, bars=tuple(bars))


def filter_by_purity(layout: AxisLayout, threshold: float, min_size: float) -> AxisLayout:
    """Keep bars with purity >= threshold and height >= min_size.

    Removed bars are preserved in the layout's residual, so retained plus
    residual mass equals the original total.
    """
    if not 0 <= threshold <= 1 or not 0 <= min_size <= 1:
        raise LayoutError("threshold and min_size must lie in [0, 1]")
    kept = tuple(
        b for b in layout.bars if b.purity >= threshold and b.height_fraction >= min_size
    )
    removed = tuple(b for b in layout.bars if b not in kept)
    return replace(layout, bars=kept, residual=layout.residual + removed)


def relocate_small_blocks(layout: AxisLayout, threshold: float) -> AxisLayout:
    """Move bars smaller than the threshold above all larger bars.

    Relative order is preserved within both partitions; the bar multiset is
    unchanged.
    """
    if not 0 <= threshold <= 1:
        raise LayoutError("threshold must lie in [0, 1]")
    large = [b for b in layout.bars if b.height_fraction >= threshold]
    small = [b for b in layout.bars if b.height_fraction < threshold]
    return replace(layout, bars=tuple(large + small))


def flip_attribute(ds: Dataset, attr: str) -> tuple[Value, ...]:
    """Mirror a normalized column: x becomes 1 - x."""
    col = ds.column(attr)
    out: list[Value] = []
    for v in col:
        if v is MISSING:
            out.append(MISSING)
            continue
        if not isinstance(v, float) or not (0.0 <= v <= 1.0):
            raise LayoutError(
                f"attribute {attr!r} is not normalized to [0, 1]; normalize before flipping"
            )
        out.append(1.0 - v)
    return tuple(out)


def qualifying_block_count(layout: AxisLayout, threshold: float, min_size: float) -> int:
    return sum(
        1 for b in layout.bars if b.purity >= threshold and b.height_fraction >= min_size
    )


def sort_axes(
    layouts: Sequence[AxisLayout], threshold: float, min_size: float
) -> tuple[str, ...]:
    """Order axes by qualifying-block count, most pure blocks leftmost.

    Ties break by mean bar purity, then by original axis position (stable).
    """
    def mean_purity(layout: AxisLayout) -> float:
        if not layout.bars:
            return 0.0
        return sum(b.purity for b in layout.bars) / len(layout.bars)

    indexed = list(enumerate(layouts))
    indexed.sort(
        key=lambda item: (
            -qualifying_block_count(item[1], threshold, min_size),
            -mean_purity(item[1]),
            item[0],
        )
    )
    return tuple(layout.attribute for _, layout in indexed)


def sort_bars_by_color(layout: AxisLayout, priority: Sequence[str]) -> AxisLayout:
    """Group bars by dominant class, first priority class topmost.

    Bars of classes outside the priority list stay at the bottom in their
    original order; ordering is stable within every group.
    """
    known = {b.dominant_class for b in layout.bars}
    for cls in priority:
        if cls not in known:
            raise LayoutError(f"unknown class {cls!r} in color priority")
    if not priority:
        return layout
    rest = [b for b in layout.bars if b.dominant_class not in priority]
    groups = [
        [b for b in layout.bars if b.dominant_class == cls] for cls in reversed(priority)
    ]
    bars = rest + [b for group in groups for b in group]
    return replace(layout, bars=tuple(bars))


def edge_weights(ds: Dataset, attr_left: str, attr_right: str) -> EdgeBundle:
    """Count rows per (left bar, right bar, class) between adjacent axes."""
    left = _groups(ds, attr_left)
    right = _groups(ds, attr_right)
    if ds.target_index is not None:
        classes = _groups(ds, ds.target_attribute.name)
    else:
        classes = tuple("" for _ in ds.rows)
    counts: Counter = Counter(zip(left, right, classes))
    return EdgeBundle(
        left_attr=attr_left,
        right_attr=attr_right,
        counts=dict(counts),
    )


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def linguistic_report(
    layouts: Sequence[AxisLayout],
    threshold: float = 0.80,
    min_size: float = 0.10,
    small_block_threshold: float = 0.20,
    frequency_line_threshold: float = 0.50,
) -> list[str]:
    """Auto-generated sentences describing notable blocks.

    Qualifying bars (purity and size above the thresholds) yield a purity
    line, or a total-frequency line when the block is large enough that its
    size is the more telling number. Attributes with any bar under the small
    threshold get a small-frequency sentence. Block indices are 1-based,
    bottom to top.
    """
    statements: list[str] = []
    for layout in layouts:
        for idx, bar in enumerate(layout.bars, start=1):
            if bar.purity >= threshold and bar.height_fraction >= min_size:
                if bar.height_fraction >= frequency_line_threshold:
                    statements.append(
                        f"{layout.attribute}, block, {idx} has a total frequency of "
                        f"{_round_half_up(100 * bar.height_fraction)}"
                    )
                else:
                    statements.append(
                        f"{layout.attribute}, block, {idx} has a purity of "
                        f"{_round_half_up(100 * bar.purity)}"
                    )
        if any(b.height_fraction < small_block_threshold for b in layout.bars):
            statements.append(f"{layout.attribute} has a small frequency block.")
    return statements
