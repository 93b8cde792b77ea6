"""Numeric coding methods for non-numeric attributes.

Each encoder returns an ``EncodingResult`` carrying the generated columns,
the value-to-code map, any lossy collisions (distinct values that received
the same code), and an interpretability note describing when the coding is
safe to use. Statistics-based encoders (frequency, mean-target, probability
ratio, James-Stein) need a target attribute on the dataset.
"""

from __future__ import annotations

import hashlib
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    Attribute,
    Dataset,
    HetvizError,
    Level,
    MISSING,
    MeasurementType,
    Scale,
    TypePermissionError,
    Value,
    value_symbol,
)

#: Stable encoder identifiers used in scheme documents.
ENCODER_KINDS = (
    "one_hot",
    "label",
    "ordinal",
    "frequency",
    "mean_target",
    "prob_ratio",
    "james_stein",
    "hash",
    "wavelength",
)

#: Visible-spectrum wavelength intervals in nanometres, violet to red.
DEFAULT_WAVELENGTH_PALETTE: dict[str, tuple[float, float]] = {
    "violet": (380.0, 450.0),
    "blue": (450.0, 485.0),
    "cyan": (485.0, 500.0),
    "green": (500.0, 565.0),
    "yellow": (565.0, 590.0),
    "orange": (590.0, 625.0),
    "red": (625.0, 740.0),
}


@dataclass(frozen=True)
class EncodingResult:
    """Outcome of encoding one attribute."""

    columns: dict[str, tuple[Value, ...]]
    code_map: dict[str, object]
    lossy_collisions: tuple[frozenset[str], ...] = ()
    interpretability_note: str = ""
    result_mtype: Optional[MeasurementType] = None

    def __post_init__(self) -> None:
        codes = [repr(c) for c in self.code_map.values()]
        injective = len(set(codes)) == len(codes)
        if injective and self.lossy_collisions:
            raise HetvizError("collisions reported for an injective code map")
        if not injective and not self.lossy_collisions:
            raise HetvizError("non-injective code map must report its collisions")


@dataclass(frozen=True)
class TargetStats:
    """Per-value target statistics for one attribute."""

    totals: dict[str, int]
    per_class: dict[str, dict[str, int]]
    positive_rate: dict[str, float]
    positive_class: str
    global_positive_rate: float


def _symbols(ds: Dataset, attr: str) -> tuple[str, ...]:
    return tuple(value_symbol(v) for v in ds.column(attr))


def _distinct(ds: Dataset, attr: str) -> tuple[str, ...]:
    """Distinct non-missing symbols, in declared order when present, else first appearance."""
    a = ds.attribute(attr)
    seen: dict[str, None] = {}
    for s in _symbols(ds, attr):
        if s != "?":
            seen.setdefault(s, None)
    if a.declared_order is not None:
        return tuple(v for v in a.declared_order if v in seen)
    return tuple(seen)


def _collisions(code_map: dict[str, object]) -> tuple[frozenset[str], ...]:
    by_code: dict[str, list[str]] = defaultdict(list)
    for v, c in code_map.items():
        by_code[repr(c)].append(v)
    return tuple(frozenset(vs) for vs in by_code.values() if len(vs) > 1)


def _require_target(ds: Dataset, op: str) -> None:
    if ds.target_index is None:
        raise HetvizError(f"{op} requires a dataset with a target attribute")


def _positive_class(ds: Dataset, positive: Optional[str]) -> str:
    labels = ds.class_labels()
    if positive is not None:
        if positive not in labels:
            raise HetvizError(f"unknown target class {positive!r}")
        return positive
    if "1" in labels:
        return "1"
    if len(labels) < 2:
        return labels[0]
    return labels[1]


def target_stats(ds: Dataset, attr: str, positive: Optional[str] = None) -> TargetStats:
    """Count target classes per attribute value; basis for target encoders."""
    _require_target(ds, "target_stats")
    pos = _positive_class(ds, positive)
    totals: dict[str, int] = Counter()
    per_class: dict[str, dict[str, int]] = defaultdict(Counter)
    targets = tuple(value_symbol(v) for v in ds.target_column())
    n_pos = 0
    for sym, cls in zip(_symbols(ds, attr), targets):
        totals[sym] += 1
        per_class[sym][cls] += 1
        if cls == pos:
            n_pos += 1
    rate = {v: per_class[v][pos] / totals[v] for v in totals}
    return TargetStats(
        totals=dict(totals),
        per_class={v: dict(c) for v, c in per_class.items()},
        positive_rate=rate,
        positive_class=pos,
        global_positive_rate=n_pos / len(ds.rows) if ds.rows else 0.0,
    )


def one_hot(ds: Dataset, attr: str) -> EncodingResult:
    """Map a discrete attribute to one binary column per distinct value.

    Every row has exactly one 1 across the generated columns, so any two
    distinct value codes sit at Hamming distance exactly 2.
    """
    a = ds.attribute(attr)
    if a.mtype.kind not in (Scale.NOMINAL, Scale.ORDINAL):
        raise TypePermissionError(
            f"one-hot encoding applies to nominal or ordinal attributes, "
            f"not {a.mtype.kind.value} attribute {attr!r}"
        )
    values = list(_distinct(ds, attr))
    symbols = _symbols(ds, attr)
    if "?" in symbols:
        values.append("?")
    columns: dict[str, tuple[Value, ...]] = {}
    for v in values:
        columns[f"{attr}={v}"] = tuple(1.0 if s == v else 0.0 for s in symbols)
    code_map = {
        v: tuple(1 if v == w else 0 for w in values) for v in values
    }
    return EncodingResult(
        columns=columns,
        code_map=code_map,
        interpretability_note=(
            "one-hot coding preserves the equal Hamming distances between values; "
            "it expands dimensionality by the distinct-value count"
        ),
        result_mtype=MeasurementType(Scale.ABSOLUTE),
    )


def label_encode(ds: Dataset, attr: str) -> EncodingResult:
    """Assign integers 1..k to distinct values in first-appearance order."""
    values = _distinct(ds, attr)
    code_map: dict[str, object] = {v: float(i + 1) for i, v in enumerate(values)}
    symbols = _symbols(ds, attr)
    column = tuple(
        MISSING if s == "?" else code_map[s] for s in symbols  # type: ignore[misc]
    )
    return EncodingResult(
        columns={attr: column},
        code_map=code_map,
        interpretability_note=(
            "label codes carry no distance meaning; not interpretable for "
            "algorithms that exploit differences of distances (e.g. kNN)"
        ),
        result_mtype=MeasurementType(Scale.NOMINAL),
    )


def ordinal_encode(ds: Dataset, attr: str) -> EncodingResult:
    """Assign codes 1..k strictly increasing along the declared value order."""
    a = ds.attribute(attr)
    if a.declared_order is None:
        raise HetvizError(f"ordinal encoding of {attr!r} requires a declared order")
    order = a.declared_order
    for s in _symbols(ds, attr):
        if s != "?" and s not in order:
            raise HetvizError(f"value {s!r} absent from the declared order of {attr!r}")
    code_map: dict[str, object] = {v: float(i + 1) for i, v in enumerate(order)}
    column = tuple(
        MISSING if s == "?" else code_map[s] for s in _symbols(ds, attr)  # type: ignore[misc]
    )
    return EncodingResult(
        columns={attr: column},
        code_map=code_map,
        interpretability_note="codes follow the declared order; order tests are meaningful, arithmetic is not",
        result_mtype=MeasurementType(Scale.ORDINAL),
    )


def frequency_encode(ds: Dataset, attr: str) -> EncodingResult:
    """Code each value by its relative frequency; equal-frequency values collide."""
    symbols = _symbols(ds, attr)
    counts = Counter(s for s in symbols if s != "?")
    n = len(ds.rows)
    code_map: dict[str, object] = {
        v: counts[v] / n for v in _distinct(ds, attr)
    }
    column = tuple(MISSING if s == "?" else code_map[s] for s in symbols)  # type: ignore[misc]
    return EncodingResult(
        columns={attr: column},
        code_map=code_map,
        lossy_collisions=_collisions(code_map),
        interpretability_note=(
            "values sharing a frequency become indistinguishable; the visual "
            "frequency layout keeps separate bars instead"
        ),
        result_mtype=MeasurementType(Scale.RATIO),
    )


def mean_target_encode(
    ds: Dataset, attr: str, positive: Optional[str] = None
) -> EncodingResult:
    """Code each value by the fraction of its rows in the positive class."""
    _require_target(ds, "mean-target encoding")
    stats = target_stats(ds, attr, positive)
    code_map: dict[str, object] = {
        v: stats.positive_rate[v] for v in _distinct(ds, attr)
    }
    column = tuple(
        MISSING if s == "?" else code_map[s] for s in _symbols(ds, attr)  # type: ignore[misc]
    )
    return EncodingResult(
        columns={attr: column},
        code_map=code_map,
        lossy_collisions=_collisions(code_map),
        interpretability_note="values with equal class rates receive equal codes (lossy)",
        result_mtype=MeasurementType(Scale.RATIO),
    )


def probability_ratio_encode(
    ds: Dataset, attr: str, smoothing: float = 1.0, positive: Optional[str] = None
) -> EncodingResult:
    """Code each value by (n1 + smoothing) / (n0 + smoothing) over the two classes."""
    _require_target(ds, "probability-ratio encoding")
    if smoothing < 0:
        raise HetvizError(f"smoothing must be non-negative, got {smoothing}")
    stats = target_stats(ds, attr, positive)
    code_map: dict[str, object] = {}
    for v in _distinct(ds, attr):
        n1 = stats.per_class[v].get(stats.positive_class, 0)
        n0 = stats.totals[v] - n1
        if smoothing == 0 and n0 == 0:
            raise HetvizError(
                f"value {v!r} has no negative-class rows; ratio undefined without smoothing"
            )
        code_map[v] = (n1 + smoothing) / (n0 + smoothing)
    column = tuple(
        MISSING if s == "?" else code_map[s] for s in _symbols(ds, attr)  # type: ignore[misc]
    )
    return EncodingResult(
        columns={attr: column},
        code_map=code_map,
        lossy_collisions=_collisions(code_map),
        interpretability_note="class-frequency ratio; values with equal ratios collide",
        result_mtype=MeasurementType(Scale.RATIO),
    )


def james_stein_encode(
    ds: Dataset, attr: str, shrink: float = 1.0, positive: Optional[str] = None
) -> EncodingResult:
    """Shrink each value's class rate toward the global rate.

    The weight n_v / (n_v + shrink) grows with the value's support, so rare
    values stay near the global mean and frequent values keep their own rate.
    """
    _require_target(ds, "James-Stein encoding")
    if shrink <= 0:
        raise HetvizError(f"shrink must be positive, got {shrink}")
    stats = target_stats(ds, attr, positive)
    code_map: dict[str, object] = {}
    for v in _distinct(ds, attr):
        n_v = stats.totals[v]
        lam = n_v / (n_v + shrink)
        code_map[v] = lam * stats.positive_rate[v] + (1 - lam) * stats.global_positive_rate
    column = tuple(
        MISSING if s == "?" else code_map[s] for s in _symbols(ds, attr)  # type: ignore[misc]
    )
    return EncodingResult(
        columns={attr: column},
        code_map=code_map,
        lossy_collisions=_collisions(code_map),
        interpretability_note="shrunk class rate; coincident shrunk rates collide",
        result_mtype=MeasurementType(Scale.RATIO),
    )


def hash_encode(ds: Dataset, attr: str, dim: int, seed: int = 0) -> EncodingResult:
    """Signed feature hash of a nominal attribute into a fixed dimension.

    Deterministic for a given seed. Distances are only roughly preserved and
    the hashed space is generally not interpretable.
    """
    a = ds.attribute(attr)
    if a.mtype.kind is not Scale.NOMINAL:
        raise TypePermissionError(
            f"hash encoding applies to nominal attributes, not {a.mtype.kind.value}"
        )
    if dim <= 0:
        raise HetvizError(f"hash dimension must be positive, got {dim}")

    def vector(value: str) -> tuple[float, ...]:
        digest = hashlib.blake2b(
            value.encode("utf-8"), key=str(seed).encode("utf-8"), digest_size=8
        ).digest()
        h = int.from_bytes(digest, "big")
        slot = h % dim
        sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
        return tuple(sign if j == slot else 0.0 for j in range(dim))

    values = _distinct(ds, attr)
    code_map: dict[str, object] = {v: vector(v) for v in values}
    symbols = _symbols(ds, attr)
    columns: dict[str, tuple[Value, ...]] = {}
    for j in range(dim):
        columns[f"{attr}#h{j}"] = tuple(
            MISSING if s == "?" else code_map[s][j] for s in symbols  # type: ignore[index]
        )
    return EncodingResult(
        columns=columns,
        code_map=code_map,
        lossy_collisions=_collisions(code_map),
        interpretability_note="a hashed space can be not interpretable; use with care",
        result_mtype=MeasurementType(Scale.INTERVAL),
    )


def wavelength_color_encode(
    ds: Dataset,
    attr: str,
    palette: Optional[dict[str, tuple[float, float]]] = None,
) -> EncodingResult:
    """Code colors by the order of their wavelength intervals, starting from 0.

    The palette maps each color name to its wavelength interval; colors are
    ordered by interval lower bound. The result is treated as ordinal data.
    """
    palette = palette if palette is not None else DEFAULT_WAVELENGTH_PALETTE
    symbols = _symbols(ds, attr)
    for s in symbols:
        if s != "?" and s not in palette:
            raise HetvizError(f"color {s!r} is not covered by the palette")
    observed = _distinct(ds, attr)
    ordered = sorted(observed, key=lambda c: palette[c][0])
    code_map: dict[str, object] = {c: float(i) for i, c in enumerate(ordered)}
    column = tuple(MISSING if s == "?" else code_map[s] for s in symbols)  # type: ignore[misc]
    return EncodingResult(
        columns={attr: column},
        code_map=code_map,
        interpretability_note="colors ordered by physical wavelength; order tests are meaningful",
        result_mtype=MeasurementType(Scale.ORDINAL),
    )
