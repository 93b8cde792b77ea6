"""CSV parsing, coding schemes, and their application to typed datasets.

A coding scheme records, per attribute: the assigned measurement type, the
encoder to use, optional value or interval groupings, and explicit numeric
codes. Applying a scheme to a raw table yields a typed ``Dataset`` that
satisfies the core-model invariants.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Union

from .core import (
    Attribute,
    AttributeHierarchy,
    Dataset,
    HetvizError,
    HierarchyGroup,
    Level,
    MISSING,
    MeasurementType,
    NOMINAL,
    ORDINAL,
    Scale,
    SchemaError,
    Value,
    value_symbol,
)

SCHEME_VERSION = 1
DEFAULT_MISSING_TOKEN = "?"


class IngestError(HetvizError):
    """Raised for malformed CSV input."""


class SchemeError(HetvizError):
    """Raised for invalid or inapplicable coding schemes."""


@dataclass(frozen=True)
class RawTable:
    """A rectangular table of text cells, before any typing."""

    header: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]
    missing_token: str = DEFAULT_MISSING_TOKEN

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_cols(self) -> int:
        return len(self.header)

    def column(self, name: str) -> tuple[str, ...]:
        try:
            i = self.header.index(name)
        except ValueError:
            raise HetvizError(f"unknown column {name!r}") from None
        return tuple(row[i] for row in self.cells)

    def distinct_values(self, name: str) -> tuple[str, ...]:
        """Distinct non-missing values in first-appearance order."""
        seen: dict[str, None] = {}
        for cell in self.column(name):
            if cell != self.missing_token:
                seen.setdefault(cell, None)
        return tuple(seen)


def parse_csv(
    data: Union[bytes, str],
    delimiter: str = ",",
    has_header: bool = True,
    missing_token: str = DEFAULT_MISSING_TOKEN,
) -> RawTable:
    """Parse delimited text into a rectangular RawTable.

    Ragged rows and duplicate header names are rejected with the offending
    row number or name.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise IngestError(f"input is not valid UTF-8: {e}") from None
    else:
        text = data

    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [tuple(cell.strip() for cell in row) for row in reader if row]
    if not rows:
        raise IngestError("empty input")

    if has_header:
        header, body = rows[0], rows[1:]
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise IngestError(f"duplicate header name(s): {', '.join(dupes)}")
    else:
        header = tuple(f"col{i + 1}" for i in range(len(rows[0])))
        body = rows

    width = len(header)
    for i, row in enumerate(body):
        if len(row) != width:
            raise IngestError(
                f"row {i + 1} has {len(row)} cells, expected {width}"
            )
    return RawTable(header=header, cells=tuple(body), missing_token=missing_token)


# --- Group specs ------------------------------------------------------------


@dataclass(frozen=True)
class ValueGroups:
    """Maps original values to named groups, each group carrying a code."""

    value_to_group: dict[str, str]
    group_codes: dict[str, float]
    default_group: Optional[str] = None

    def __post_init__(self) -> None:
        for v, g in self.value_to_group.items():
            if g not in self.group_codes:
                raise SchemeError(f"group {g!r} (for value {v!r}) has no code")
        if self.default_group is not None and self.default_group not in self.group_codes:
            raise SchemeError(f"default group {self.default_group!r} has no code")

    def group_of(self, value: str) -> str:
        g = self.value_to_group.get(value, self.default_group)
        if g is None:
            raise SchemeError(f"value {value!r} has no group and no default is declared")
        return g


@dataclass(frozen=True)
class Interval:
    start: float
    length: float
    code: int

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise SchemeError(f"interval length must be positive, got {self.length}")

    @property
    def end(self) -> float:
        return self.start + self.length

    def label(self, closed_right: bool) -> str:
        bracket = "]" if closed_right else ")"
        return f"[{self.start:g},{self.end:g}{bracket}"


@dataclass(frozen=True)
class IntervalGroups:
    """Ordered, non-overlapping numeric intervals; the last is closed on the right."""

    intervals: tuple[Interval, ...]

    def __post_init__(self) -> None:
        prev_end = None
        for iv in self.intervals:
            if prev_end is not None and iv.start < prev_end:
                raise SchemeError(f"intervals overlap at {iv.start:g}")
            prev_end = iv.end

    def find(self, x: float) -> Interval:
        last = len(self.intervals) - 1
        for i, iv in enumerate(self.intervals):
            if iv.start <= x < iv.end or (i == last and x == iv.end):
                return iv
        raise SchemeError(f"value {x:g} falls outside every interval group")

    def label_of(self, iv: Interval) -> str:
        return iv.label(closed_right=iv is self.intervals[-1])


GroupSpec = Union[ValueGroups, IntervalGroups]


def generate_interval_groups(
    values: Sequence[float], start: float, length: float
) -> IntervalGroups:
    """Consecutive equal-length intervals covering the observed value range."""
    if length <= 0:
        raise SchemeError(f"interval length must be positive, got {length}")
    finite = [v for v in values if isinstance(v, (int, float)) and math.isfinite(v)]
    if len(finite) != len(values):
        raise SchemeError("interval groups require a numeric attribute")
    if not finite:
        raise SchemeError("no values to group")
    lo, hi = min(finite), max(finite)
    if lo < start:
        raise SchemeError(f"observed minimum {lo:g} lies below the start {start:g}")
    intervals = []
    code = 1
    s = start
    while True:
        intervals.append(Interval(start=s, length=length, code=code))
        s += length
        code += 1
        if s > hi or math.isclose(s, hi):
            # hi == boundary: covered by closing the last interval on the right.
            break
    return IntervalGroups(intervals=tuple(intervals))


# --- Coding schemes ---------------------------------------------------------


@dataclass(frozen=True)
class SchemeEntry:
    """Per-attribute coding choices."""

    mtype: MeasurementType
    encoder: str = "label"
    order: Optional[tuple[str, ...]] = None
    group: Optional[GroupSpec] = None
    explicit_codes: Optional[dict[str, float]] = None
    keep_original_values: bool = False
    lossy: bool = False
    needs_review: bool = False

    def __post_init__(self) -> None:
        if self.explicit_codes and not self.lossy:
            codes = list(self.explicit_codes.values())
            if len(set(codes)) != len(codes):
                raise SchemeError(
                    "explicit codes are not injective; mark the entry lossy if intended"
                )


@dataclass(frozen=True)
class CodingScheme:
    entries: dict[str, SchemeEntry]
    default: Optional[SchemeEntry] = None

    def entry_for(self, name: str) -> SchemeEntry:
        e = self.entries.get(name, self.default)
        if e is None:
            raise SchemeError(f"scheme does not cover attribute {name!r} and declares no default")
        return e


@dataclass(frozen=True)
class SchemeDocument:
    scheme: CodingScheme
    hierarchy: Optional[AttributeHierarchy] = None
    version: int = SCHEME_VERSION


def bulk_assign(raw: RawTable, kind: Scale) -> CodingScheme:
    """Assign one measurement type to every attribute with integer codes 1..n.

    Nominal codes follow first-appearance order; ordinal defaults to lexical
    order of the original values and is flagged for analyst review.
    """
    if kind not in (Scale.NOMINAL, Scale.ORDINAL):
        raise SchemeError(f"bulk assignment supports nominal or ordinal, not {kind.value}")
    entries: dict[str, SchemeEntry] = {}
    for name in raw.header:
        values = raw.distinct_values(name)
        if kind is Scale.ORDINAL:
            order = tuple(sorted(values))
            entries[name] = SchemeEntry(
                mtype=ORDINAL,
                encoder="ordinal",
                order=order,
                explicit_codes={v: float(i + 1) for i, v in enumerate(order)},
                needs_review=True,
            )
        else:
            entries[name] = SchemeEntry(
                mtype=NOMINAL,
                encoder="label",
                explicit_codes={v: float(i + 1) for i, v in enumerate(values)},
            )
    return CodingScheme(entries=entries)


def _coded_cell(
    entry: SchemeEntry, raw_value: str, attr_name: str
) -> tuple[str, Optional[float]]:
    """Resolve one raw cell to its display symbol and numeric code."""
    if isinstance(entry.group, IntervalGroups):
        try:
            x = float(raw_value)
        except ValueError:
            raise SchemeError(
                f"attribute {attr_name!r}: non-numeric value {raw_value!r} "
                "under interval grouping"
            ) from None
        iv = entry.group.find(x)
        symbol = raw_value if entry.keep_original_values else entry.group.label_of(iv)
        return symbol, float(iv.code)

    if isinstance(entry.group, ValueGroups):
        label = entry.group.group_of(raw_value)
        symbol = raw_value if entry.keep_original_values else label
        return symbol, entry.group.group_codes[label]

    symbol = raw_value
    if entry.explicit_codes is not None:
        if raw_value in entry.explicit_codes:
            return symbol, entry.explicit_codes[raw_value]
        raise SchemeError(
            f"attribute {attr_name!r}: value {raw_value!r} has no code and no default"
        )
    return symbol, None


def apply_scheme(raw: RawTable, scheme: CodingScheme) -> Dataset:
    """Group and code raw cells per the scheme, producing a typed Dataset.

    Row count and row order are preserved; the target attribute, when the
    header contains one named "class", is marked on the result.
    """
    columns: list[tuple[Value, ...]] = []
    attributes: list[Attribute] = []

    for name in raw.header:
        entry = scheme.entry_for(name)
        kind = entry.mtype.kind
        raw_col = raw.column(name)

        resolved: list[tuple[str, Optional[float]] | None] = []
        for cell in raw_col:
            if cell == raw.missing_token:
                resolved.append(None)
            else:
                resolved.append(_coded_cell(entry, cell, name))

        if kind is Scale.NOMINAL:
            codes = {s: c for item in resolved if item for s, c in [item] if c is not None}
            attributes.append(
                Attribute(name=name, mtype=entry.mtype, codes=codes or None)
            )
            columns.append(
                tuple(MISSING if item is None else item[0] for item in resolved)
            )
        elif kind is Scale.ORDINAL:
            order = entry.order
            if order is None:
                symbols = {item[0]: item[1] for item in resolved if item}
                if all(c is not None for c in symbols.values()):
                    order = tuple(sorted(symbols, key=lambda s: symbols[s]))
                else:
                    order = tuple(sorted(symbols))
            ranks = {s: r for r, s in enumerate(order)}
            col: list[Value] = []
            for item in resolved:
                if item is None:
                    col.append(MISSING)
                    continue
                symbol, _ = item
                if symbol not in ranks:
                    raise SchemeError(
                        f"attribute {name!r}: value {symbol!r} absent from the declared order"
                    )
                col.append(Level(symbol, ranks[symbol]))
            codes = {
                s: (c if c is not None else float(ranks[s]) + 1)
                for item in resolved
                if item
                for s, c in [item]
            }
            attributes.append(
                Attribute(
                    name=name,
                    mtype=entry.mtype,
                    declared_order=order,
                    codes=codes or None,
                )
            )
            columns.append(tuple(col))
        else:
            col = []
            for item in resolved:
                if item is None:
                    col.append(MISSING)
                    continue
                symbol, code = item
                if code is not None:
                    col.append(code)
                else:
                    try:
                        col.append(float(symbol))
                    except ValueError:
                        raise SchemeError(
                            f"attribute {name!r}: value {symbol!r} has no code and no default"
                        ) from None
            attributes.append(Attribute(name=name, mtype=entry.mtype))
            columns.append(tuple(col))

    rows = tuple(zip(*columns)) if columns else ()
    target = raw.header.index("class") if "class" in raw.header else None
    return Dataset(
        attributes=tuple(attributes),
        rows=tuple(rows) if raw.n_rows else (),
        target_index=target,
    )


def drop_constant_attributes(ds: Dataset) -> tuple[Dataset, tuple[str, ...]]:
    """Remove attributes with at most one distinct non-missing value.

    The target attribute is always kept. Row count is unchanged.
    """
    keep: list[int] = []
    removed: list[str] = []
    for i, attr in enumerate(ds.attributes):
        if i == ds.target_index:
            keep.append(i)
            continue
        distinct = {row[i] for row in ds.rows if row[i] is not MISSING}
        if len(distinct) <= 1:
            removed.append(attr.name)
        else:
            keep.append(i)
    if not removed:
        return ds, ()
    new_target = keep.index(ds.target_index) if ds.target_index in keep else None
    return (
        Dataset(
            attributes=tuple(ds.attributes[i] for i in keep),
            rows=tuple(tuple(row[i] for i in keep) for row in ds.rows),
            target_index=new_target,
        ),
        tuple(removed),
    )


def numeric_view(ds: Dataset, name: str) -> tuple[Optional[float], ...]:
    """Numeric reading of a column: numbers as-is, coded symbols via their codes,
    ordinal levels falling back to their rank. Missing maps to None."""
    attr = ds.attribute(name)
    out: list[Optional[float]] = []
    for v in ds.column(name):
        if v is MISSING:
            out.append(None)
        elif isinstance(v, float):
            out.append(v)
        elif isinstance(v, Level):
            code = (attr.codes or {}).get(v.label)
            out.append(float(code) if code is not None else float(v.rank))
        else:
            if not attr.codes or v not in attr.codes:
                raise SchemaError(
                    f"attribute {name!r} is nominal without codes; assign codes first"
                )
            out.append(float(attr.codes[v]))
    return tuple(out)


def normalize_unit_interval(ds: Dataset) -> Dataset:
    """Min-max normalize every non-target attribute to [0, 1].

    Constant columns map to 0.5 so they stay renderable. The result re-types
    normalized attributes as interval data (positions, not original scales).
    """
    columns: list[tuple[Value, ...]] = []
    attributes: list[Attribute] = []
    for i, attr in enumerate(ds.attributes):
        if i == ds.target_index:
            attributes.append(attr)
            columns.append(ds.column(attr.name))
            continue
        nums = numeric_view(ds, attr.name)
        observed = [x for x in nums if x is not None]
        if not observed:
            lo, hi = 0.0, 0.0
        else:
            lo, hi = min(observed), max(observed)
        span = hi - lo
        if span == 0:
            col = tuple(MISSING if x is None else 0.5 for x in nums)
        else:
            col = tuple(MISSING if x is None else (x - lo) / span for x in nums)
        attributes.append(Attribute(name=attr.name, mtype=MeasurementType(Scale.INTERVAL)))
        columns.append(col)
    rows = tuple(zip(*columns)) if columns else ()
    return Dataset(
        attributes=tuple(attributes),
        rows=tuple(rows) if ds.rows else (),
        target_index=ds.target_index,
    )


# --- Scheme document serialization ------------------------------------------


def _num(x: float) -> Union[int, float]:
    return int(x) if float(x).is_integer() else float(x)


def _group_to_json(group: GroupSpec) -> dict:
    if isinstance(group, IntervalGroups):
        return {
            "kind": "intervals",
            "intervals": [
                {"start": _num(iv.start), "length": _num(iv.length), "code": iv.code}
                for iv in group.intervals
            ],
        }
    out: dict = {
        "kind": "values",
        "map": {v: group.value_to_group[v] for v in sorted(group.value_to_group)},
        "codes": {g: _num(c) for g, c in sorted(group.group_codes.items())},
    }
    if group.default_group is not None:
        out["default_group"] = group.default_group
    return out


def _group_from_json(obj: dict, attr: str) -> GroupSpec:
    kind = obj.get("kind")
    if kind == "intervals":
        return IntervalGroups(
            intervals=tuple(
                Interval(float(iv["start"]), float(iv["length"]), int(iv["code"]))
                for iv in obj["intervals"]
            )
        )
    if kind == "values":
        return ValueGroups(
            value_to_group=dict(obj["map"]),
            group_codes={g: float(c) for g, c in obj["codes"].items()},
            default_group=obj.get("default_group"),
        )
    raise SchemeError(f"attribute {attr!r}: unknown group kind {kind!r}")


def _entry_to_json(name: str, entry: SchemeEntry) -> dict:
    out: dict = {"name": name, "mtype": entry.mtype.kind.value, "encoder": entry.encoder}
    if entry.mtype.period is not None:
        out["period"] = _num(entry.mtype.period)
    if entry.order is not None:
        out["order"] = list(entry.order)
    if entry.group is not None:
        out["groups"] = _group_to_json(entry.group)
    if entry.explicit_codes is not None:
        out["codes"] = {v: _num(c) for v, c in sorted(entry.explicit_codes.items())}
    if entry.keep_original_values:
        out["keep_original_values"] = True
    if entry.lossy:
        out["lossy"] = True
    if entry.needs_review:
        out["needs_review"] = True
    return out


def _entry_from_json(obj: dict) -> tuple[str, SchemeEntry]:
    name = obj.get("name")
    if not name:
        raise SchemeError("scheme entry missing a name")
    if "mtype" not in obj:
        raise SchemeError(f"attribute {name!r}: entry missing mtype")
    try:
        kind = Scale(obj["mtype"])
    except ValueError:
        raise SchemeError(f"attribute {name!r}: unknown mtype {obj['mtype']!r}") from None
    mtype = MeasurementType(kind, float(obj["period"])) if "period" in obj else MeasurementType(kind)
    entry = SchemeEntry(
        mtype=mtype,
        encoder=obj.get("encoder", "label"),
        order=tuple(obj["order"]) if "order" in obj else None,
        group=_group_from_json(obj["groups"], name) if "groups" in obj else None,
        explicit_codes={v: float(c) for v, c in obj["codes"].items()} if "codes" in obj else None,
        keep_original_values=bool(obj.get("keep_original_values", False)),
        lossy=bool(obj.get("lossy", False)),
        needs_review=bool(obj.get("needs_review", False)),
    )
    return name, entry


def _hierarchy_to_json(h: AttributeHierarchy) -> dict:
    def node(g: HierarchyGroup) -> dict:
        return {
            "name": g.name,
            "children": [node(c) if isinstance(c, HierarchyGroup) else c for c in g.children],
        }

    return {"active_level": h.active_level, "root": node(h.root)}


def _hierarchy_from_json(obj: dict) -> AttributeHierarchy:
    def node(o: dict) -> HierarchyGroup:
        return HierarchyGroup(
            name=o["name"],
            children=tuple(node(c) if isinstance(c, dict) else int(c) for c in o["children"]),
        )

    try:
        return AttributeHierarchy(root=node(obj["root"]), active_level=int(obj["active_level"]))
    except (KeyError, TypeError) as e:
        raise SchemeError(f"malformed hierarchy: {e}") from None


def save_scheme(doc: SchemeDocument) -> bytes:
    """Serialize a scheme document to canonical UTF-8 JSON bytes.

    Field order is fixed so identical documents serialize identically.
    """
    out: dict = {
        "version": doc.version,
        "attributes": [_entry_to_json(n, e) for n, e in doc.scheme.entries.items()],
    }
    if doc.scheme.default is not None:
        out["default"] = _entry_to_json("*", doc.scheme.default)
    if doc.hierarchy is not None:
        out["hierarchy"] = _hierarchy_to_json(doc.hierarchy)
    return (json.dumps(out, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def load_scheme(data: bytes) -> SchemeDocument:
    """Parse a scheme document; inverse of save_scheme."""
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SchemeError(f"malformed scheme document: {e}") from None
    if not isinstance(obj, dict):
        raise SchemeError("scheme document must be a JSON object")
    version = obj.get("version")
    if version != SCHEME_VERSION:
        raise SchemeError(f"unsupported scheme version {version!r}, expected {SCHEME_VERSION}")
    entries: dict[str, SchemeEntry] = {}
    for item in obj.get("attributes", []):
        name, entry = _entry_from_json(item)
        entries[name] = entry
    default = _entry_from_json(obj["default"])[1] if "default" in obj else None
    hierarchy = _hierarchy_from_json(obj["hierarchy"]) if "hierarchy" in obj else None
    return SchemeDocument(
        scheme=CodingScheme(entries=entries, default=default),
        hierarchy=hierarchy,
        version=int(version),
    )
