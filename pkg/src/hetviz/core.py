"""Measurement-type data model and the interpretability permission guard.

Every other module builds on these types: attributes carry a measurement
scale, and the permission guard decides which relations are meaningful to
compute on them (equality only for nominal, order for ordinal, and so on).
All types here are immutable after construction and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union


class HetvizError(Exception):
    """Base class for engine errors."""


class SchemaError(HetvizError):
    """A dataset, attribute, or constraint is structurally invalid."""


class TypePermissionError(HetvizError):
    """An operation was attempted that the measurement scale forbids."""


class Scale(str, Enum):
    NOMINAL = "nominal"
    ORDINAL = "ordinal"
    INTERVAL = "interval"
    RATIO = "ratio"
    ABSOLUTE = "absolute"
    CYCLICAL = "cyclical"


class Relation(str, Enum):
    EQUALITY = "equality"
    ORDER = "order"
    DIFFERENCE = "difference"
    DIFFERENCE_COMPARISON = "difference_comparison"
    RATIO_OP = "ratio"
    CYCLIC_DIFFERENCE = "cyclic_difference"


@dataclass(frozen=True)
class MeasurementType:
    """A measurement scale, with a period when the scale is cyclical."""

    kind: Scale
    period: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind is Scale.CYCLICAL:
            if self.period is None or not math.isfinite(self.period) or self.period <= 0:
                raise SchemaError("cyclical scale requires a finite positive period")
        elif self.period is not None:
            raise SchemaError(f"{self.kind.value} scale does not take a period")

    @property
    def is_numeric(self) -> bool:
        return self.kind in (Scale.INTERVAL, Scale.RATIO, Scale.ABSOLUTE, Scale.CYCLICAL)


NOMINAL = MeasurementType(Scale.NOMINAL)
ORDINAL = MeasurementType(Scale.ORDINAL)
INTERVAL = MeasurementType(Scale.INTERVAL)
RATIO = MeasurementType(Scale.RATIO)
ABSOLUTE = MeasurementType(Scale.ABSOLUTE)


def cyclical(period: float) -> MeasurementType:
    return MeasurementType(Scale.CYCLICAL, period)


class _Missing:
    """Singleton marker for a missing cell."""

    _instance: Optional["_Missing"] = None

    def __new__(cls) -> "_Missing":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MISSING"

    def __bool__(self) -> bool:
        return False


MISSING = _Missing()


@dataclass(frozen=True)
class Level:
    """An ordinal value: a symbol together with its rank in the declared order."""

    label: str
    rank: int

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise SchemaError(f"rank must be non-negative, got {self.rank}")


#: A cell value: missing, a finite number, a nominal symbol, or an ordinal level.
Value = Union[_Missing, float, str, Level]


def is_missing(v: Value) -> bool:
    return v is MISSING


def value_symbol(v: Value) -> str:
    """Display symbol of a value; missing renders as '?'."""
    if v is MISSING:
        return "?"
    if isinstance(v, Level):
        return v.label
    if isinstance(v, float):
        return f"{v:g}"
    return str(v)


@dataclass(frozen=True)
class SimilarityGroups:
    """A partition of an attribute's values, with integer codes chosen so that
    within-group code gaps are smaller than cross-group gaps.

    ``groups`` lists the partition blocks in code order; ``codes`` maps every
    value to its integer code.
    """

    groups: tuple[tuple[str, ...], ...]
    codes: Mapping[str, int]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        prev = None
        for group in self.groups:
            for v in group:
                if v in seen:
                    raise SchemaError(f"value {v!r} appears in more than one group")
                seen.add(v)
                if v not in self.codes:
                    raise SchemaError(f"value {v!r} has no code")
                code = self.codes[v]
                if prev is not None and code <= prev:
                    raise SchemaError("codes must be strictly increasing across the partition")
                prev = code
        extra = set(self.codes) - seen
        if extra:
            raise SchemaError(f"codes given for values outside the partition: {sorted(extra)}")

    def group_of(self, value: str) -> int:
        for i, group in enumerate(self.groups):
            if value in group:
                return i
        raise HetvizError(f"unknown value {value!r}")


@dataclass(frozen=True)
class Attribute:
    name: str
    mtype: MeasurementType
    declared_order: Optional[tuple[str, ...]] = None
    modality: str = ""
    similarity_groups: Optional[SimilarityGroups] = None
    # Numeric display codes for non-numeric values (filled in by scheme
    # application; used for normalization and threshold elimination).
    codes: Optional[Mapping[str, float]] = None

    def __post_init__(self) -> None:
        if self.mtype.kind is Scale.ORDINAL and self.declared_order is None:
            raise SchemaError(f"ordinal attribute {self.name!r} needs a declared order")
        if self.declared_order is not None and len(set(self.declared_order)) != len(self.declared_order):
            raise SchemaError(f"declared order of {self.name!r} contains duplicates")

    def rank_of(self, label: str) -> int:
        if self.declared_order is None:
            raise SchemaError(f"attribute {self.name!r} has no declared order")
        try:
            return self.declared_order.index(label)
        except ValueError:
            raise HetvizError(f"value {label!r} not in declared order of {self.name!r}") from None

    def conforms(self, v: Value) -> bool:
        if v is MISSING:
            return True
        kind = self.mtype.kind
        if kind is Scale.NOMINAL:
            return isinstance(v, str)
        if kind is Scale.ORDINAL:
            return isinstance(v, Level)
        return isinstance(v, float) and math.isfinite(v)


@dataclass(frozen=True)
class Dataset:
    """A rectangular typed column store with an optional target attribute."""

    attributes: tuple[Attribute, ...]
    rows: tuple[tuple[Value, ...], ...]
    target_index: Optional[int] = None

    def __post_init__(self) -> None:
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise SchemaError("attribute names must be unique")
        n = len(self.attributes)
        for r, row in enumerate(self.rows):
            if len(row) != n:
                raise SchemaError(f"row {r} has {len(row)} values, expected {n}")
            for a, v in zip(self.attributes, row):
                if not a.conforms(v):
                    raise SchemaError(
                        f"row {r}: value {v!r} does not conform to "
                        f"{a.mtype.kind.value} attribute {a.name!r}"
                    )
        if self.target_index is not None and not (0 <= self.target_index < n):
            raise SchemaError(f"target index {self.target_index} out of range")

    def attr_index(self, name: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise HetvizError(f"unknown attribute {name!r}")

    def attribute(self, name: str) -> Attribute:
        return self.attributes[self.attr_index(name)]

    def column(self, name: str) -> tuple[Value, ...]:
        i = self.attr_index(name)
        return tuple(row[i] for row in self.rows)

    @property
    def target_attribute(self) -> Attribute:
        if self.target_index is None:
            raise SchemaError("dataset has no target attribute")
        return self.attributes[self.target_index]

    def target_column(self) -> tuple[Value, ...]:
        if self.target_index is None:
            raise SchemaError("dataset has no target attribute")
        return tuple(row[self.target_index] for row in self.rows)

    def class_labels(self) -> tuple[str, ...]:
        """Distinct target symbols in first-appearance order."""
        seen: dict[str, None] = {}
        for v in self.target_column():
            seen.setdefault(value_symbol(v), None)
        return tuple(seen)


@dataclass(frozen=True)
class HierarchyGroup:
    """A named node of an attribute hierarchy; leaves are attribute indices."""

    name: str
    children: tuple[Union["HierarchyGroup", int], ...]

    def leaf_indices(self) -> tuple[int, ...]:
        out: list[int] = []
        for c in self.children:
            if isinstance(c, HierarchyGroup):
                out.extend(c.leaf_indices())
            else:
                out.append(c)
        return tuple(out)

    def depth(self) -> int:
        sub = [c.depth() for c in self.children if isinstance(c, HierarchyGroup)]
        return 1 + (max(sub) if sub else 0)


@dataclass(frozen=True)
class AttributeHierarchy:
    root: HierarchyGroup
    active_level: int = 1

    def __post_init__(self) -> None:
        leaves = self.root.leaf_indices()
        if len(set(leaves)) != len(leaves):
            raise SchemaError("an attribute index appears in more than one leaf")
        if not (1 <= self.active_level <= self.root.depth()):
            raise SchemaError(
                f"active level {self.active_level} outside tree depth {self.root.depth()}"
            )

    def groups_at_active_level(self) -> tuple[tuple[str, tuple[int, ...]], ...]:
        """(group name, attribute indices) pairs at the active depth."""
        out: list[tuple[str, tuple[int, ...]]] = []

        def walk(node: HierarchyGroup, depth: int) -> None:
            if depth == self.active_level:
                out.append((node.name, node.leaf_indices()))
                return
            loose: list[int] = []
            for c in node.children:
                if isinstance(c, HierarchyGroup):
                    walk(c, depth + 1)
                else:
                    loose.append(c)
            if loose:
                out.append((node.name, tuple(loose)))

        walk(self.root, 1)
        return tuple(out)


# --- Permission guard -------------------------------------------------------

_NON_CYCLIC = frozenset(
    {
        Relation.EQUALITY,
        Relation.ORDER,
        Relation.DIFFERENCE,
        Relation.DIFFERENCE_COMPARISON,
        Relation.RATIO_OP,
    }
)

_PERMITTED: dict[Scale, frozenset[Relation]] = {
    Scale.NOMINAL: frozenset({Relation.EQUALITY}),
    Scale.ORDINAL: frozenset({Relation.EQUALITY, Relation.ORDER}),
    Scale.INTERVAL: frozenset(
        {
            Relation.EQUALITY,
            Relation.ORDER,
            Relation.DIFFERENCE,
            Relation.DIFFERENCE_COMPARISON,
        }
    ),
    Scale.RATIO: _NON_CYCLIC,
    # Absolute differs from ratio only by its fixed unit; same permissions.
    Scale.ABSOLUTE: _NON_CYCLIC,
    Scale.CYCLICAL: frozenset(
        {Relation.EQUALITY, Relation.CYCLIC_DIFFERENCE, Relation.DIFFERENCE_COMPARISON}
    ),
}


def permitted_relations(mtype: MeasurementType) -> frozenset[Relation]:
    """The relations that are meaningful on the given measurement scale."""
    return _PERMITTED[mtype.kind]


@dataclass(frozen=True)
class Decision:
    """Outcome of a permission check. Forbidden is a value, not a failure."""

    allowed: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.allowed


ALLOWED = Decision(True)


def forbidden(reason: str) -> Decision:
    return Decision(False, reason)


def check_operation(attr: Attribute, rel: Relation) -> Decision:
    """Decide whether a relation is interpretable on the given attribute."""
    if rel in permitted_relations(attr.mtype):
        return ALLOWED
    if rel is Relation.DIFFERENCE_COMPARISON and attr.similarity_groups is not None:
        # Similarity-coded attributes admit restricted gap comparisons;
        # per-pair legality is decided by compare_differences.
        return ALLOWED
    return forbidden(
        f"{rel.value} is not interpretable on {attr.mtype.kind.value} attribute {attr.name!r}"
    )


@dataclass(frozen=True)
class Comparison:
    """A permission decision together with the comparison result when allowed."""

    decision: Decision
    result: Optional[bool] = None

    def __post_init__(self) -> None:
        if not self.decision.allowed and self.result is not None:
            raise SchemaError("a forbidden comparison carries no result")


def _gap_and_within(sg: SimilarityGroups, pair: tuple[str, str]) -> tuple[int, bool]:
    a, b = pair
    gap = abs(sg.codes[a] - sg.codes[b])
    within = sg.group_of(a) == sg.group_of(b)
    return gap, within


def compare_differences(
    attr: Attribute,
    pair1: tuple[Value, Value],
    pair2: tuple[Value, Value],
) -> Comparison:
    """Compare the value gap of pair1 against pair2, if that is interpretable.

    On similarity-coded attributes a gap comparison is allowed only when at
    least one pair lies within a single group (within-group gaps are designed
    smaller than cross-group gaps, so the comparison carries meaning);
    comparing two cross-group gaps is forbidden.
    """
    for v in (*pair1, *pair2):
        if v is MISSING:
            return Comparison(forbidden("comparison involving a missing value is unknown"))

    sg = attr.similarity_groups
    if sg is not None:
        for v in (*pair1, *pair2):
            if not isinstance(v, str) or v not in sg.codes:
                raise HetvizError(f"unknown value {v!r} for attribute {attr.name!r}")
        gap1, within1 = _gap_and_within(sg, pair1)  # type: ignore[arg-type]
        gap2, within2 = _gap_and_within(sg, pair2)  # type: ignore[arg-type]
        if not (within1 or within2):
            return Comparison(
                forbidden(
                    "comparing two cross-group gaps is not interpretable "
                    f"on attribute {attr.name!r}"
                )
            )
        return Comparison(ALLOWED, gap1 < gap2)

    if Relation.DIFFERENCE_COMPARISON not in permitted_relations(attr.mtype):
        return Comparison(
            forbidden(
                f"difference comparison is not interpretable on "
                f"{attr.mtype.kind.value} attribute {attr.name!r}"
            )
        )

    def gap(pair: tuple[Value, Value]) -> float:
        a, b = pair
        if not isinstance(a, float) or not isinstance(b, float):
            raise HetvizError(f"non-numeric value in pair {pair!r}")
        if attr.mtype.kind is Scale.CYCLICAL:
            assert attr.mtype.period is not None
            return cyclic_difference(a, b, attr.mtype.period)
        return abs(a - b)

    return Comparison(ALLOWED, gap(pair1) < gap(pair2))


def cyclic_difference(a: float, b: float, period: float) -> float:
    """Shorter-arc distance between two cyclical values, in [0, period/2]."""
    if period <= 0:
        raise HetvizError(f"period must be positive, got {period}")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise HetvizError("cyclic difference requires finite inputs")
    d = abs(a - b) % period
    return min(d, period - d)
