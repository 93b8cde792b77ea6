"""Hyperblocks: axis-aligned interpretable regions over mixed attributes.

A hyperblock constrains each attribute independently: a center/length band
for numeric attributes, a rank range for ordinal ones, a value set for
nominal ones. Attributes without a constraint are unconstrained. A pure
hyperblock contains training cases of a single class only.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .core import (
    Attribute,
    Dataset,
    HetvizError,
    Level,
    MISSING,
    Scale,
    SchemaError,
    Value,
    value_symbol,
)
from . import rules as _rules


@dataclass(frozen=True)
class NumericBand:
    center: float
    length: float

    def __post_init__(self) -> None:
        if self.length < 0:
            raise SchemaError(f"band length must be non-negative, got {self.length}")

    @property
    def lo(self) -> float:
        return self.center - self.length / 2

    @property
    def hi(self) -> float:
        return self.center + self.length / 2

    def holds(self, x: float) -> bool:
        return abs(x - self.center) <= self.length / 2

    def covers(self, other: "NumericBand") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


@dataclass(frozen=True)
class OrdinalRange:
    start_rank: int
    end_rank: int

    def __post_init__(self) -> None:
        if self.start_rank > self.end_rank:
            raise SchemaError(
                f"start rank {self.start_rank} exceeds end rank {self.end_rank}"
            )

    def holds(self, rank: int) -> bool:
        return self.start_rank <= rank <= self.end_rank

    def covers(self, other: "OrdinalRange") -> bool:
        return self.start_rank <= other.start_rank and other.end_rank <= self.end_rank


@dataclass(frozen=True)
class NominalSet:
    values: frozenset[str]

    def __post_init__(self) -> None:
        if not self.values:
            raise SchemaError("a nominal constraint needs a non-empty value set")

    def holds(self, value: str) -> bool:
        return value in self.values

    def covers(self, other: "NominalSet") -> bool:
        return other.values <= self.values


AttributeConstraint = Union[NumericBand, OrdinalRange, NominalSet]

_CONSTRAINT_KINDS = {
    Scale.NOMINAL: NominalSet,
    Scale.ORDINAL: OrdinalRange,
    Scale.INTERVAL: NumericBand,
    Scale.RATIO: NumericBand,
    Scale.ABSOLUTE: NumericBand,
    Scale.CYCLICAL: NumericBand,
}


@dataclass(frozen=True)
class HyperBlock:
    """Per-attribute constraints plus an optional class label."""

    constraints: dict[str, AttributeConstraint]
    label: Optional[str] = None

    def validate_against(self, ds: Dataset) -> None:
        for name, c in self.constraints.items():
            attr = ds.attribute(name)
            expected = _CONSTRAINT_KINDS[attr.mtype.kind]
            if not isinstance(c, expected):
                raise SchemaError(
                    f"constraint {type(c).__name__} does not match "
                    f"{attr.mtype.kind.value} attribute {name!r}"
                )

    def covers(self, other: "HyperBlock") -> bool:
        """True when this block's region includes the other's (constraint-wise)."""
        for name, c in self.constraints.items():
            oc = other.constraints.get(name)
            if oc is None:
                # The other block is unconstrained here while we are not.
                return False
            if type(c) is not type(oc) or not c.covers(oc):  # type: ignore[arg-type]
                return False
        return True


@dataclass(frozen=True)
class PurityStats:
    total: int
    per_class: dict[str, int]
    dominant_class: Optional[str]
    purity: float


def _holds(c: AttributeConstraint, v: Value) -> bool:
    if v is MISSING:
        # A constraint asserts a known property; missing never satisfies it.
        return False
    if isinstance(c, NumericBand):
        if not isinstance(v, float):
            raise SchemaError(f"numeric band tested against non-numeric value {v!r}")
        return c.holds(v)
    if isinstance(c, OrdinalRange):
        if not isinstance(v, Level):
            raise SchemaError(f"ordinal range tested against non-ordinal value {v!r}")
        return c.holds(v.rank)
    if not isinstance(v, str):
        raise SchemaError(f"nominal set tested against non-nominal value {v!r}")
    return c.holds(v)


def contains(hb: HyperBlock, ds: Dataset, row: tuple[Value, ...]) -> bool:
    """True iff every constraint of the block holds on the row."""
    hb.validate_against(ds)
    for name, c in hb.constraints.items():
        if not _holds(c, row[ds.attr_index(name)]):
            return False
    return True


def members(hb: HyperBlock, ds: Dataset) -> tuple[int, ...]:
    """Indices of the dataset rows inside the block."""
    hb.validate_against(ds)
    idx = {name: ds.attr_index(name) for name in hb.constraints}
    out = []
    for r, row in enumerate(ds.rows):
        if all(_holds(c, row[idx[name]]) for name, c in hb.constraints.items()):
            out.append(r)
    return tuple(out)


def purity(hb: HyperBlock, ds: Dataset) -> PurityStats:
    """Class statistics of the rows the block contains."""
    targets = tuple(value_symbol(v) for v in ds.target_column())
    counts: dict[str, int] = {}
    for r in members(hb, ds):
        counts[targets[r]] = counts.get(targets[r], 0) + 1
    total = sum(counts.values())
    if total == 0:
        return PurityStats(total=0, per_class={}, dominant_class=None, purity=0.0)
    dominant = max(counts, key=lambda c: counts[c])
    return PurityStats(
        total=total,
        per_class=counts,
        dominant_class=dominant,
        purity=counts[dominant] / total,
    )


# --- Pure-block discovery ---------------------------------------------------


def _seed_block(ds: Dataset, row: tuple[Value, ...], label: str) -> HyperBlock:
    """Degenerate block around one row; missing attributes stay unconstrained."""
    constraints: dict[str, AttributeConstraint] = {}
    for attr, v in zip(ds.attributes, row):
        if attr.name == ds.target_attribute.name or v is MISSING:
            continue
        kind = attr.mtype.kind
        if kind is Scale.NOMINAL:
            constraints[attr.name] = NominalSet(frozenset({v}))  # type: ignore[arg-type]
        elif kind is Scale.ORDINAL:
            assert isinstance(v, Level)
            constraints[attr.name] = OrdinalRange(v.rank, v.rank)
        else:
            assert isinstance(v, float)
            constraints[attr.name] = NumericBand(center=v, length=0.0)
    return HyperBlock(constraints=constraints, label=label)


def _widen_steps(
    ds: Dataset, attr: Attribute, c: AttributeConstraint
) -> list[AttributeConstraint]:
    """Candidate one-step widenings of a constraint, nearest first."""
    name = attr.name
    if isinstance(c, NominalSet):
        seen: dict[str, None] = {}
        for v in ds.column(name):
            if v is not MISSING and v not in c.values:
                seen.setdefault(v, None)  # type: ignore[arg-type]
        return [NominalSet(c.values | {v}) for v in seen]
    if isinstance(c, OrdinalRange):
        ranks = sorted(
            {v.rank for v in ds.column(name) if isinstance(v, Level)}
        )
        out: list[AttributeConstraint] = []
        below = [r for r in ranks if r < c.start_rank]
        above = [r for r in ranks if r > c.end_rank]
        if below:
            out.append(OrdinalRange(below[-1], c.end_rank))
        if above:
            out.append(OrdinalRange(c.start_rank, above[0]))
        return out
    values = sorted({v for v in ds.column(name) if isinstance(v, float)})
    out = []
    below = [x for x in values if x < c.lo]
    above = [x for x in values if x > c.hi]
    # Widen to the next observed value on either side (data-driven grid).
    if below:
        lo, hi = below[-1], c.hi
        out.append(NumericBand(center=(lo + hi) / 2, length=hi - lo))
    if above:
        lo, hi = c.lo, above[0]
        out.append(NumericBand(center=(lo + hi) / 2, length=hi - lo))
    return out


def discover_pure_hbs(ds: Dataset) -> tuple[HyperBlock, ...]:
    """Greedy discovery of pure hyperblocks covering every non-conflicted row.

    Each row seeds a degenerate block, which is widened one attribute step at
    a time (round-robin, lower attribute index first) while purity stays 1.0.
    Blocks contained in another returned block are dropped.
    """
    if ds.target_index is None:
        raise SchemaError("pure-block discovery requires a target attribute")
    targets = tuple(value_symbol(v) for v in ds.target_column())

    blocks: list[HyperBlock] = []
    for r, row in enumerate(ds.rows):
        hb = _seed_block(ds, row, label=targets[r])
        stats = purity(hb, ds)
        if stats.total == 0 or stats.purity < 1.0 or stats.dominant_class != targets[r]:
            # The seed row duplicates a row of another class (or is all-missing);
            # no pure block can contain it.
            continue
        changed = True
        while changed:
            changed = False
            for attr in ds.attributes:
                c = hb.constraints.get(attr.name)
                if c is None:
                    continue
                for candidate in _widen_steps(ds, attr, c):
                    widened = HyperBlock(
                        constraints={**hb.constraints, attr.name: candidate},
                        label=hb.label,
                    )
                    if purity(widened, ds).purity == 1.0:
                        hb = widened
                        changed = True
                        break
        blocks.append(hb)

    # Deduplicate by containment, keeping the earlier (wider-first) block.
    kept: list[HyperBlock] = []
    for hb in blocks:
        if any(other.covers(hb) and other.label == hb.label for other in kept):
            continue
        kept = [k for k in kept if not (hb.covers(k) and hb.label == k.label)]
        kept.append(hb)
    return tuple(kept)


def hb_to_rule(hb: HyperBlock, ds: Dataset) -> "_rules.Rule":
    """Express a block as a conjunction of per-attribute atoms.

    The rule's satisfying set equals the block's member set exactly.
    """
    hb.validate_against(ds)
    atoms: list[_rules.Expr] = []
    for name, c in hb.constraints.items():
        if isinstance(c, NumericBand):
            atoms.append(_rules.InInterval(name, c.lo, c.hi))
        elif isinstance(c, OrdinalRange):
            atoms.append(_rules.InRankRange(name, c.start_rank, c.end_rank))
        else:
            atoms.append(_rules.InSet(name, c.values))
    return _rules.Rule(
        antecedent=_rules.And(tuple(atoms)),
        consequent=hb.label if hb.label is not None else "",
    )


# --- Serialization (rules/report JSON) --------------------------------------


def hb_to_json(hb: HyperBlock) -> dict:
    constraints = []
    for name in sorted(hb.constraints):
        c = hb.constraints[name]
        if isinstance(c, NumericBand):
            constraints.append(
                {"attr": name, "kind": "numeric", "params": {"center": c.center, "length": c.length}}
            )
        elif isinstance(c, OrdinalRange):
            constraints.append(
                {"attr": name, "kind": "ordinal", "params": {"start": c.start_rank, "end": c.end_rank}}
            )
        else:
            constraints.append(
                {"attr": name, "kind": "nominal", "params": {"values": sorted(c.values)}}
            )
    out: dict = {"constraints": constraints}
    if hb.label is not None:
        out["label"] = hb.label
    return out


def hb_from_json(obj: dict) -> HyperBlock:
    constraints: dict[str, AttributeConstraint] = {}
    for item in obj.get("constraints", []):
        kind = item.get("kind")
        params = item.get("params", {})
        if kind == "numeric":
            c: AttributeConstraint = NumericBand(float(params["center"]), float(params["length"]))
        elif kind == "ordinal":
            c = OrdinalRange(int(params["start"]), int(params["end"]))
        elif kind == "nominal":
            c = NominalSet(frozenset(params["values"]))
        else:
            raise HetvizError(f"unknown constraint kind {kind!r}")
        constraints[item["attr"]] = c
    return HyperBlock(constraints=constraints, label=obj.get("label"))
