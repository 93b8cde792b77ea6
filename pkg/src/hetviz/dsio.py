"""JSON serialization of typed datasets (the .ds file format)."""

from __future__ import annotations

import json
from typing import Union

from .core import (
    Attribute,
    Dataset,
    HetvizError,
    Level,
    MISSING,
    MeasurementType,
    Scale,
    Value,
)


class DatasetFormatError(HetvizError):
    pass


def _value_to_json(v: Value) -> object:
    if v is MISSING:
        return None
    if isinstance(v, Level):
        return {"level": v.label, "rank": v.rank}
    return v


def _value_from_json(obj: object) -> Value:
    if obj is None:
        return MISSING
    if isinstance(obj, dict):
        return Level(str(obj["level"]), int(obj["rank"]))
    if isinstance(obj, bool):
        raise DatasetFormatError(f"unexpected boolean value {obj!r}")
    if isinstance(obj, (int, float)):
        return float(obj)
    if isinstance(obj, str):
        return obj
    raise DatasetFormatError(f"unexpected value {obj!r}")


def _attr_to_json(a: Attribute) -> dict:
    out: dict = {"name": a.name, "mtype": a.mtype.kind.value}
    if a.mtype.period is not None:
        out["period"] = a.mtype.period
    if a.declared_order is not None:
        out["order"] = list(a.declared_order)
    if a.modality:
        out["modality"] = a.modality
    if a.codes:
        out["codes"] = {k: a.codes[k] for k in sorted(a.codes)}
    return out


def _attr_from_json(obj: dict) -> Attribute:
    try:
        kind = Scale(obj["mtype"])
    except (KeyError, ValueError):
        raise DatasetFormatError(
            f"attribute {obj.get('name', '?')!r}: bad or missing mtype"
        ) from None
    mtype = (
        MeasurementType(kind, float(obj["period"])) if "period" in obj else MeasurementType(kind)
    )
    return Attribute(
        name=str(obj["name"]),
        mtype=mtype,
        declared_order=tuple(obj["order"]) if "order" in obj else None,
        modality=str(obj.get("modality", "")),
        codes={k: float(v) for k, v in obj["codes"].items()} if "codes" in obj else None,
    )


def dataset_to_json(ds: Dataset) -> dict:
    return {
        "attributes": [_attr_to_json(a) for a in ds.attributes],
        "rows": [[_value_to_json(v) for v in row] for row in ds.rows],
        "target_index": ds.target_index,
    }


def dataset_from_json(obj: dict) -> Dataset:
    if not isinstance(obj, dict) or "attributes" not in obj:
        raise DatasetFormatError("not a dataset document")
    return Dataset(
        attributes=tuple(_attr_from_json(a) for a in obj["attributes"]),
        rows=tuple(
            tuple(_value_from_json(v) for v in row) for row in obj.get("rows", [])
        ),
        target_index=obj.get("target_index"),
    )


def save_dataset(ds: Dataset) -> bytes:
    return json.dumps(dataset_to_json(ds), ensure_ascii=False).encode("utf-8")


def load_dataset(data: bytes) -> Dataset:
    try:
        return dataset_from_json(json.loads(data.decode("utf-8")))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DatasetFormatError(f"malformed dataset file: {e}") from None
