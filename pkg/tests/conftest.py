import random
from pathlib import Path

import pytest

from hetviz.core import (
    Attribute,
    Dataset,
    Level,
    MISSING,
    MeasurementType,
    NOMINAL,
    ORDINAL,
    RATIO,
    Scale,
)
from hetviz.datasets import mushroom_rows, census_rows, MUSHROOM_HEADER, CENSUS_HEADER
from hetviz.ingest import RawTable, apply_scheme, bulk_assign

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def _real_or_generated(real_name: str, header: tuple[str, ...], generator) -> RawTable:
    """Prefer a real UCI data file dropped into data/, else the schema-faithful
    generated stand-in (same shape, alphabets, and missing convention)."""
    real = DATA_DIR / real_name
    if real.exists():
        from hetviz.ingest import parse_csv

        return parse_csv(real.read_bytes(), has_header=False)
    return RawTable(header=header, cells=tuple(generator()))


@pytest.fixture(scope="session")
def mushroom_raw() -> RawTable:
    return _real_or_generated("agaricus-lepiota.data", MUSHROOM_HEADER, mushroom_rows)


@pytest.fixture(scope="session")
def mushroom_ds(mushroom_raw) -> Dataset:
    raw = mushroom_raw
    if raw.header[0] != "class":  # headerless real file: name the columns
        raw = RawTable(header=MUSHROOM_HEADER, cells=raw.cells, missing_token=raw.missing_token)
    ds = apply_scheme(raw, bulk_assign(raw, Scale.NOMINAL))
    assert ds.target_index == 0
    return ds


@pytest.fixture(scope="session")
def census_raw() -> RawTable:
    real_data = DATA_DIR / "adult.data"
    real_test = DATA_DIR / "adult.test"
    if real_data.exists() and real_test.exists():
        from hetviz.ingest import parse_csv

        text = real_data.read_text() + real_test.read_text()
        lines = [l for l in text.splitlines() if l.strip() and not l.startswith("|")]
        cleaned = "\n".join(l.rstrip(".") for l in lines)
        return parse_csv(cleaned, has_header=False)
    return RawTable(header=CENSUS_HEADER, cells=tuple(census_rows()))


def make_random_discrete_dataset(
    rng: random.Random,
    n_rows: int,
    n_attrs: int,
    n_values: int = 4,
    n_classes: int = 2,
    with_target: bool = True,
) -> Dataset:
    """Random nominal dataset with an optional class target; used as oracle fodder."""
    attrs = [Attribute(name=f"a{i}", mtype=NOMINAL) for i in range(n_attrs)]
    if with_target:
        attrs.append(Attribute(name="class", mtype=NOMINAL))
    rows = []
    for _ in range(n_rows):
        row = [f"v{rng.randrange(n_values)}" for _ in range(n_attrs)]
        if with_target:
            row.append(f"c{rng.randrange(n_classes)}")
        rows.append(tuple(row))
    return Dataset(
        attributes=tuple(attrs),
        rows=tuple(rows),
        target_index=n_attrs if with_target else None,
    )


def make_random_mixed_dataset(
    rng: random.Random, n_rows: int, n_numeric: int, n_ordinal: int, n_nominal: int
) -> Dataset:
    """Random mixed-type dataset with a binary class target."""
    attrs: list[Attribute] = []
    for i in range(n_numeric):
        attrs.append(Attribute(name=f"num{i}", mtype=RATIO))
    order = ("low", "mid", "high", "top")
    for i in range(n_ordinal):
        attrs.append(Attribute(name=f"ord{i}", mtype=ORDINAL, declared_order=order))
    for i in range(n_nominal):
        attrs.append(Attribute(name=f"nom{i}", mtype=NOMINAL))
    attrs.append(Attribute(name="class", mtype=NOMINAL))
    rows = []
    for _ in range(n_rows):
        row: list = []
        for _ in range(n_numeric):
            row.append(float(rng.randrange(8)))
        for _ in range(n_ordinal):
            rank = rng.randrange(len(order))
            row.append(Level(order[rank], rank))
        for _ in range(n_nominal):
            row.append(f"v{rng.randrange(4)}")
        row.append(f"c{rng.randrange(2)}")
        rows.append(tuple(row))
    return Dataset(attributes=tuple(attrs), rows=tuple(rows), target_index=len(attrs) - 1)
