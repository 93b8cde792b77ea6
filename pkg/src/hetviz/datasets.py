"""Deterministic stand-in generators for the UCI-shaped benchmark files.

The real UCI files (mushroom ``agaricus-lepiota.data``, census-income
``adult.data`` + ``adult.test``) are not redistributable with this package
and may be absent from the environment. These generators produce files with
the same schema, value alphabets, missing-value convention, and row counts,
so the ingest and layout paths can be exercised at full scale. Drop the
real files into ``data/`` and the tests will prefer them.
"""

from __future__ import annotations

import random
from pathlib import Path

MUSHROOM_ROWS = 8124
CENSUS_ROWS = 48842

MUSHROOM_HEADER = (
    "class",
    "cap-shape",
    "cap-surface",
    "cap-color",
    "bruises",
    "odor",
    "gill-attachment",
    "gill-spacing",
    "gill-size",
    "gill-color",
    "stalk-shape",
    "stalk-root",
    "stalk-surface-above-ring",
    "stalk-surface-below-ring",
    "stalk-color-above-ring",
    "stalk-color-below-ring",
    "veil-type",
    "veil-color",
    "ring-number",
    "ring-type",
    "spore-print-color",
    "population",
    "habitat",
)

_ODORS = ("n", "f", "s", "y", "a", "l", "p", "c", "m")
_ODOR_WEIGHTS = (34, 22, 6, 6, 5, 5, 3, 2, 2)
_EDIBLE_ODORS = {"n", "a", "l"}


def _weighted(rng: random.Random, values: tuple[str, ...], weights: tuple[int, ...]) -> str:
    return rng.choices(values, weights=weights, k=1)[0]


def mushroom_rows(seed: int = 7) -> list[tuple[str, ...]]:
    """Rows in the agaricus-lepiota column layout (class first, 22 attributes)."""
    rng = random.Random(seed)
    rows = []
    for _ in range(MUSHROOM_ROWS):
        odor = _weighted(rng, _ODORS, _ODOR_WEIGHTS)
        if odor in _EDIBLE_ODORS:
            cls = "e" if rng.random() < 0.96 else "p"
        else:
            cls = "p" if rng.random() < 0.97 else "e"
        gill_size = (
            _weighted(rng, ("b", "n"), (80, 20))
            if cls == "e"
            else _weighted(rng, ("b", "n"), (45, 55))
        )
        spore = (
            _weighted(rng, ("k", "n", "b", "o", "u", "y"), (40, 38, 6, 6, 5, 5))
            if cls == "e"
            else _weighted(rng, ("h", "w", "k", "n", "r"), (40, 30, 12, 12, 6))
        )
        ring_type = (
            _weighted(rng, ("p", "e", "f"), (60, 30, 10))
            if cls == "e"
            else _weighted(rng, ("p", "e", "l", "n"), (30, 30, 30, 10))
        )
        stalk_root = _weighted(rng, ("b", "e", "c", "r", "?"), (38, 22, 6, 4, 30))
        rows.append(
            (
                cls,
                _weighted(rng, ("x", "f", "k", "b", "s", "c"), (45, 39, 10, 5, 1, 1)),
                _weighted(rng, ("y", "s", "f", "g"), (40, 32, 28, 1)),
                _weighted(
                    rng,
                    ("n", "g", "e", "y", "w", "b", "p", "c", "u", "r"),
                    (28, 23, 18, 13, 13, 2, 1, 1, 1, 1),
                ),
                "t" if rng.random() < (0.6 if cls == "e" else 0.35) else "f",
                odor,
                _weighted(rng, ("f", "a"), (97, 3)),
                _weighted(rng, ("c", "w", "d"), (84, 15, 1)),
                gill_size,
                _weighted(
                    rng,
                    ("b", "p", "w", "n", "g", "h", "u", "k", "e", "y", "o", "r"),
                    (21, 18, 15, 13, 9, 9, 6, 5, 1, 1, 1, 1),
                ),
                _weighted(rng, ("t", "e"), (57, 43)),
                stalk_root,
                _weighted(rng, ("s", "k", "f", "y"), (64, 28, 7, 1)),
                _weighted(rng, ("s", "k", "f", "y"), (60, 28, 7, 5)),
                _weighted(rng, ("w", "p", "g", "n", "b", "o"), (55, 23, 7, 6, 5, 4)),
                _weighted(rng, ("w", "p", "g", "n", "b", "o"), (54, 23, 7, 6, 5, 5)),
                "p",  # veil-type is constant in the UCI file
                _weighted(rng, ("w", "n", "o", "y"), (97, 1, 1, 1)),
                _weighted(rng, ("o", "t", "n"), (92, 7, 1)),
                ring_type,
                spore,
                _weighted(rng, ("v", "y", "s", "n", "a", "c"), (49, 21, 15, 5, 5, 5)),
                _weighted(rng, ("d", "g", "p", "l", "u", "m", "w"), (39, 26, 14, 10, 5, 4, 2)),
            )
        )
    return rows


def write_mushroom_csv(path: Path, seed: int = 7, header: bool = True) -> Path:
    lines = []
    if header:
        lines.append(",".join(MUSHROOM_HEADER))
    lines.extend(",".join(row) for row in mushroom_rows(seed))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


CENSUS_HEADER = (
    "age",
    "workclass",
    "fnlwgt",
    "education",
    "education-num",
    "marital-status",
    "occupation",
    "relationship",
    "race",
    "sex",
    "capital-gain",
    "capital-loss",
    "hours-per-week",
    "native-country",
    "class",
)

_WORKCLASS = ("Private", "Self-emp-not-inc", "Local-gov", "State-gov", "Self-emp-inc", "Federal-gov", "Without-pay", "?")
_EDUCATION = (
    ("HS-grad", 9), ("Some-college", 10), ("Bachelors", 13), ("Masters", 14),
    ("Assoc-voc", 11), ("11th", 7), ("Assoc-acdm", 12), ("10th", 6),
    ("7th-8th", 4), ("Prof-school", 15), ("9th", 5), ("12th", 8),
    ("Doctorate", 16), ("5th-6th", 3), ("1st-4th", 2), ("Preschool", 1),
)
_MARITAL = ("Married-civ-spouse", "Never-married", "Divorced", "Separated", "Widowed", "Married-spouse-absent")
_OCCUP = (
    "Prof-specialty", "Craft-repair", "Exec-managerial", "Adm-clerical", "Sales",
    "Other-service", "Machine-op-inspct", "Transport-moving", "Handlers-cleaners",
    "Farming-fishing", "Tech-support", "Protective-serv", "Priv-house-serv", "?",
)
_RELATION = ("Husband", "Not-in-family", "Own-child", "Unmarried", "Wife", "Other-relative")
_RACE = ("White", "Black", "Asian-Pac-Islander", "Amer-Indian-Eskimo", "Other")
_COUNTRY = ("United-States", "Mexico", "Philippines", "Germany", "Canada", "India", "England", "Cuba", "?")


def census_rows(seed: int = 11) -> list[tuple[str, ...]]:
    """Rows in the adult.data column layout (14 attributes + income class)."""
    rng = random.Random(seed)
    rows = []
    for _ in range(CENSUS_ROWS):
        age = rng.randint(17, 90)
        education, edu_num = rng.choices(_EDUCATION, weights=(32, 22, 16, 5, 4, 4, 3, 3, 2, 2, 2, 1, 1, 1, 1, 1), k=1)[0]
        marital = _weighted(rng, _MARITAL, (46, 33, 14, 3, 3, 1))
        hours = min(99, max(1, int(rng.gauss(40, 12))))
        rich_score = (
            0.25 * (edu_num >= 13)
            + 0.25 * (marital == "Married-civ-spouse")
            + 0.15 * (35 <= age <= 60)
            + 0.1 * (hours > 42)
        )
        cls = ">50K" if rng.random() < 0.05 + rich_score else "<=50K"
        gain = rng.choice((0, 0, 0, 0, 0, 0, 0, 0, 2174, 7688, 15024)) if cls == ">50K" else 0
        rows.append(
            (
                str(age),
                _weighted(rng, _WORKCLASS, (69, 8, 6, 4, 3, 3, 1, 6)),
                str(rng.randint(12285, 1484705)),
                education,
                str(edu_num),
                marital,
                _weighted(rng, _OCCUP, (13, 13, 13, 12, 11, 10, 6, 5, 4, 3, 3, 2, 1, 4)),
                _weighted(rng, _RELATION, (40, 26, 15, 10, 5, 4)),
                _weighted(rng, _RACE, (85, 10, 3, 1, 1)),
                _weighted(rng, ("Male", "Female"), (67, 33)),
                str(gain),
                str(rng.choice((0, 0, 0, 0, 0, 0, 0, 0, 0, 1902)) if cls == ">50K" else 0),
                str(hours),
                _weighted(rng, _COUNTRY, (90, 2, 1, 1, 1, 1, 1, 1, 2)),
                cls,
            )
        )
    return rows


def write_census_csv(path: Path, seed: int = 11, header: bool = True) -> Path:
    lines = []
    if header:
        lines.append(",".join(CENSUS_HEADER))
    lines.extend(",".join(row) for row in census_rows(seed))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
