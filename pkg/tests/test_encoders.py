import math
import random
from collections import Counter

import pytest

from hetviz.core import (
    Attribute,
    Dataset,
    HetvizError,
    Level,
    MISSING,
    NOMINAL,
    ORDINAL,
    RATIO,
    Scale,
    TypePermissionError,
)
from hetviz.encoders import (
    DEFAULT_WAVELENGTH_PALETTE,
    EncodingResult,
    frequency_encode,
    hash_encode,
    james_stein_encode,
    label_encode,
    mean_target_encode,
    one_hot,
    ordinal_encode,
    probability_ratio_encode,
    target_stats,
    wavelength_color_encode,
)
from hetviz.ingest import Interval, IntervalGroups

from conftest import make_random_discrete_dataset


def small_ds() -> Dataset:
    """color/class toy set with known counts: r->(1:2, 0:1), g->(1:0, 0:2), b->(1:1, 0:0)."""
    attrs = (Attribute("color", NOMINAL), Attribute("class", NOMINAL))
    rows = (
        ("r", "1"),
        ("g", "0"),
        ("r", "1"),
        ("b", "1"),
        ("g", "0"),
        ("r", "0"),
    )
    return Dataset(attributes=attrs, rows=rows, target_index=1)


class TestOneHot:
    def test_columns_and_codes(self):
        res = one_hot(small_ds(), "color")
        assert set(res.columns) == {"color=r", "color=g", "color=b"}
        assert res.columns["color=r"] == (1.0, 0.0, 1.0, 0.0, 0.0, 1.0)

    def test_row_sums_one(self):
        res = one_hot(small_ds(), "color")
        for i in range(6):
            assert sum(col[i] for col in res.columns.values()) == 1.0

    def test_hamming_distance_two(self):
        res = one_hot(small_ds(), "color")
        vecs = list(zip(*[res.columns[c] for c in sorted(res.columns)]))
        for a in vecs:
            for b in vecs:
                d = sum(x != y for x, y in zip(a, b))
                assert d in (0, 2)

    def test_missing_gets_own_column(self):
        ds = Dataset(
            attributes=(Attribute("a", NOMINAL),),
            rows=(("x",), (MISSING,)),
        )
        res = one_hot(ds, "a")
        assert "a=?" in res.columns
        assert res.columns["a=?"] == (0.0, 1.0)

    def test_numeric_attribute_rejected(self):
        ds = Dataset(attributes=(Attribute("x", RATIO),), rows=((1.0,), (2.0,)))
        with pytest.raises(TypePermissionError):
            one_hot(ds, "x")


class TestLabelAndOrdinal:
    def test_label_first_appearance(self):
        res = label_encode(small_ds(), "color")
        assert res.code_map == {"r": 1.0, "g": 2.0, "b": 3.0}
        assert res.columns["color"] == (1.0, 2.0, 1.0, 3.0, 2.0, 1.0)

    def test_ordinal_follows_declared_order(self):
        order = ("low", "mid", "high")
        attr = Attribute("sz", ORDINAL, declared_order=order)
        rows = tuple((Level(v, order.index(v)),) for v in ("high", "low", "mid"))
        ds = Dataset(attributes=(attr,), rows=rows)
        res = ordinal_encode(ds, "sz")
        assert res.code_map == {"low": 1.0, "mid": 2.0, "high": 3.0}
        assert res.columns["sz"] == (3.0, 1.0, 2.0)

    def test_ordinal_codes_monotone_in_rank(self):
        order = tuple("abcdef")
        attr = Attribute("g", ORDINAL, declared_order=order)
        rows = tuple((Level(v, order.index(v)),) for v in "fcaebd")
        res = ordinal_encode(Dataset(attributes=(attr,), rows=rows), "g")
        codes = [res.code_map[v] for v in order]
        assert codes == sorted(codes)


def oracle_counts(ds: Dataset, attr: str) -> Counter:
    i = ds.attr_index(attr)
    return Counter(
        ("?" if r[i] is MISSING else (r[i].label if isinstance(r[i], Level) else str(r[i])))
        for r in ds.rows
    )


def oracle_class_counts(ds: Dataset, attr: str, positive: str) -> dict[str, tuple[int, int]]:
    i = ds.attr_index(attr)
    t = ds.target_index
    out: dict[str, list[int]] = {}
    for r in ds.rows:
        if r[i] is MISSING:
            continue
        v = r[i].label if isinstance(r[i], Level) else str(r[i])
        n1, n0 = out.setdefault(v, [0, 0])
        if str(r[t]) == positive:
            out[v][0] += 1
        else:
            out[v][1] += 1
    return {k: (a, b) for k, (a, b) in out.items()}


class TestFrequency:
    def test_known_relative_frequencies(self):
        res = frequency_encode(small_ds(), "color")
        assert res.code_map == {"r": 3 / 6, "g": 2 / 6, "b": 1 / 6}

    def test_collisions_reported_when_counts_tie(self):
        ds = Dataset(
            attributes=(Attribute("a", NOMINAL),),
            rows=(("x",), ("y",)),
        )
        res = frequency_encode(ds, "a")
        assert res.lossy_collisions == (frozenset({"x", "y"}),)

    def test_matches_counting_oracle(self):
        rng = random.Random(42)
        for _ in range(25):
            ds = make_random_discrete_dataset(rng, n_rows=60, n_attrs=3, n_values=5)
            attr = ds.attributes[0].name
            counts = oracle_counts(ds, attr)
            res = frequency_encode(ds, attr)
            for v, code in res.code_map.items():
                assert code == pytest.approx(counts[v] / len(ds.rows))


class TestTargetBased:
    def test_mean_target_known(self):
        res = mean_target_encode(small_ds(), "color", positive="1")
        assert res.code_map["r"] == pytest.approx(2 / 3)
        assert res.code_map["g"] == 0.0
        assert res.code_map["b"] == 1.0

    def test_probability_ratio_known(self):
        # (n1 + s) / (n0 + s) with s = 1
        res = probability_ratio_encode(small_ds(), "color", smoothing=1.0, positive="1")
        assert res.code_map["r"] == pytest.approx(3 / 2)
        assert res.code_map["g"] == pytest.approx(1 / 3)
        assert res.code_map["b"] == pytest.approx(2 / 1)

    def test_probability_ratio_zero_smoothing_division(self):
        with pytest.raises(HetvizError, match="'b'"):
            probability_ratio_encode(small_ds(), "color", smoothing=0.0, positive="1")

    def test_james_stein_shrinks_toward_global_mean(self):
        ds = small_ds()
        global_mean = 0.5
        res = james_stein_encode(ds, "color", shrink=1.0, positive="1")
        raw = mean_target_encode(ds, "color", positive="1")
        for v in ("r", "g", "b"):
            n = oracle_counts(ds, v and "color")[v]
            lam = n / (n + 1.0)
            expect = lam * raw.code_map[v] + (1 - lam) * global_mean
            assert res.code_map[v] == pytest.approx(expect)

    def test_requires_target(self):
        ds = Dataset(attributes=(Attribute("a", NOMINAL),), rows=(("x",),))
        with pytest.raises(HetvizError):
            mean_target_encode(ds, "a")

    def test_target_stats_matches_oracle(self):
        rng = random.Random(7)
        for _ in range(25):
            ds = make_random_discrete_dataset(rng, n_rows=80, n_attrs=2, n_values=4)
            attr = ds.attributes[0].name
            stats = target_stats(ds, attr, positive="c0")
            oracle = oracle_class_counts(ds, attr, "c0")
            for v, (n1, n0) in oracle.items():
                assert stats.totals[v] == n1 + n0
                assert stats.positive_rate[v] == pytest.approx(n1 / (n1 + n0))

    def test_mean_target_matches_oracle(self):
        rng = random.Random(8)
        for _ in range(25):
            ds = make_random_discrete_dataset(rng, n_rows=50, n_attrs=2, n_values=3)
            attr = ds.attributes[0].name
            res = mean_target_encode(ds, attr, positive="c1")
            oracle = oracle_class_counts(ds, attr, "c1")
            for v, (n1, n0) in oracle.items():
                assert res.code_map[v] == pytest.approx(n1 / (n1 + n0))


class TestHash:
    def test_deterministic_per_seed(self):
        ds = small_ds()
        a = hash_encode(ds, "color", dim=8, seed=3)
        b = hash_encode(ds, "color", dim=8, seed=3)
        assert a.columns == b.columns
        c = hash_encode(ds, "color", dim=8, seed=4)
        assert a.columns != c.columns

    def test_single_signed_slot_per_value(self):
        res = hash_encode(small_ds(), "color", dim=16, seed=1)
        for v, vec in res.code_map.items():
            nonzero = [x for x in vec if x != 0.0]
            assert len(vec) == 16
            assert nonzero in ([1.0], [-1.0])

    def test_note_mentions_interpretability_loss(self):
        res = hash_encode(small_ds(), "color", dim=4, seed=0)
        assert "interpret" in res.interpretability_note.lower()

    def test_small_dim_collisions_reported(self):
        ds = Dataset(
            attributes=(Attribute("a", NOMINAL),),
            rows=tuple((f"v{i}",) for i in range(40)),
        )
        res = hash_encode(ds, "a", dim=2, seed=0)
        assert res.lossy_collisions  # 40 values into 2*2 signed slots must collide


class TestWavelength:
    def test_order_follows_lower_bound(self):
        ds = Dataset(
            attributes=(Attribute("c", NOMINAL),),
            rows=(("red",), ("violet",), ("green",)),
        )
        res = wavelength_color_encode(ds, "c")
        assert res.code_map == {"violet": 0.0, "green": 1.0, "red": 2.0}
        assert res.result_mtype.kind == Scale.ORDINAL

    def test_custom_palette(self):
        palette = {"warm": (600.0, 700.0), "cold": (400.0, 500.0)}
        ds = Dataset(
            attributes=(Attribute("c", NOMINAL),),
            rows=(("warm",), ("cold",)),
        )
        res = wavelength_color_encode(ds, "c", palette=palette)
        assert res.code_map == {"cold": 0.0, "warm": 1.0}

    def test_unknown_color_named_in_error(self):
        ds = Dataset(attributes=(Attribute("c", NOMINAL),), rows=(("mauve",),))
        with pytest.raises(HetvizError, match="mauve"):
            wavelength_color_encode(ds, "c")

    def test_default_palette_is_increasing(self):
        bounds = list(DEFAULT_WAVELENGTH_PALETTE.values())
        assert all(lo < hi for lo, hi in bounds)


class TestEncodingResultInvariant:
    def test_non_injective_without_collisions_rejected(self):
        with pytest.raises(HetvizError):
            EncodingResult(columns={}, code_map={"a": 1.0, "b": 1.0})

    def test_injective_with_collisions_rejected(self):
        with pytest.raises(HetvizError):
            EncodingResult(
                columns={},
                code_map={"a": 1.0, "b": 2.0},
                lossy_collisions=(frozenset({"a", "b"}),),
            )
