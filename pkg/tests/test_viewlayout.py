import random

import pytest

from hetviz.core import Attribute, Dataset, MISSING, NOMINAL, RATIO
from hetviz.viewlayout import (
    AxisLayout,
    Bar,
    EdgeBundle,
    JOINED_CLASS,
    LayoutError,
    MISSING_GROUP,
    ViewConfig,
    edge_weights,
    filter_by_purity,
    flip_attribute,
    frequency_layout,
    join_nondominant,
    linguistic_report,
    qualifying_block_count,
    reference_layout,
    relocate_small_blocks,
    sort_axes,
    sort_bars_by_color,
)

from conftest import make_random_discrete_dataset


def two_col_ds(values, classes) -> Dataset:
    attrs = (Attribute("a", NOMINAL), Attribute("class", NOMINAL))
    rows = tuple(zip(values, classes))
    return Dataset(attributes=attrs, rows=rows, target_index=1)


def reference_example_ds() -> Dataset:
    """100 rows: value counts 70/12/10/8 with known class mixes."""
    values = []
    classes = []
    # v_big: 70 rows, 49 of class "1" -> purity 0.70, dominant "1"
    values += ["big"] * 70
    classes += ["1"] * 49 + ["0"] * 21
    # v_a: 12 rows pure "0"
    values += ["a"] * 12
    classes += ["0"] * 12
    # v_b: 10 rows pure "1"
    values += ["b"] * 10
    classes += ["1"] * 10
    # v_c: 8 rows, 6 of "0"
    values += ["c"] * 8
    classes += ["0"] * 6 + ["1"] * 2
    return two_col_ds(values, classes)


class TestFrequencyLayout:
    def test_descending_with_largest_bottom(self):
        ds = two_col_ds(["x"] * 5 + ["y"] * 3 + ["z"] * 2, ["c"] * 10)
        layout = frequency_layout(ds, "a")
        assert [b.value_group for b in layout.bars] == ["x", "y", "z"]
        assert [b.total for b in layout.bars] == [5, 3, 2]
        assert layout.bars[0].height_fraction == 0.5

    def test_equal_frequencies_keep_separate_bars(self):
        ds = two_col_ds(["x", "y", "x", "y"], ["c"] * 4)
        layout = frequency_layout(ds, "a")
        assert [b.value_group for b in layout.bars] == ["x", "y"]
        assert [b.total for b in layout.bars] == [2, 2]

    def test_missing_bar_on_top(self):
        ds = two_col_ds(["x", MISSING, "x", MISSING, MISSING], ["c"] * 5)
        layout = frequency_layout(ds, "a")
        assert layout.bars[-1].value_group == MISSING_GROUP
        assert layout.bars[-1].total == 3

    def test_heights_sum_to_one(self):
        rng = random.Random(3)
        for _ in range(10):
            ds = make_random_discrete_dataset(rng, n_rows=40, n_attrs=1, n_values=6)
            layout = frequency_layout(ds, ds.attributes[0].name)
            assert sum(b.height_fraction for b in layout.bars) == pytest.approx(1.0)
            assert sum(b.total for b in layout.bars) == 40


class TestReferenceLayout:
    def test_reference_example(self):
        layout = reference_layout(reference_example_ds(), "a", "class")
        big = layout.bars[0]
        assert big.value_group == "big"
        assert big.total == 70
        assert big.per_class == {"1": 49, "0": 21}
        assert big.dominant_class == "1"
        assert big.purity == pytest.approx(0.70)
        assert [b.total for b in layout.bars] == [70, 12, 10, 8]

    def test_pure_bars(self):
        layout = reference_layout(reference_example_ds(), "a", "class")
        by_group = {b.value_group: b for b in layout.bars}
        assert by_group["a"].purity == 1.0 and by_group["a"].dominant_class == "0"
        assert by_group["b"].purity == 1.0 and by_group["b"].dominant_class == "1"
        assert by_group["c"].purity == pytest.approx(0.75)

    def test_continuous_reference_rejected(self):
        attrs = (Attribute("a", NOMINAL), Attribute("t", RATIO))
        ds = Dataset(attributes=attrs, rows=(("x", 0.25), ("y", 0.75)))
        with pytest.raises(LayoutError, match="group it"):
            reference_layout(ds, "a", "t")

    def test_counts_conserved(self):
        layout = reference_layout(reference_example_ds(), "a", "class")
        assert sum(b.total for b in layout.bars) == 100
        assert sum(sum(b.per_class.values()) for b in layout.bars) == 100


class TestJoinNondominant:
    def test_merges_minority_into_grey(self):
        layout = reference_layout(reference_example_ds(), "a", "class")
        joined = join_nondominant(layout)
        big = joined.bars[0]
        assert big.per_class == {"1": 49, JOINED_CLASS: 21}
        assert big.total == 70 and big.joined

    def test_pure_bar_has_no_joined_entry(self):
        joined = join_nondominant(reference_layout(reference_example_ds(), "a", "class"))
        by_group = {b.value_group: b for b in joined.bars}
        assert by_group["a"].per_class == {"0": 12}


class TestFilterByPurity:
    def test_residual_preserves_conservation(self):
        layout = reference_layout(reference_example_ds(), "a", "class")
        filtered = filter_by_purity(layout, threshold=0.80, min_size=0.10)
        kept = {b.value_group for b in filtered.bars}
        assert kept == {"a", "b"}
        total = sum(b.total for b in filtered.bars) + sum(b.total for b in filtered.residual)
        assert total == 100

    def test_min_size_filters_small_pure_bars(self):
        layout = reference_layout(reference_example_ds(), "a", "class")
        filtered = filter_by_purity(layout, threshold=0.80, min_size=0.11)
        assert {b.value_group for b in filtered.bars} == {"a"}

    def test_bad_threshold_rejected(self):
        layout = frequency_layout(reference_example_ds(), "a")
        with pytest.raises(LayoutError):
            filter_by_purity(layout, threshold=1.2, min_size=0.0)


class TestRelocateSmall:
    def test_small_bars_move_above(self):
        layout = reference_layout(reference_example_ds(), "a", "class")
        out = relocate_small_blocks(layout, threshold=0.11)
        assert [b.value_group for b in out.bars] == ["big", "a", "b", "c"]
        out2 = relocate_small_blocks(layout, threshold=0.60)
        assert out2.bars[0].value_group == "big"

    def test_multiset_unchanged(self):
        layout = reference_layout(reference_example_ds(), "a", "class")
        out = relocate_small_blocks(layout, threshold=0.5)
        assert sorted(b.value_group for b in out.bars) == sorted(
            b.value_group for b in layout.bars
        )


class TestFlip:
    def _normalized_ds(self, values) -> Dataset:
        return Dataset(
            attributes=(Attribute("x", RATIO),), rows=tuple((v,) for v in values)
        )

    def test_mirror(self):
        ds = self._normalized_ds([0.0, 0.25, 1.0])
        assert flip_attribute(ds, "x") == (1.0, 0.75, 0.0)

    def test_involution(self):
        rng = random.Random(5)
        values = [rng.random() for _ in range(200)]
        ds = self._normalized_ds(values)
        once = flip_attribute(ds, "x")
        twice = flip_attribute(self._normalized_ds(list(once)), "x")
        for a, b in zip(values, twice):
            assert abs(a - b) <= 1e-12

    def test_missing_passes_through(self):
        ds = self._normalized_ds([0.5])
        ds = Dataset(attributes=ds.attributes, rows=((0.5,), (MISSING,)))
        assert flip_attribute(ds, "x") == (0.5, MISSING)

    def test_unnormalized_rejected(self):
        with pytest.raises(LayoutError, match="normalize"):
            flip_attribute(self._normalized_ds([0.5, 2.0]), "x")


class TestSorting:
    def _layout(self, attr, purities_sizes):
        bars = tuple(
            Bar(
                value_group=f"g{i}",
                total=int(s * 100),
                per_class={},
                dominant_class="1",
                purity=p,
                height_fraction=s,
            )
            for i, (p, s) in enumerate(purities_sizes)
        )
        return AxisLayout(attribute=attr, bars=bars)

    def test_axes_ordered_by_qualifying_count(self):
        a = self._layout("a", [(1.0, 0.5), (0.9, 0.3), (0.5, 0.2)])
        b = self._layout("b", [(1.0, 0.5), (0.5, 0.5)])
        c = self._layout("c", [(0.5, 0.5)])
        assert sort_axes([c, b, a], threshold=0.8, min_size=0.1) == ("a", "b", "c")

    def test_tie_breaks_by_mean_purity_then_stable(self):
        a = self._layout("a", [(1.0, 0.5), (0.2, 0.5)])
        b = self._layout("b", [(1.0, 0.5), (0.9, 0.5)])
        # both have... b has 2 qualifying bars, a has 1
        assert sort_axes([a, b], threshold=0.8, min_size=0.1) == ("b", "a")
        c = self._layout("c", [(1.0, 0.5), (0.1, 0.5)])
        assert sort_axes([a, c], threshold=0.8, min_size=0.1) == ("a", "c")

    def test_qualifying_block_count(self):
        a = self._layout("a", [(1.0, 0.5), (0.9, 0.05), (0.5, 0.4)])
        assert qualifying_block_count(a, threshold=0.8, min_size=0.1) == 1

    def test_color_sort_priority_topmost(self):
        bars = tuple(
            Bar(f"g{i}", 10, {}, cls, 1.0, 0.2)
            for i, cls in enumerate(["x", "y", "x", "z", "y"])
        )
        layout = AxisLayout(attribute="a", bars=bars)
        out = sort_bars_by_color(layout, priority=("x", "y"))
        assert [b.dominant_class for b in out.bars] == ["z", "y", "y", "x", "x"]
        # stability within each class group
        assert [b.value_group for b in out.bars] == ["g3", "g1", "g4", "g0", "g2"]

    def test_color_sort_unknown_class(self):
        layout = AxisLayout(
            attribute="a", bars=(Bar("g", 1, {}, "x", 1.0, 1.0),)
        )
        with pytest.raises(LayoutError, match="bogus"):
            sort_bars_by_color(layout, priority=("bogus",))


class TestEdges:
    def test_counts_match_rows(self):
        attrs = (Attribute("l", NOMINAL), Attribute("r", NOMINAL), Attribute("class", NOMINAL))
        rows = (
            ("x", "p", "1"),
            ("x", "p", "1"),
            ("x", "q", "0"),
            ("y", "p", "1"),
        )
        ds = Dataset(attributes=attrs, rows=rows, target_index=2)
        bundle = edge_weights(ds, "l", "r")
        assert bundle.counts == {
            ("x", "p", "1"): 2,
            ("x", "q", "0"): 1,
            ("y", "p", "1"): 1,
        }
        assert sum(bundle.counts.values()) == len(rows)


class TestLinguisticReport:
    def test_purity_line(self):
        bars = (
            Bar("big", 81, {}, "1", 0.96, 0.81),
            Bar("rest", 19, {}, "0", 0.87, 0.19),
        )
        layout = AxisLayout(attribute="odor", bars=bars)
        lines = linguistic_report([layout], threshold=0.80, min_size=0.10)
        assert "odor, block, 1 has a total frequency of 81" in lines
        assert "odor, block, 2 has a purity of 87" in lines
        assert "odor has a small frequency block." in lines

    def test_rounding_half_up(self):
        bars = (Bar("g", 1, {}, "1", 0.845, 0.30),)
        layout = AxisLayout(attribute="a", bars=bars)
        lines = linguistic_report([layout], threshold=0.80, min_size=0.10)
        assert lines[0] == "a, block, 1 has a purity of 85"

    def test_indices_bottom_to_top(self):
        bars = (
            Bar("low", 50, {}, "1", 0.5, 0.45),
            Bar("up", 50, {}, "1", 0.9, 0.45),
        )
        layout = AxisLayout(attribute="a", bars=bars)
        lines = linguistic_report([layout], threshold=0.80, min_size=0.10)
        assert lines == ["a, block, 2 has a purity of 90"]

    def test_no_statements_when_nothing_qualifies(self):
        bars = (Bar("g", 10, {}, "1", 0.5, 1.0),)
        layout = AxisLayout(attribute="a", bars=bars)
        assert linguistic_report([layout]) == []


class TestViewConfig:
    def test_defaults(self):
        cfg = ViewConfig()
        assert cfg.purity_threshold == 0.80
        assert cfg.min_block_size == 0.10
        assert cfg.small_block_threshold == 0.20

    def test_out_of_range_rejected(self):
        with pytest.raises(LayoutError):
            ViewConfig(purity_threshold=1.5)
