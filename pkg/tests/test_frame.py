"""Core frame construction, access, and footprint semantics."""

from __future__ import annotations

import statistics
import time

import pytest

from eventframe import (
    ColumnType,
    Dataframe,
    DuplicateIndex,
    LengthMismatch,
    MISSING,
    MissingMandatory,
    RowOutOfRange,
    TypeViolation,
    UnknownAttribute,
    fval,
    ival,
    render_value,
    sort_key,
    sval,
    tsval,
)
from eventframe.transforms import sort

from .conftest import frame_from_rows, two_row_frame


class TestAttrValue:
    def test_nan_rejected(self):
        with pytest.raises(TypeViolation):
            fval(float("nan"))

    def test_missing_carries_no_payload(self):
        from eventframe import AttrValue, ValueTag

        with pytest.raises(TypeViolation):
            AttrValue(ValueTag.MISSING, 0)

    def test_int_bounds(self):
        ival(2**63 - 1)
        ival(-(2**63))
        with pytest.raises(TypeViolation):
            ival(2**63)
        with pytest.raises(TypeViolation):
            tsval(-(2**63) - 1)

    def test_equality_and_hash(self):
        assert sval("A") == sval("A")
        assert hash(sval("A")) == hash(sval("A"))
        assert ival(5) != fval(5.0)
        assert MISSING.is_missing()

    def test_cross_type_sort_order(self):
        ordering = [ival(-3), fval(2.5), ival(7), tsval(0), sval(""), sval("a"), MISSING]
        keys = [sort_key(v) for v in ordering]
        assert keys == sorted(keys)
        # int/float interleave numerically; int wins exact ties
        assert sort_key(fval(3.0)) < sort_key(ival(5))
        assert sort_key(ival(5)) < sort_key(fval(5.0))

    def test_render(self):
        assert render_value(sval("A")) == "A"
        assert render_value(ival(5)) == "5"
        assert render_value(fval(2.5)) == "2.5"
        assert render_value(tsval(1546398245006)) == "2019-01-02T03:04:05.006Z"
        assert render_value(MISSING) == "ε"


class TestBuild:
    def test_minimal_two_rows(self):
        df = two_row_frame()
        assert df.row_count == 2
        assert df.column_names == ["case", "act"]

    def test_duplicate_index(self):
        with pytest.raises(DuplicateIndex):
            Dataframe.build(
                [0, 0],
                {
                    "case": (ColumnType.STR, [sval("c1"), sval("c1")]),
                    "act": (ColumnType.STR, [sval("A"), sval("B")]),
                },
                "case",
                "act",
            )

    def test_missing_in_mandatory_column(self):
        with pytest.raises(MissingMandatory):
            Dataframe.build(
                [0, 1],
                {
                    "case": (ColumnType.STR, [sval("c1"), MISSING]),
                    "act": (ColumnType.STR, [sval("A"), sval("B")]),
                },
                "case",
                "act",
            )

    def test_absent_mandatory_column(self):
        with pytest.raises(MissingMandatory):
            Dataframe.build(
                [0],
                {"case": (ColumnType.STR, [sval("c1")])},
                "case",
                "act",
            )

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            Dataframe.build(
                [0, 1],
                {
                    "case": (ColumnType.STR, [sval("c1"), sval("c1")]),
                    "act": (ColumnType.STR, [sval("A")]),
                },
                "case",
                "act",
            )

    def test_type_violation_in_typed_column(self):
        with pytest.raises(TypeViolation):
            Dataframe.build(
                [0],
                {
                    "case": (ColumnType.STR, [sval("c1")]),
                    "act": (ColumnType.STR, [sval("A")]),
                    "n": (ColumnType.INT, [sval("not an int")]),
                },
                "case",
                "act",
            )

    def test_object_column_admits_mixed_tags(self):
        df = Dataframe.build(
            [0, 1],
            {
                "case": (ColumnType.STR, [sval("c1"), sval("c1")]),
                "act": (ColumnType.STR, [sval("A"), sval("B")]),
                "x": (ColumnType.OBJECT, [ival(1), sval("s")]),
            },
            "case",
            "act",
        )
        assert df.column_type("x") is ColumnType.OBJECT

    def test_build_round_trips_every_value(self, rng):
        values = [ival(5), MISSING, ival(-2)]
        df = Dataframe.build(
            [7, 3, 9],
            {
                "case": (ColumnType.STR, [sval("c")] * 3),
                "act": (ColumnType.STR, [sval("A")] * 3),
                "v": (ColumnType.INT, values),
            },
            "case",
            "act",
        )
        assert [df.value_at(p, "v") for p in range(3)] == values
        assert df.index == [7, 3, 9]


class TestAccess:
    def test_value_at_readback(self):
        df = two_row_frame()
        assert df.value_at(1, "act") == sval("B")

    def test_value_at_unknown_attribute(self):
        with pytest.raises(UnknownAttribute):
            two_row_frame().value_at(0, "missing_attr")

    def test_value_at_out_of_range(self):
        with pytest.raises(RowOutOfRange):
            two_row_frame().value_at(2, "act")

    def test_value_at_missing_slot(self):
        df = frame_from_rows(
            ["c1", "c1"],
            ["A", "B"],
            extra={"x": (ColumnType.INT, [MISSING, ival(1)])},
        )
        assert df.value_at(0, "x") is MISSING

    def test_column_values_pairs(self):
        df = two_row_frame()
        assert df.column_values("case") == [(0, sval("c1")), (1, sval("c1"))]

    def test_column_values_empty_frame(self):
        df = frame_from_rows([], [])
        assert df.column_values("act") == []

    def test_column_values_after_sort_matches_permuted_pairs(self):
        df = frame_from_rows(
            ["c1", "c2", "c1", "c3"],
            ["D", "B", "C", "A"],
            index=[10, 11, 12, 13],
        )
        before = df.column_values("act")
        permutation = sorted(range(4), key=lambda p: before[p][1].payload)
        expected = [before[p] for p in permutation]
        assert sort(df, "act").column_values("act") == expected

    def test_column_values_length_equals_row_count(self, rng):
        from .conftest import random_frame

        for _ in range(50):
            df = random_frame(rng)
            for name in df.column_names:
                assert len(df.column_values(name)) == df.row_count

    def test_distinct_values(self):
        df = frame_from_rows(["c", "c", "c"], ["A", "B", "A"])
        assert df.distinct_values("act") == {sval("A"), sval("B")}

    def test_distinct_values_constant_column(self):
        df = frame_from_rows(["c"] * 9, ["A"] * 9)
        assert df.distinct_values("act") == {sval("A")}

    def test_distinct_values_count_matches_activity_classes(self, rng):
        df = frame_from_rows(
            [f"c{i}" for i in range(11)],
            [f"A{i}" for i in range(11)],
        )
        assert len(df.distinct_values("act")) == 11

    def test_distinct_subset_relation(self, rng):
        from .conftest import random_frame

        for _ in range(30):
            df = random_frame(rng)
            for name in df.column_names:
                values = [v for _, v in df.column_values(name)]
                distinct = df.distinct_values(name)
                assert distinct == set(values)


class TestFootprint:
    def test_empty_frame_is_constant_only(self):
        from eventframe.frame import COLUMN_OVERHEAD_BYTES, FRAME_OVERHEAD_BYTES

        df = frame_from_rows([], [])
        expected = FRAME_OVERHEAD_BYTES + 2 * COLUMN_OVERHEAD_BYTES + len("case") + len("act")
        assert df.memory_footprint() == expected

    def test_dropping_a_column_shrinks(self):
        df = frame_from_rows(
            ["c1", "c2"],
            ["A", "B"],
            extra={"x": (ColumnType.INT, [ival(1), ival(2)])},
        )
        smaller = frame_from_rows(["c1", "c2"], ["A", "B"])
        assert smaller.memory_footprint() < df.memory_footprint()

    def test_doubling_rows_roughly_doubles(self):
        n = 2000
        cases = [f"c{i % 7}" for i in range(n)]
        acts = ["A"] * n
        extra = {"v": (ColumnType.INT, [ival(i % 100) for i in range(n)])}
        single = frame_from_rows(cases, acts, extra)
        double = frame_from_rows(
            cases + cases,
            acts + acts,
            {"v": (ColumnType.INT, extra["v"][1] + extra["v"][1])},
            index=range(2 * n),
        )
        ratio = double.memory_footprint() / (2 * single.memory_footprint())
        assert abs(ratio - 1.0) < 0.01

    def test_missing_slots_cost_no_payload(self):
        with_missing = frame_from_rows(
            ["c", "c"], ["A", "B"], extra={"x": (ColumnType.INT, [MISSING, MISSING])}
        )
        with_values = frame_from_rows(
            ["c", "c"], ["A", "B"], extra={"x": (ColumnType.INT, [ival(1), ival(2)])}
        )
        assert with_values.memory_footprint() - with_missing.memory_footprint() == 16


def _median_access_ns(df, attr: str, samples: int = 2000) -> float:
    n = df.row_count
    positions = [(i * 2654435761) % n for i in range(samples)]
    timings = []
    for p in positions:
        start = time.perf_counter_ns()
        df.value_at(p, attr)
        timings.append(time.perf_counter_ns() - start)
    return statistics.median(timings)


def test_value_at_latency_flat_in_frame_size():
    small = frame_from_rows(["c"] * 10, ["A"] * 10)
    big_n = 1_000_000
    a_value = sval("A")
    c_value = sval("c")
    big = Dataframe.build(
        range(big_n),
        {
            "case": (ColumnType.STR, [c_value] * big_n),
            "act": (ColumnType.STR, [a_value] * big_n),
        },
        "case",
        "act",
    )
    small_ns = _median_access_ns(small, "act")
    big_ns = _median_access_ns(big, "act")
    assert big_ns < 3 * max(small_ns, 1)
