"""Pure frame-to-frame transformations: project, group, shift, concat, sort, merge.

Every function returns a new frame and leaves its input untouched. Column
value lists are shared between input and output whenever the rows survive
unchanged; the sharing is invisible because frames are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import EmptySuffix, NameCollision, UnknownAttribute
from .frame import (
    AttrValue,
    Column,
    ColumnType,
    Dataframe,
    render_value,
    sort_key,
    sval,
)

ValueAccessor = Callable[[str], AttrValue]


@dataclass(frozen=True)
class RowPredicate:
    """Row filter over a declared attribute set.

    ``eval`` receives the row's index entry, the declared attribute set, and
    an accessor that exposes only the declared attributes; it must be
    deterministic.
    """

    attrs: frozenset[str]
    eval: Callable[[int, frozenset[str], ValueAccessor], bool]


def _take(df: Dataframe, positions: list[int]) -> Dataframe:
    """New frame keeping the given row positions, in the given order."""
    index = df.index
    new_index = [index[p] for p in positions]
    new_columns: dict[str, Column] = {}
    for name in df.column_names:
        col = df.column(name)
        values = col.values
        new_columns[name] = Column(col.ctype, [values[p] for p in positions])
    return Dataframe._unchecked(new_index, new_columns, df.case_column, df.activity_column)


def proj(df: Dataframe, pred: RowPredicate) -> Dataframe:
    """Keep exactly the rows the predicate selects; order and index preserved."""
    visible: dict[str, list[AttrValue]] = {}
    for attr in pred.attrs:
        visible[attr] = df.column(attr).values

    current = 0

    def accessor(name: str) -> AttrValue:
        values = visible.get(name)
        if values is None:
            raise UnknownAttribute(f"predicate may only inspect {sorted(pred.attrs)}, not {name!r}")
        return values[current]

    evaluate = pred.eval
    attrs = pred.attrs
    index = df.index
    keep: list[int] = []
    for current in range(len(index)):
        if evaluate(index[current], attrs, accessor):
            keep.append(current)
    if len(keep) == len(index):
        return df
    return _take(df, keep)


def eq_proj(df: Dataframe, attr: str, allowed: Iterable[AttrValue]) -> Dataframe:
    """Membership specialization of projection: keep rows whose value is allowed."""
    values = df.column(attr).values
    allowed_set = allowed if isinstance(allowed, (set, frozenset)) else set(allowed)
    keep = [p for p, v in enumerate(values) if v in allowed_set]
    if len(keep) == len(values):
        return df
    return _take(df, keep)


def group(df: Dataframe, attr: str) -> list[Dataframe]:
    """Partition by a column's distinct values, in first-occurrence order.

    The resulting frames are pairwise disjoint in index entries and together
    cover every row exactly once.
    """
    values = df.column(attr).values
    buckets: dict[AttrValue, list[int]] = {}
    for p, v in enumerate(values):
        bucket = buckets.get(v)
        if bucket is None:
            buckets[v] = [p]
        else:
            bucket.append(p)
    return [_take(df, positions) for positions in buckets.values()]


def shift(df: Dataframe) -> Dataframe:
    """Decrement every index entry by one; values and row order unchanged."""
    new_index = [i - 1 for i in df.index]
    columns = {name: df.column(name) for name in df.column_names}
    return Dataframe._unchecked(new_index, columns, df.case_column, df.activity_column)


def concat(left: Dataframe, right: Dataframe, suffix: str) -> Dataframe:
    """Pair rows of two frames that share an index entry.

    The result keeps the intersection of the index sets, ordered like the
    left frame; right columns are renamed with the suffix. Case and activity
    designation follow the left frame.
    """
    if suffix == "":
        raise EmptySuffix("concat suffix must be non-empty")
    right_names = right.column_names
    left_names = set(left.column_names)
    renamed = [name + suffix for name in right_names]
    collisions = left_names.intersection(renamed)
    if collisions:
        raise NameCollision(f"suffixed columns collide with left frame: {sorted(collisions)}")

    right_pos = {entry: p for p, entry in enumerate(right.index)}
    left_keep: list[int] = []
    right_keep: list[int] = []
    for p, entry in enumerate(left.index):
        rp = right_pos.get(entry)
        if rp is not None:
            left_keep.append(p)
            right_keep.append(rp)

    new_index = [left.index[p] for p in left_keep]
    new_columns: dict[str, Column] = {}
    for name in left.column_names:
        col = left.column(name)
        values = col.values
        new_columns[name] = Column(col.ctype, [values[p] for p in left_keep])
    for name, new_name in zip(right_names, renamed):
        col = right.column(name)
        values = col.values
        new_columns[new_name] = Column(col.ctype, [values[p] for p in right_keep])
    return Dataframe._unchecked(new_index, new_columns, left.case_column, left.activity_column)


def sort(df: Dataframe, attr: str) -> Dataframe:
    """Stable sort by one column under the total value order.

    Missing sorts after every proper value; equal keys keep their original
    relative order; index entries travel with their rows.
    """
    values = df.column(attr).values
    order = sorted(range(len(values)), key=lambda p: sort_key(values[p]))
    if order == list(range(len(values))):
        return df
    return _take(df, order)


def mergstrv(df: Dataframe, new_attr: str, a1: str, a2: str, sep: str) -> Dataframe:
    """Add a text column combining two columns' rendered values around a separator."""
    if df.has_column(new_attr):
        raise NameCollision(f"column {new_attr!r} already exists")
    left_values = df.column(a1).values
    right_values = df.column(a2).values
    merged = [
        sval(render_value(v1) + sep + render_value(v2))
        for v1, v2 in zip(left_values, right_values)
    ]
    new_columns = {name: df.column(name) for name in df.column_names}
    new_columns[new_attr] = Column(ColumnType.STR, merged)
    return Dataframe._unchecked(list(df.index), new_columns, df.case_column, df.activity_column)
