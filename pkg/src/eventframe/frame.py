"""In-memory columnar table with typed columns and explicit missing slots.

The layout is deliberately simple: an ordered mapping from attribute name to
one dense value list per column, plus a row index kept in positional order.
Every transformation elsewhere in the package produces a new frame; a frame is
never mutated after construction and may be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum, IntEnum
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateIndex,
    LengthMismatch,
    MissingMandatory,
    RowOutOfRange,
    TypeViolation,
    UnknownAttribute,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class ValueTag(IntEnum):
    """Tag of a single scalar value. Codes match the on-disk encoding."""

    STR = 0
    INT = 1
    FLOAT = 2
    TIMESTAMP = 3
    MISSING = 4


class AttrValue:
    """Immutable tagged scalar: text, 64-bit int, 64-bit float, timestamp, or missing.

    Timestamps are milliseconds since the Unix epoch (signed 64-bit). Float NaN
    is rejected at construction because every value must participate in the
    total sort order. Instances hash and compare by (tag, payload).
    """

    __slots__ = ("tag", "payload", "_hash")

    def __init__(self, tag: ValueTag, payload: object):
        if tag is ValueTag.MISSING:
            if payload is not None:
                raise TypeViolation("missing value carries no payload")
        elif tag is ValueTag.STR:
            if not isinstance(payload, str):
                raise TypeViolation(f"str value requires text payload, got {type(payload).__name__}")
        elif tag is ValueTag.INT:
            if not isinstance(payload, int) or isinstance(payload, bool):
                raise TypeViolation(f"int value requires integer payload, got {type(payload).__name__}")
            if not INT64_MIN <= payload <= INT64_MAX:
                raise TypeViolation(f"integer payload {payload} outside signed 64-bit range")
        elif tag is ValueTag.FLOAT:
            if isinstance(payload, int) and not isinstance(payload, bool):
                payload = float(payload)
            if not isinstance(payload, float):
                raise TypeViolation(f"float value requires float payload, got {type(payload).__name__}")
            if math.isnan(payload):
                raise TypeViolation("NaN float rejected: it has no place in the value ordering")
        elif tag is ValueTag.TIMESTAMP:
            if not isinstance(payload, int) or isinstance(payload, bool):
                raise TypeViolation(f"timestamp payload must be epoch milliseconds, got {type(payload).__name__}")
            if not INT64_MIN <= payload <= INT64_MAX:
                raise TypeViolation(f"timestamp payload {payload} outside signed 64-bit range")
        else:  # pragma: no cover - enum is closed
            raise TypeViolation(f"unknown tag {tag!r}")
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "_hash", hash((tag, payload)))

    def __setattr__(self, name: str, value: object):  # noqa: D105
        raise AttributeError("AttrValue is immutable")

    def is_missing(self) -> bool:
        return self.tag is ValueTag.MISSING

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AttrValue):
            return NotImplemented
        return self.tag is other.tag and self.payload == other.payload

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.tag is ValueTag.MISSING:
            return "AttrValue(MISSING)"
        return f"AttrValue({self.tag.name}, {self.payload!r})"


MISSING = AttrValue(ValueTag.MISSING, None)


def sval(text: str) -> AttrValue:
    """Text value."""
    return AttrValue(ValueTag.STR, text)


def ival(number: int) -> AttrValue:
    """Signed 64-bit integer value."""
    return AttrValue(ValueTag.INT, number)


def fval(number: float) -> AttrValue:
    """64-bit float value (NaN rejected)."""
    return AttrValue(ValueTag.FLOAT, number)


def tsval(epoch_ms: int) -> AttrValue:
    """Timestamp value, milliseconds since the Unix epoch."""
    return AttrValue(ValueTag.TIMESTAMP, epoch_ms)


_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def render_value(value: AttrValue) -> str:
    """Canonical text rendering used for string merging and exports.

    Text verbatim; integers in decimal; floats as the shortest round-trip
    decimal; timestamps as ISO-8601 UTC with millisecond precision; the
    missing marker renders as "ε".
    """
    tag = value.tag
    if tag is ValueTag.STR:
        return value.payload
    if tag is ValueTag.INT:
        return str(value.payload)
    if tag is ValueTag.FLOAT:
        return repr(value.payload)
    if tag is ValueTag.TIMESTAMP:
        seconds, millis = divmod(value.payload, 1000)
        moment = datetime.fromtimestamp(seconds, tz=timezone.utc)
        return f"{moment:%Y-%m-%dT%H:%M:%S}.{millis:03d}Z"
    return "ε"


# Rank of each value class in the total cross-type order. Int and Float share
# a rank and compare numerically; the tag index breaks exact numeric ties so
# the order stays deterministic.
_NUMERIC_RANK = 0
_CLASS_RANK = {
    ValueTag.INT: _NUMERIC_RANK,
    ValueTag.FLOAT: _NUMERIC_RANK,
    ValueTag.TIMESTAMP: 1,
    ValueTag.STR: 2,
    ValueTag.MISSING: 3,
}


def sort_key(value: AttrValue):
    """Total-order key over all values: numerics < timestamps < text < missing.

    Numerics (int/float) interleave by numeric value; missing sorts after
    every proper value. Equal keys are resolved by the stable sort.
    """
    tag = value.tag
    if tag is ValueTag.MISSING:
        return (3, 0, 0)
    if tag is ValueTag.INT:
        return (0, value.payload, 0)
    if tag is ValueTag.FLOAT:
        return (0, value.payload, 1)
    if tag is ValueTag.TIMESTAMP:
        return (1, value.payload, 0)
    return (2, value.payload, 0)


class ColumnType(Enum):
    """Declared type of a column. OBJECT admits mixed tags in one column."""

    STR = 0
    INT = 1
    FLOAT = 2
    TIMESTAMP = 3
    OBJECT = 4


_TAG_FOR_COLUMN = {
    ColumnType.STR: ValueTag.STR,
    ColumnType.INT: ValueTag.INT,
    ColumnType.FLOAT: ValueTag.FLOAT,
    ColumnType.TIMESTAMP: ValueTag.TIMESTAMP,
}


@dataclass(frozen=True, slots=True)
class Column:
    """One column: declared type plus a dense value list (missing slots explicit)."""

    ctype: ColumnType
    values: list[AttrValue]


# Deterministic footprint model: fixed frame/column overheads plus 8 bytes per
# index entry, 8 bytes per value slot, and per-value payload bytes (8 for
# fixed-width tags, UTF-8 byte length for text, +1 tag byte inside OBJECT
# columns, 0 for missing).
FRAME_OVERHEAD_BYTES = 64
COLUMN_OVERHEAD_BYTES = 48
SLOT_BYTES = 8
INDEX_ENTRY_BYTES = 8


def _payload_bytes(value: AttrValue) -> int:
    tag = value.tag
    if tag is ValueTag.MISSING:
        return 0
    if tag is ValueTag.STR:
        return len(value.payload.encode("utf-8"))
    return 8


class Dataframe:
    """Indexed columnar table. Immutable once constructed.

    The index is a sequence of pairwise-distinct signed integers kept in
    positional order; every column holds exactly one value (possibly missing)
    per row. The designated case and activity columns are never missing.
    """

    __slots__ = ("_index", "_columns", "case_column", "activity_column")

    def __init__(self, *_args, **_kwargs):
        raise TypeError("use Dataframe.build(...) to construct a frame")

    # -- construction ------------------------------------------------------

    @classmethod
    def build(
        cls,
        index: Sequence[int],
        columns: Mapping[str, tuple[ColumnType, Sequence[AttrValue]]],
        case_column: str,
        activity_column: str,
    ) -> "Dataframe":
        """Validate and assemble a frame; all inputs are copied.

        Raises LengthMismatch, DuplicateIndex, MissingMandatory, or
        TypeViolation when an invariant cannot be established.
        """
        index_list = [int(i) for i in index]
        for entry in index_list:
            if not INT64_MIN <= entry <= INT64_MAX:
                raise TypeViolation(f"index entry {entry} outside signed 64-bit range")
        if len(set(index_list)) != len(index_list):
            raise DuplicateIndex("index entries must be pairwise distinct")
        n = len(index_list)

        built: dict[str, Column] = {}
        for name, (ctype, values) in columns.items():
            value_list = list(values)
            if len(value_list) != n:
                raise LengthMismatch(
                    f"column {name!r} has {len(value_list)} values for {n} index entries"
                )
            if ctype is not ColumnType.OBJECT:
                want = _TAG_FOR_COLUMN[ctype]
                for value in value_list:
                    if value.tag is not want and value.tag is not ValueTag.MISSING:
                        raise TypeViolation(
                            f"column {name!r} declared {ctype.name} but holds {value.tag.name}"
                        )
            built[name] = Column(ctype, value_list)

        for mandatory in (case_column, activity_column):
            col = built.get(mandatory)
            if col is None:
                raise MissingMandatory(f"mandatory column {mandatory!r} absent")
            for value in col.values:
                if value.tag is ValueTag.MISSING:
                    raise MissingMandatory(f"mandatory column {mandatory!r} holds a missing value")

        return cls._unchecked(index_list, built, case_column, activity_column)

    @classmethod
    def _unchecked(
        cls,
        index: list[int],
        columns: dict[str, Column],
        case_column: str,
        activity_column: str,
    ) -> "Dataframe":
        """Assemble without validation. Callers guarantee the invariants."""
        frame = object.__new__(cls)
        object.__setattr__(frame, "_index", index)
        object.__setattr__(frame, "_columns", columns)
        object.__setattr__(frame, "case_column", case_column)
        object.__setattr__(frame, "activity_column", activity_column)
        return frame

    def __setattr__(self, name: str, value: object):
        raise AttributeError("Dataframe is immutable")

    # -- accessors ---------------------------------------------------------

    @property
    def row_count(self) -> int:
        return len(self._index)

    @property
    def index(self) -> list[int]:
        """Index entries in positional order. Treat as read-only."""
        return self._index

    @property
    def column_names(self) -> list[str]:
        return list(self._columns)

    def has_column(self, attr: str) -> bool:
        return attr in self._columns

    def column(self, attr: str) -> Column:
        col = self._columns.get(attr)
        if col is None:
            raise UnknownAttribute(f"no column named {attr!r}")
        return col

    def column_type(self, attr: str) -> ColumnType:
        return self.column(attr).ctype

    def value_at(self, row_position: int, attr: str) -> AttrValue:
        """Value stored at a row position; constant time in rows and columns."""
        col = self._columns.get(attr)
        if col is None:
            raise UnknownAttribute(f"no column named {attr!r}")
        if not 0 <= row_position < len(self._index):
            raise RowOutOfRange(f"row {row_position} outside 0..{len(self._index) - 1}")
        return col.values[row_position]

    def column_values(self, attr: str) -> list[tuple[int, AttrValue]]:
        """All (index entry, value) pairs of a column in positional order."""
        col = self.column(attr)
        return list(zip(self._index, col.values))

    def distinct_values(self, attr: str) -> set[AttrValue]:
        """Deduplicated set of a column's values, missing included if present."""
        return set(self.column(attr).values)

    def memory_footprint(self) -> int:
        """Deterministic in-memory size estimate in bytes.

        footprint = 64 + 8*row_count
                  + per column: 48 + utf8(name) + 8*row_count + per-value payload
        where payload is 8 bytes for int/float/timestamp, the UTF-8 byte length
        for text, one extra tag byte per present value in OBJECT columns, and 0
        for missing slots.
        """
        total = FRAME_OVERHEAD_BYTES + INDEX_ENTRY_BYTES * len(self._index)
        for name, col in self._columns.items():
            total += COLUMN_OVERHEAD_BYTES + len(name.encode("utf-8"))
            total += SLOT_BYTES * len(col.values)
            if col.ctype is ColumnType.STR:
                total += sum(
                    len(v.payload.encode("utf-8"))
                    for v in col.values
                    if v.tag is ValueTag.STR
                )
            elif col.ctype is ColumnType.OBJECT:
                total += sum(
                    _payload_bytes(v) + 1 for v in col.values if v.tag is not ValueTag.MISSING
                )
            else:
                total += 8 * sum(1 for v in col.values if v.tag is not ValueTag.MISSING)
        return total

    # -- misc ---------------------------------------------------------------

    def columns_snapshot(self) -> dict[str, tuple[ColumnType, list[AttrValue]]]:
        """Copy of the column mapping in insertion order (for rebuilding)."""
        return {name: (col.ctype, list(col.values)) for name, col in self._columns.items()}

    def __repr__(self) -> str:
        return (
            f"Dataframe({len(self._index)} rows, columns={list(self._columns)}, "
            f"case={self.case_column!r}, activity={self.activity_column!r})"
        )


def infer_column_type(values: Iterable[AttrValue]) -> ColumnType:
    """Narrowest column type for the values: a concrete type when every
    non-missing value shares one tag, OBJECT otherwise (or when all missing)."""
    seen: set[ValueTag] = set()
    for value in values:
        if value.tag is not ValueTag.MISSING:
            seen.add(value.tag)
            if len(seen) > 1:
                return ColumnType.OBJECT
    if len(seen) == 1:
        tag = next(iter(seen))
        return ColumnType(tag.value)
    return ColumnType.OBJECT
