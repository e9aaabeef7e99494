"""Classical event-log structure, CSV ingestion, and the log/frame bridge.

An event log is a totally ordered event sequence with case membership kept in
a separate mapping; event attributes are partial (absence means missing).
Conversion to a frame materialises one row per event in log order, padding
undefined attributes with explicit missing slots.
"""

from __future__ import annotations

import csv
import io
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import BinaryIO, Mapping

from .errors import (
    MalformedCsv,
    MissingMandatory,
    SharedEvent,
    TypeViolation,
)
from .frame import (
    INT64_MAX,
    INT64_MIN,
    AttrValue,
    ColumnType,
    Dataframe,
    MISSING,
    ValueTag,
    infer_column_type,
    render_value,
    sval,
    tsval,
)

DEFAULT_CASE_ATTR = "case"
DEFAULT_ACTIVITY_ATTR = "activity"


@dataclass(frozen=True, slots=True)
class Event:
    """One recorded step: an activity name plus a partial attribute map.

    The attribute map never stores an explicit missing value; absence of a
    key is the missing marker.
    """

    activity: str
    attributes: dict[str, AttrValue] = field(default_factory=dict)


@dataclass(slots=True)
class EventLog:
    """Totally ordered events with case membership.

    ``events`` holds the total order as list position. ``cases`` maps each
    case identifier to the (non-empty) set of event positions belonging to it.
    ``case_attr``/``activity_attr`` name the columns a conversion produces.
    """

    events: list[Event]
    cases: dict[str, set[int]]
    activities: set[str] = field(default_factory=set)
    case_attr: str = DEFAULT_CASE_ATTR
    activity_attr: str = DEFAULT_ACTIVITY_ATTR

    def __post_init__(self):
        used = {e.activity for e in self.events}
        if not self.activities:
            self.activities = used
        elif not used <= self.activities:
            raise TypeViolation(f"events use undeclared activities: {sorted(used - self.activities)}")
        n = len(self.events)
        for case_id, positions in self.cases.items():
            if not positions:
                raise TypeViolation(f"case {case_id!r} maps to no events")
            for p in positions:
                if not 0 <= p < n:
                    raise TypeViolation(f"case {case_id!r} references invalid event position {p}")
        for e in self.events:
            for name, value in e.attributes.items():
                if value.tag is ValueTag.MISSING:
                    raise TypeViolation(f"event attribute {name!r} stores an explicit missing value")

    @classmethod
    def from_traces(
        cls,
        traces: Mapping[str, list[Event]],
        case_attr: str = DEFAULT_CASE_ATTR,
        activity_attr: str = DEFAULT_ACTIVITY_ATTR,
    ) -> "EventLog":
        """Build a log from per-case event sequences, cases laid out contiguously."""
        events: list[Event] = []
        cases: dict[str, set[int]] = {}
        for case_id, seq in traces.items():
            start = len(events)
            events.extend(seq)
            cases[case_id] = set(range(start, len(events)))
        return cls(events=events, cases=cases, case_attr=case_attr, activity_attr=activity_attr)


@dataclass(frozen=True, slots=True)
class LogStats:
    """Log summary: event/case counts, distinct trace variants, activity classes."""

    events: int
    cases: int
    variants: int
    classes: int

    def as_csv_row(self) -> str:
        return f"{self.events},{self.cases},{self.variants},{self.classes}"


# -- timestamp parsing -------------------------------------------------------

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_INT_TEXT = re.compile(r"^[+-]?\d+$")
_FRACTION = re.compile(r"\.(\d+)")


def parse_timestamp_text(text: str) -> int:
    """Parse ISO-8601 (zone mandatory) or decimal epoch-milliseconds text.

    Returns epoch milliseconds; sub-millisecond digits are truncated toward
    minus infinity.
    """
    if _INT_TEXT.match(text):
        ms = int(text)
        if not INT64_MIN <= ms <= INT64_MAX:
            raise TypeViolation(f"epoch milliseconds {text!r} outside signed 64-bit range")
        return ms
    normalized = text.strip()
    if normalized.endswith(("Z", "z")):
        normalized = normalized[:-1] + "+00:00"

    def _pad(match: re.Match) -> str:
        digits = match.group(1)
        if len(digits) <= 6:
            return "." + digits.ljust(6, "0")
        return "." + digits[:6]

    normalized = _FRACTION.sub(_pad, normalized, count=1)
    try:
        moment = datetime.fromisoformat(normalized)
    except ValueError as exc:
        raise TypeViolation(f"unparseable timestamp {text!r}: {exc}") from None
    if moment.tzinfo is None:
        raise TypeViolation(f"timestamp {text!r} lacks a UTC offset; the zone is mandatory")
    return int((moment - _EPOCH) // timedelta(milliseconds=1))


def _parse_typed(text: str, ctype: ColumnType, attr: str) -> AttrValue:
    if ctype is ColumnType.INT:
        try:
            number = int(text)
        except ValueError:
            raise TypeViolation(f"column {attr!r}: {text!r} is not an integer") from None
        return AttrValue(ValueTag.INT, number)
    if ctype is ColumnType.FLOAT:
        try:
            number = float(text)
        except ValueError:
            raise TypeViolation(f"column {attr!r}: {text!r} is not a float") from None
        return AttrValue(ValueTag.FLOAT, number)
    if ctype is ColumnType.TIMESTAMP:
        try:
            return tsval(parse_timestamp_text(text))
        except TypeViolation as exc:
            raise TypeViolation(f"column {attr!r}: {exc}") from None
    return sval(text)


def ingest_csv(
    source: bytes | BinaryIO | str,
    case_column: str,
    activity_column: str,
    timestamp_column: str | None = None,
    type_hints: Mapping[str, ColumnType] | None = None,
) -> Dataframe:
    """Read RFC-4180 CSV (UTF-8, header mandatory) into a frame.

    Empty fields become missing slots; columns default to text unless hinted.
    The timestamp column, when given, is parsed as ISO-8601 or epoch
    milliseconds. Rows keep file order; the index is 0..n-1.
    """
    if isinstance(source, bytes):
        text_stream = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        with open(source, "rb") as handle:
            text_stream = io.StringIO(handle.read().decode("utf-8"))
    else:
        text_stream = io.StringIO(source.read().decode("utf-8"))

    hints = dict(type_hints or {})
    if timestamp_column is not None and timestamp_column not in hints:
        hints[timestamp_column] = ColumnType.TIMESTAMP

    reader = csv.reader(text_stream, strict=True)
    try:
        header = next(reader, None)
    except csv.Error as exc:
        raise MalformedCsv(f"bad header row: {exc}") from None
    if header is None:
        raise MalformedCsv("empty input: header row is mandatory")
    if len(set(header)) != len(header):
        raise MalformedCsv("duplicate column names in header")
    for mandatory in (case_column, activity_column):
        if mandatory not in header:
            raise MissingMandatory(f"column {mandatory!r} not in CSV header {header}")

    column_types = [hints.get(name, ColumnType.STR) for name in header]
    mandatory_positions = {header.index(case_column), header.index(activity_column)}
    columns: list[list[AttrValue]] = [[] for _ in header]

    try:
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise MalformedCsv(
                    f"line {line_no}: {len(row)} fields, header declares {len(header)}"
                )
            for pos, text in enumerate(row):
                if text == "":
                    if pos in mandatory_positions:
                        raise MissingMandatory(
                            f"line {line_no}: empty value in mandatory column {header[pos]!r}"
                        )
                    columns[pos].append(MISSING)
                else:
                    columns[pos].append(_parse_typed(text, column_types[pos], header[pos]))
    except csv.Error as exc:
        raise MalformedCsv(f"CSV parse failure: {exc}") from None

    n = len(columns[0]) if columns else 0
    mapping = {
        name: (ctype, values)
        for name, ctype, values in zip(header, column_types, columns)
    }
    return Dataframe.build(list(range(n)), mapping, case_column, activity_column)


# -- log <-> frame -----------------------------------------------------------


def log_to_dataframe(log: EventLog) -> Dataframe:
    """Materialise a log as a frame: one row per event in log order.

    The case value comes from the event's own case attribute when present,
    otherwise from the unique case containing the event. Events claimed by
    more than one case are rejected; events with no case at all cannot
    satisfy the mandatory-case rule and are rejected too.
    """
    n = len(log.events)
    owner: dict[int, str] = {}
    for case_id, positions in log.cases.items():
        for p in positions:
            if p in owner:
                raise SharedEvent(
                    f"event {p} belongs to cases {owner[p]!r} and {case_id!r}"
                )
            owner[p] = case_id

    case_values: list[AttrValue] = []
    for p, event in enumerate(log.events):
        explicit = event.attributes.get(log.case_attr)
        if explicit is not None:
            case_values.append(explicit)
        elif p in owner:
            case_values.append(sval(owner[p]))
        else:
            raise MissingMandatory(f"event {p} has no case attribute and belongs to no case")

    activity_values = [sval(e.activity) for e in log.events]

    extra_names: list[str] = []
    seen = {log.case_attr, log.activity_attr}
    for event in log.events:
        for name in event.attributes:
            if name not in seen:
                seen.add(name)
                extra_names.append(name)

    columns: dict[str, tuple[ColumnType, list[AttrValue]]] = {}
    columns[log.case_attr] = (infer_column_type(case_values), case_values)
    columns[log.activity_attr] = (ColumnType.STR, activity_values)
    for name in extra_names:
        values = [e.attributes.get(name, MISSING) for e in log.events]
        columns[name] = (infer_column_type(values), values)

    return Dataframe.build(list(range(n)), columns, log.case_attr, log.activity_attr)


def dataframe_to_log(df: Dataframe) -> EventLog:
    """Inverse bridge: one event per row, missing slots dropped from attributes.

    Case identifiers are the canonical rendering of the case column values.
    """
    case_values = df.column(df.case_column).values
    activity_values = df.column(df.activity_column).values
    other_columns = [
        (name, df.column(name).values)
        for name in df.column_names
        if name != df.activity_column
    ]

    events: list[Event] = []
    cases: dict[str, set[int]] = {}
    for p in range(df.row_count):
        attributes: dict[str, AttrValue] = {}
        for name, values in other_columns:
            value = values[p]
            if value.tag is not ValueTag.MISSING:
                attributes[name] = value
        events.append(Event(activity=render_value(activity_values[p]), attributes=attributes))
        case_id = render_value(case_values[p])
        cases.setdefault(case_id, set()).add(p)

    return EventLog(
        events=events,
        cases=cases,
        case_attr=df.case_column,
        activity_attr=df.activity_column,
    )


def stats(df: Dataframe) -> LogStats:
    """Event/case/variant/class counts of a frame.

    A case's variant is its activity sequence in the frame's positional
    order; variants are counted as distinct sequences.
    """
    case_values = df.column(df.case_column).values
    activity_values = df.column(df.activity_column).values
    sequences: dict[AttrValue, list[AttrValue]] = {}
    for case_value, activity in zip(case_values, activity_values):
        seq = sequences.get(case_value)
        if seq is None:
            sequences[case_value] = [activity]
        else:
            seq.append(activity)
    variants = {tuple(seq) for seq in sequences.values()}
    return LogStats(
        events=df.row_count,
        cases=len(sequences),
        variants=len(variants),
        classes=len(set(activity_values)),
    )


def most_frequent_activity(df: Dataframe) -> AttrValue:
    """Most common activity value; first-occurrence order breaks ties."""
    values = df.column(df.activity_column).values
    if not values:
        raise MissingMandatory("frame has no rows, so no most frequent activity")
    counts = Counter(values)
    best = max(counts.values())
    for v in values:
        if counts[v] == best:
            return v
    raise AssertionError("unreachable")
