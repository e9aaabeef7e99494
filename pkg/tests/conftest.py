"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import random
from collections import Counter
from typing import Mapping, Sequence

import pytest

from eventframe import (
    AttrValue,
    ColumnType,
    Dataframe,
    DfgGraph,
    Event,
    EventLog,
    MISSING,
    fval,
    ival,
    sort_key,
    sval,
    tsval,
)


def two_row_frame() -> Dataframe:
    return Dataframe.build(
        [0, 1],
        {
            "case": (ColumnType.STR, [sval("c1"), sval("c1")]),
            "act": (ColumnType.STR, [sval("A"), sval("B")]),
        },
        "case",
        "act",
    )


def frame_from_rows(
    cases: Sequence[str],
    acts: Sequence[str],
    extra: Mapping[str, tuple[ColumnType, Sequence[AttrValue]]] | None = None,
    index: Sequence[int] | None = None,
) -> Dataframe:
    columns = {
        "case": (ColumnType.STR, [sval(c) for c in cases]),
        "act": (ColumnType.STR, [sval(a) for a in acts]),
    }
    if extra:
        columns.update(extra)
    if index is None:
        index = range(len(cases))
    return Dataframe.build(index, columns, "case", "act")


def random_value(rng: random.Random, allow_missing: bool = True) -> AttrValue:
    roll = rng.randrange(10 if allow_missing else 8)
    if roll < 3:
        return sval(rng.choice(["x", "y", "z", "alpha", "beta", ""]))
    if roll < 5:
        return ival(rng.randrange(-50, 50))
    if roll < 7:
        return fval(rng.choice([-2.5, 0.0, 1.25, 3.75, 100.0]))
    if roll < 8:
        return tsval(1_500_000_000_000 + rng.randrange(0, 10_000_000))
    return MISSING


def random_frame(rng: random.Random, max_rows: int = 12) -> Dataframe:
    """Small frame with string case/activity plus 0..3 mixed extra columns.

    Index entries are distinct but not necessarily contiguous or sorted.
    """
    n = rng.randrange(0, max_rows + 1)
    cases = [f"c{rng.randrange(1, 5)}" for _ in range(n)]
    acts = [rng.choice("ABCDE") for _ in range(n)]
    extra = {}
    for j in range(rng.randrange(0, 4)):
        values = [random_value(rng) for _ in range(n)]
        extra[f"x{j}"] = (ColumnType.OBJECT, values)
    if rng.random() < 0.5:
        index = list(range(n))
    else:
        pool = list(range(-2, 3 * n + 2))
        rng.shuffle(pool)
        index = pool[:n]
    return frame_from_rows(cases, acts, extra, index)


def random_traces(
    rng: random.Random,
    max_cases: int = 50,
    max_events_per_case: int = 30,
    max_activities: int = 10,
) -> dict[str, list[str]]:
    num_cases = rng.randrange(1, max_cases + 1)
    alphabet = [f"A{j}" for j in range(rng.randrange(1, max_activities + 1))]
    return {
        f"c{i}": [rng.choice(alphabet) for _ in range(rng.randrange(1, max_events_per_case + 1))]
        for i in range(num_cases)
    }


def interleaved_log(rng: random.Random, traces: Mapping[str, Sequence[str]]) -> EventLog:
    """Event log whose global order riffles the cases while preserving each
    case's internal order; some events carry an extra numeric attribute."""
    pending = {case: list(seq) for case, seq in traces.items() if seq}
    events: list[Event] = []
    cases: dict[str, set[int]] = {case: set() for case in pending}
    while pending:
        case = rng.choice(sorted(pending))
        activity = pending[case].pop(0)
        attributes = {}
        if rng.random() < 0.3:
            attributes["amount"] = ival(rng.randrange(100))
        cases[case].add(len(events))
        events.append(Event(activity=activity, attributes=attributes))
        if not pending[case]:
            del pending[case]
    return EventLog(events=events, cases=cases)


def oracle_dfg(traces: Mapping[str, Sequence[str]]) -> DfgGraph:
    """Definitional pair enumeration over the raw trace sequences."""
    nodes: set[str] = set()
    edges: Counter = Counter()
    starts: Counter = Counter()
    ends: Counter = Counter()
    for seq in traces.values():
        nodes.update(seq)
        if seq:
            starts[seq[0]] += 1
            ends[seq[-1]] += 1
            for a, b in zip(seq, seq[1:]):
                edges[(a, b)] += 1
    return DfgGraph(
        nodes=nodes,
        edges=dict(edges),
        start_activities=dict(starts),
        end_activities=dict(ends),
    )


def traces_of_frame(df: Dataframe) -> dict[str, list[str]]:
    """Per-case activity sequences in positional order, keyed by rendered case."""
    from eventframe import render_value

    out: dict[str, list[str]] = {}
    case_values = df.column(df.case_column).values
    act_values = df.column(df.activity_column).values
    for c, a in zip(case_values, act_values):
        out.setdefault(render_value(c), []).append(render_value(a))
    return out


def stable_selection_sort_positions(values: Sequence[AttrValue]) -> list[int]:
    """Independent stable sort oracle: repeatedly take the first minimal element."""
    remaining = list(range(len(values)))
    order: list[int] = []
    while remaining:
        best = remaining[0]
        for p in remaining[1:]:
            if sort_key(values[p]) < sort_key(values[best]):
                best = p
        remaining.remove(best)
        order.append(best)
    return order


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xEF17)
