"""Directly-follows graph discovery by three interchangeable strategies.

All three strategies agree exactly on every input: iterating a classical log
case by case, a grouped map-reduce over a frame, and the shift/concat/count
pipeline over a frame sorted by case. Event- and case-level filters plus DOT
and edge-CSV exports round out the module.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .errors import SeparatorCollision
from .eventlog import EventLog
from .frame import AttrValue, Column, Dataframe, render_value
from .transforms import RowPredicate, concat, eq_proj, group, mergstrv, proj, shift, sort

PAIR_SEPARATOR = ","


@dataclass(eq=True)
class DfgGraph:
    """Weighted directed graph over activities with start/end occurrence counts."""

    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)
    start_activities: dict[str, int] = field(default_factory=dict)
    end_activities: dict[str, int] = field(default_factory=dict)

    def edge_count_total(self) -> int:
        return sum(self.edges.values())


def dfg_iterate(log: EventLog) -> DfgGraph:
    """Baseline strategy: walk each case's event sequence and count pairs.

    Within a case, events follow the log's total order. The first and last
    activity of every case increment the start/end counts.
    """
    nodes = {e.activity for e in log.events}
    edges: Counter[tuple[str, str]] = Counter()
    starts: Counter[str] = Counter()
    ends: Counter[str] = Counter()
    events = log.events
    for positions in log.cases.values():
        ordered = sorted(positions)
        activities = [events[p].activity for p in ordered]
        starts[activities[0]] += 1
        ends[activities[-1]] += 1
        edges.update(zip(activities, activities[1:]))
    return DfgGraph(
        nodes=nodes,
        edges=dict(edges),
        start_activities=dict(starts),
        end_activities=dict(ends),
    )


def _group_pairs(frames: list[Dataframe]) -> tuple[Counter, Counter, Counter]:
    """Map phase: consecutive activity pairs plus start/end for a batch of groups."""
    edges: Counter[tuple[str, str]] = Counter()
    starts: Counter[str] = Counter()
    ends: Counter[str] = Counter()
    for g in frames:
        index = g.index
        # Positional order within a group must agree with index order; frames
        # built from logs or files satisfy this by construction.
        assert all(a < b for a, b in zip(index, index[1:])), "group index not monotone"
        activities = [render_value(v) for v in g.column(g.activity_column).values]
        starts[activities[0]] += 1
        ends[activities[-1]] += 1
        edges.update(zip(activities, activities[1:]))
    return edges, starts, ends


def dfg_mapreduce(df: Dataframe, workers: int = 1) -> DfgGraph:
    """Grouped strategy: partition by case, extract pairs per group, merge counts.

    Groups are dealt round-robin to the worker pool; the merge is key-wise
    addition, so the result is independent of scheduling and worker count.
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    nodes = {render_value(v) for v in df.distinct_values(df.activity_column)}
    groups = group(df, df.case_column)
    if not groups:
        return DfgGraph(nodes=nodes)

    batches: list[list[Dataframe]] = [[] for _ in range(min(workers, len(groups)))]
    for i, g in enumerate(groups):
        batches[i % len(batches)].append(g)

    if len(batches) == 1:
        partials = [_group_pairs(batches[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(batches)) as pool:
            partials = list(pool.map(_group_pairs, batches))

    edges: Counter[tuple[str, str]] = Counter()
    starts: Counter[str] = Counter()
    ends: Counter[str] = Counter()
    for partial_edges, partial_starts, partial_ends in partials:
        edges.update(partial_edges)
        starts.update(partial_starts)
        ends.update(partial_ends)
    return DfgGraph(
        nodes=nodes,
        edges=dict(edges),
        start_activities=dict(starts),
        end_activities=dict(ends),
    )


def _reindex_positional(df: Dataframe) -> Dataframe:
    """Renumber the index to 0..n-1 in positional order.

    The shift/concat pairing matches rows through index adjacency, so the
    sorted frame must carry a contiguous ascending index before shifting.
    """
    columns = {name: df.column(name) for name in df.column_names}
    return Dataframe._unchecked(
        list(range(df.row_count)), columns, df.case_column, df.activity_column
    )


def dfg_shift_count(
    df: Dataframe,
    assume_sorted: bool = False,
    count_from_merged: bool = False,
) -> DfgGraph:
    """Shift-and-count strategy over the frame's case/activity columns.

    Pipeline: stable-sort by case (skipped when the caller guarantees case
    blocks are already contiguous), pair every row with its successor through
    an index-shifted self-concatenation, keep same-case pairs, materialise the
    merged activity-pair column, and read the edge counts off it.

    By default edges are counted from the value pairs themselves, which is
    immune to separator characters inside activity names. With
    ``count_from_merged`` the counts come from the merged text column and a
    separator occurring inside any activity name raises SeparatorCollision.
    """
    nodes = {render_value(v) for v in df.distinct_values(df.activity_column)}
    if df.row_count == 0:
        return DfgGraph(nodes=nodes)

    ordered = df if assume_sorted else sort(df, df.case_column)
    ordered = _reindex_positional(ordered)

    case_attr = df.case_column
    case_attr_2 = case_attr + "_2"
    act_attr = df.activity_column
    act_attr_2 = act_attr + "_2"

    shifted = shift(ordered)
    paired = concat(ordered, shifted, "_2")

    def same_case(_entry: int, _attrs: frozenset[str], get) -> bool:
        return get(case_attr) == get(case_attr_2)

    same_case_rows = proj(
        paired, RowPredicate(attrs=frozenset({case_attr, case_attr_2}), eval=same_case)
    )

    merged_attr = act_attr + "_pair"
    while same_case_rows.has_column(merged_attr):
        merged_attr += "_"
    with_pairs = mergstrv(same_case_rows, merged_attr, act_attr, act_attr_2, PAIR_SEPARATOR)

    if count_from_merged:
        for node in nodes:
            if PAIR_SEPARATOR in node:
                raise SeparatorCollision(
                    f"activity {node!r} contains {PAIR_SEPARATOR!r}; merged-column counting is ambiguous"
                )
        edge_counter: Counter[tuple[str, str]] = Counter()
        for merged in with_pairs.column(merged_attr).values:
            source, target = merged.payload.split(PAIR_SEPARATOR, 1)
            edge_counter[(source, target)] += 1
    else:
        pair_counter: Counter[tuple[AttrValue, AttrValue]] = Counter(
            zip(
                with_pairs.column(act_attr).values,
                with_pairs.column(act_attr_2).values,
            )
        )
        edge_counter = Counter()
        for (a, b), count in pair_counter.items():
            edge_counter[(render_value(a), render_value(b))] += count

    starts: Counter[str] = Counter()
    ends: Counter[str] = Counter()
    case_values = ordered.column(case_attr).values
    activity_values = ordered.column(act_attr).values
    block_start = 0
    for p in range(1, len(case_values) + 1):
        if p == len(case_values) or case_values[p] != case_values[block_start]:
            starts[render_value(activity_values[block_start])] += 1
            ends[render_value(activity_values[p - 1])] += 1
            block_start = p

    return DfgGraph(
        nodes=nodes,
        edges=dict(edge_counter),
        start_activities=dict(starts),
        end_activities=dict(ends),
    )


def filter_events(df: Dataframe, attr: str, allowed: Iterable[AttrValue]) -> Dataframe:
    """Keep rows whose value of ``attr`` is in ``allowed``; single linear pass."""
    return eq_proj(df, attr, allowed)


def filter_cases(df: Dataframe, attr: str, allowed: Iterable[AttrValue]) -> Dataframe:
    """Keep every row of every case containing at least one allowed value.

    Two passes: collect qualifying case identifiers, then project on case
    membership.
    """
    allowed_set = allowed if isinstance(allowed, (set, frozenset)) else set(allowed)
    case_values = df.column(df.case_column).values
    attr_values = df.column(attr).values
    qualifying = {c for c, v in zip(case_values, attr_values) if v in allowed_set}
    return eq_proj(df, df.case_column, qualifying)


def _dot_quote(name: str) -> str:
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def dfg_to_dot(g: DfgGraph) -> str:
    """Deterministic DOT rendering: sorted nodes and edges, counts as labels.

    Start and end occurrence sets appear as dedicated pseudo-nodes wired to
    their activities.
    """
    lines = ["digraph dfg {", "  rankdir=LR;"]
    for node in sorted(g.nodes):
        lines.append(f"  {_dot_quote(node)};")
    if g.start_activities:
        lines.append('  "__start__" [shape=circle, label=""];')
    if g.end_activities:
        lines.append('  "__end__" [shape=doublecircle, label=""];')
    for activity in sorted(g.start_activities):
        count = g.start_activities[activity]
        lines.append(f'  "__start__" -> {_dot_quote(activity)} [label="{count}"];')
    for source, target in sorted(g.edges):
        count = g.edges[(source, target)]
        lines.append(f"  {_dot_quote(source)} -> {_dot_quote(target)} [label=\"{count}\"];")
    for activity in sorted(g.end_activities):
        count = g.end_activities[activity]
        lines.append(f'  {_dot_quote(activity)} -> "__end__" [label="{count}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dfg_to_edge_csv(g: DfgGraph) -> str:
    """Edge list as CSV text: header source,target,count, sorted by (source, target)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["source", "target", "count"])
    for source, target in sorted(g.edges):
        writer.writerow([source, target, g.edges[(source, target)]])
    return buffer.getvalue()
