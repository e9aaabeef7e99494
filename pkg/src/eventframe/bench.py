"""Benchmark harness: disk size, load/filter/DFG wall times, memory estimate.

Timings are medians of repeated runs on a monotonic clock; RAM is the frame's
deterministic footprint estimate rather than process RSS, so reports are
comparable across machines and runs.
"""

from __future__ import annotations

import gc
import math
import os
import statistics
import time
from dataclasses import dataclass

from .dfg import dfg_shift_count, filter_events
from .edf import peek_header, read_edf_file
from .eventlog import most_frequent_activity
from .frame import Dataframe

BENCH_CSV_HEADER = "label,disk_bytes,load_s,ram_bytes,filter_s,dfg_s,columns_loaded"
COLUMNS_MODES = ("all", "two")
MIN_REPEAT = 3


@dataclass(frozen=True, slots=True)
class BenchReport:
    """One measured row of the assessment table."""

    log_label: str
    disk_bytes: int
    load_seconds: float
    ram_bytes: int
    filter_seconds: float
    dfg_seconds: float
    columns_loaded: int

    def as_csv_row(self) -> str:
        return (
            f"{self.log_label},{self.disk_bytes},{self.load_seconds:.3f},"
            f"{self.ram_bytes},{self.filter_seconds:.3f},{self.dfg_seconds:.3f},"
            f"{self.columns_loaded}"
        )

    def as_text(self) -> str:
        return (
            f"{self.log_label}: disk {self.disk_bytes / 1e6:.2f} MB, "
            f"load {self.load_seconds:.3f} s, ram {self.ram_bytes / 1e6:.2f} MB, "
            f"filter {self.filter_seconds:.3f} s, dfg {self.dfg_seconds:.3f} s, "
            f"{self.columns_loaded} columns"
        )


def median_seconds(fn, repeat: int) -> tuple[float, object]:
    """Median wall time of ``repeat`` calls; returns (median, last result)."""
    times = []
    result = None
    for _ in range(repeat):
        gc.collect()
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times), result


def fit_loglog_exponent(sizes: list[int], times: list[float]) -> float:
    """Least-squares slope of log(time) against log(size)."""
    if len(sizes) != len(times) or len(sizes) < 2:
        raise ValueError("need at least two (size, time) points")
    xs = [math.log(s) for s in sizes]
    ys = [math.log(max(t, 1e-9)) for t in times]
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    num = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    den = sum((x - mean_x) ** 2 for x in xs)
    return num / den


def bench(path: str, columns_mode: str = "all", repeat: int = MIN_REPEAT, label: str | None = None) -> BenchReport:
    """Measure one EDF file: size, load, footprint, top-activity filter, DFG.

    ``columns_mode`` chooses between loading every column and loading only the
    case and activity columns. Load, filter, and DFG are medians of
    ``repeat`` (at least three) runs.
    """
    if columns_mode not in COLUMNS_MODES:
        raise ValueError(f"columns_mode must be one of {COLUMNS_MODES}")
    if repeat < MIN_REPEAT:
        raise ValueError(f"repeat must be at least {MIN_REPEAT}")

    disk_bytes = os.path.getsize(path)
    with open(path, "rb") as handle:
        header = peek_header(handle)
    wanted = None
    if columns_mode == "two":
        wanted = {header.case_column, header.activity_column}

    load_seconds, frame = median_seconds(lambda: read_edf_file(path, wanted), repeat)
    assert isinstance(frame, Dataframe)
    ram_bytes = frame.memory_footprint()

    top = most_frequent_activity(frame) if frame.row_count else None
    if top is None:
        filter_seconds = 0.0
    else:
        allowed = frozenset({top})
        filter_seconds, _ = median_seconds(
            lambda: filter_events(frame, frame.activity_column, allowed), repeat
        )

    dfg_seconds, _ = median_seconds(lambda: dfg_shift_count(frame, assume_sorted=False), repeat)

    return BenchReport(
        log_label=label if label is not None else os.path.basename(path),
        disk_bytes=disk_bytes,
        load_seconds=load_seconds,
        ram_bytes=ram_bytes,
        filter_seconds=filter_seconds,
        dfg_seconds=dfg_seconds,
        columns_loaded=len(frame.column_names),
    )
