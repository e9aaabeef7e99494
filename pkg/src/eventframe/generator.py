"""Deterministic synthetic event-log generator for benchmarks and tests.

Every draw comes from one seeded PRNG, so a spec (including its seed) maps to
exactly one frame and therefore to byte-identical serializations. The output
schema is fixed at ten columns: case, activity, and timestamp plus seven
payload attributes, several of them low-cardinality strings so compression
and selective loading have something realistic to chew on.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .frame import (
    AttrValue,
    ColumnType,
    Dataframe,
    MISSING,
    fval,
    ival,
    sval,
    tsval,
)

MODELS = ("uniform_random", "sequential_with_noise")

_BASE_EPOCH_MS = 1_577_836_800_000  # 2020-01-01T00:00:00Z
_NOTES = (
    "ok",
    "retry scheduled",
    "escalated",
    "auto-approved",
    "manual review",
    "delegated",
)


@dataclass(frozen=True, slots=True)
class GenSpec:
    """Shape of a synthetic log: sizes, alphabet, control-flow model, seed."""

    num_cases: int
    num_activities: int
    mean_case_length: float
    seed: int
    model: str = "uniform_random"

    def __post_init__(self):
        if self.num_cases < 1:
            raise ValueError("num_cases must be positive")
        if self.num_activities < 1:
            raise ValueError("num_activities must be positive")
        if self.mean_case_length < 1:
            raise ValueError("mean_case_length must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")


def _poisson(rng: random.Random, lam: float) -> int:
    """Knuth's method; exact for the moderate means used here."""
    if lam <= 0:
        return 0
    threshold = math.exp(-lam)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= threshold:
            return k
        k += 1


def generate(spec: GenSpec) -> Dataframe:
    """Build a frame of ``num_cases`` cases with mean length ``mean_case_length``.

    Case lengths are 1 + Poisson(mean - 1), so every case has at least one
    event and the expected total is num_cases * mean_case_length. Activities
    are named A0..A{k-1}; timestamps increase strictly within each case.
    """
    rng = random.Random(spec.seed)
    k = spec.num_activities

    activity_pool = [sval(f"A{j}") for j in range(k)]
    resource_pool = [sval(f"R{j}") for j in range(8)]
    team_pool = [sval(f"T{j}") for j in range(5)]
    priority_pool = [ival(j) for j in range(5)]
    flag_pool = (sval("yes"), sval("no"))
    note_pool = [sval(t) for t in _NOTES]
    cost_cache: dict[int, AttrValue] = {}
    duration_cache: dict[int, AttrValue] = {}

    case_values: list[AttrValue] = []
    activity_values: list[AttrValue] = []
    ts_values: list[AttrValue] = []
    resource_values: list[AttrValue] = []
    team_values: list[AttrValue] = []
    priority_values: list[AttrValue] = []
    cost_values: list[AttrValue] = []
    duration_values: list[AttrValue] = []
    flag_values: list[AttrValue] = []
    note_values: list[AttrValue] = []

    sequential = spec.model == "sequential_with_noise"
    for case_i in range(spec.num_cases):
        length = 1 + _poisson(rng, spec.mean_case_length - 1.0)
        case_value = sval(f"c{case_i}")
        clock = _BASE_EPOCH_MS + case_i * 60_000
        activity_idx = 0
        for step in range(length):
            if sequential:
                if step > 0:
                    if rng.random() < 0.1:
                        activity_idx = rng.randrange(k)
                    else:
                        activity_idx = (activity_idx + 1) % k
                activity = activity_pool[activity_idx]
            else:
                activity = activity_pool[rng.randrange(k)]
            clock += rng.randrange(1_000, 60_001)

            case_values.append(case_value)
            activity_values.append(activity)
            ts_values.append(tsval(clock))
            resource_values.append(resource_pool[rng.randrange(8)])
            team_values.append(team_pool[rng.randrange(5)])
            priority_values.append(priority_pool[rng.randrange(5)])

            cost_quarter = rng.randrange(40, 2001)
            cost = cost_cache.get(cost_quarter)
            if cost is None:
                cost = fval(cost_quarter / 4.0)
                cost_cache[cost_quarter] = cost
            cost_values.append(cost)

            duration = rng.randrange(1_000, 360_000, 500)
            dur = duration_cache.get(duration)
            if dur is None:
                dur = ival(duration)
                duration_cache[duration] = dur
            duration_values.append(dur)

            flag_values.append(flag_pool[rng.randrange(2)])
            if rng.random() < 0.1:
                note_values.append(MISSING)
            else:
                note_values.append(note_pool[rng.randrange(len(note_pool))])

    n = len(case_values)
    columns = {
        "case": (ColumnType.STR, case_values),
        "activity": (ColumnType.STR, activity_values),
        "timestamp": (ColumnType.TIMESTAMP, ts_values),
        "resource": (ColumnType.STR, resource_values),
        "team": (ColumnType.STR, team_values),
        "priority": (ColumnType.INT, priority_values),
        "cost": (ColumnType.FLOAT, cost_values),
        "duration_ms": (ColumnType.INT, duration_values),
        "flag": (ColumnType.STR, flag_values),
        "note": (ColumnType.STR, note_values),
    }
    return Dataframe.build(range(n), columns, "case", "activity")
