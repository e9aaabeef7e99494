"""Builders for the checked-in EDF1 golden fixtures.

Run ``python -m tests.golden`` from the repository root to (re)write the
fixture files under ``tests/fixtures/``. Tests regenerate the bytes from
these builders and require an exact match with the files on disk.
"""

from __future__ import annotations

import random
from pathlib import Path

from eventframe import (
    COMPRESS_DEFLATE,
    COMPRESS_NONE,
    ColumnType,
    Dataframe,
    MISSING,
    fval,
    ival,
    sval,
    tsval,
    write_edf,
)

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def golden_empty() -> tuple[Dataframe, int]:
    df = Dataframe.build(
        [],
        {
            "case": (ColumnType.STR, []),
            "act": (ColumnType.STR, []),
        },
        "case",
        "act",
    )
    return df, COMPRESS_NONE


def golden_mixed() -> tuple[Dataframe, int]:
    df = Dataframe.build(
        [0, 1, 2, 3, 4],
        {
            "case": (ColumnType.STR, [sval("c1"), sval("c1"), sval("c2"), sval("c2"), sval("c3")]),
            "act": (ColumnType.STR, [sval("A"), sval("B"), sval("A"), sval("C"), sval("B")]),
            "when": (
                ColumnType.TIMESTAMP,
                [tsval(1546398245006), tsval(1546398246000), MISSING, tsval(1546398248500), tsval(1546398249999)],
            ),
            "amount": (ColumnType.INT, [ival(-5), MISSING, ival(7), ival(0), MISSING]),
            "score": (ColumnType.FLOAT, [fval(1.5), fval(-2.25), fval(0.0), MISSING, fval(1e300)]),
            "tag": (ColumnType.OBJECT, [ival(1), sval("s"), MISSING, fval(2.5), tsval(99)]),
        },
        "case",
        "act",
    )
    return df, COMPRESS_NONE


def golden_big() -> tuple[Dataframe, int]:
    rng = random.Random(2024)
    n = 1000
    cases = []
    case_i = 0
    while len(cases) < n:
        case_i += 1
        for _ in range(rng.randrange(1, 9)):
            if len(cases) == n:
                break
            cases.append(sval(f"c{case_i}"))
    acts = [sval(f"A{rng.randrange(7)}") for _ in range(n)]
    ts = [tsval(1_600_000_000_000 + 1000 * i + rng.randrange(999)) for i in range(n)]
    amounts = [MISSING if rng.random() < 0.15 else ival(rng.randrange(-1000, 1000)) for i in range(n)]
    notes = [MISSING if rng.random() < 0.5 else sval(rng.choice(["ok", "redo", "hold"])) for _ in range(n)]
    df = Dataframe.build(
        range(n),
        {
            "case": (ColumnType.STR, cases),
            "act": (ColumnType.STR, acts),
            "when": (ColumnType.TIMESTAMP, ts),
            "amount": (ColumnType.INT, amounts),
            "note": (ColumnType.STR, notes),
        },
        "case",
        "act",
    )
    return df, COMPRESS_DEFLATE


GOLDENS = {
    "empty.edf": golden_empty,
    "mixed.edf": golden_mixed,
    "big_deflate.edf": golden_big,
}


def regenerate() -> None:
    FIXTURE_DIR.mkdir(exist_ok=True)
    for name, builder in GOLDENS.items():
        df, codec = builder()
        data = write_edf(df, codec)
        (FIXTURE_DIR / name).write_bytes(data)
        print(f"wrote {name}: {len(data)} bytes")


if __name__ == "__main__":
    regenerate()
