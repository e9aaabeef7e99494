"""Command-line surface: convert, info, filter, dfg, gen, bench.

Exit codes: 0 success, 1 usage error, 2 data or I/O error. Diagnostics go to
stderr; data goes to stdout or the requested output file. Input format is
sniffed: files starting with the EDF1 magic are columnar, everything else is
treated as CSV.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Iterable

from .bench import BENCH_CSV_HEADER, COLUMNS_MODES, MIN_REPEAT, bench
from .dfg import (
    dfg_iterate,
    dfg_mapreduce,
    dfg_shift_count,
    dfg_to_dot,
    dfg_to_edge_csv,
    filter_cases,
    filter_events,
)
from .edf import (
    COMPRESS_DEFLATE,
    COMPRESS_NONE,
    MAGIC,
    read_edf_file,
    write_edf_file,
)
from .errors import EngineError
from .eventlog import dataframe_to_log, ingest_csv, most_frequent_activity, stats
from .frame import Dataframe, ValueTag, render_value
from .generator import MODELS, GenSpec, generate
from .transforms import sort as sort_frame

_COMPRESSION = {"none": COMPRESS_NONE, "deflate": COMPRESS_DEFLATE}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise _UsageError(message)


def _is_edf(path: str) -> bool:
    with open(path, "rb") as handle:
        return handle.read(len(MAGIC)) == MAGIC


def _load_frame(path: str, args, two_columns_only: bool = False) -> Dataframe:
    if _is_edf(path):
        return read_edf_file(path, set() if two_columns_only else None)
    return ingest_csv(
        path,
        case_column=args.case_col,
        activity_column=args.act_col,
        timestamp_column=getattr(args, "time_col", None),
    )


def _write_csv(df: Dataframe, out) -> None:
    writer = csv.writer(out)
    names = df.column_names
    writer.writerow(names)
    columns = [df.column(name).values for name in names]
    for p in range(df.row_count):
        writer.writerow(
            [
                "" if col[p].tag is ValueTag.MISSING else render_value(col[p])
                for col in columns
            ]
        )


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


# -- subcommand handlers ------------------------------------------------------


def _cmd_convert(args) -> int:
    if _is_edf(args.input):
        wanted = set(args.columns.split(",")) if args.columns else None
        df = read_edf_file(args.input, wanted)
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            _write_csv(df, handle)
    else:
        df = ingest_csv(
            args.input,
            case_column=args.case_col,
            activity_column=args.act_col,
            timestamp_column=args.time_col,
        )
        if args.sort_by_time:
            if args.time_col is None:
                raise _UsageError("--sort-by-time requires --time-col")
            df = sort_frame(df, args.time_col)
        write_edf_file(df, args.output, _COMPRESSION[args.compress])
    return 0


def _cmd_info(args) -> int:
    df = _load_frame(args.input, args, two_columns_only=True)
    print(stats(df).as_csv_row())
    return 0


def _pick_allowed(df: Dataframe, attr: str, rendered: Iterable[str]):
    wanted = set(rendered)
    return {v for v in df.distinct_values(attr) if render_value(v) in wanted}


def _cmd_filter(args) -> int:
    if args.keep_top_activity and args.values:
        raise _UsageError("--values and --keep-top-activity are mutually exclusive")
    if not args.keep_top_activity and not args.values:
        raise _UsageError("one of --values or --keep-top-activity is required")
    df = _load_frame(args.input, args)
    if args.keep_top_activity:
        attr = df.activity_column
        allowed = {most_frequent_activity(df)} if df.row_count else set()
    else:
        if not args.attr:
            raise _UsageError("--attr is required with --values")
        attr = args.attr
        allowed = _pick_allowed(df, attr, args.values.split(","))
    result = filter_cases(df, attr, allowed) if args.level == "case" else filter_events(df, attr, allowed)
    if args.output.endswith(".csv"):
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            _write_csv(result, handle)
    else:
        write_edf_file(result, args.output, _COMPRESSION[args.compress])
    print(f"kept {result.row_count} of {df.row_count} rows", file=sys.stderr)
    return 0


def _cmd_dfg(args) -> int:
    df = _load_frame(args.input, args, two_columns_only=True)
    if args.algo == "iterate":
        graph = dfg_iterate(dataframe_to_log(df))
    elif args.algo == "mapreduce":
        graph = dfg_mapreduce(df, args.workers)
    else:
        graph = dfg_shift_count(df, assume_sorted=False)
    text = dfg_to_dot(graph) if args.out == "dot" else dfg_to_edge_csv(graph)
    _write_text(args.output, text)
    return 0


def _cmd_gen(args) -> int:
    spec = GenSpec(
        num_cases=args.cases,
        num_activities=args.activities,
        mean_case_length=args.mean_length,
        seed=args.seed,
        model=args.model,
    )
    df = generate(spec)
    written = write_edf_file(df, args.output, _COMPRESSION[args.compress])
    print(f"wrote {args.output}: {df.row_count} events, {written} bytes", file=sys.stderr)
    return 0


def _cmd_bench(args) -> int:
    if args.repeat < MIN_REPEAT:
        raise _UsageError(f"--repeat must be at least {MIN_REPEAT}")
    report = bench(args.input, columns_mode=args.columns, repeat=args.repeat)
    print(BENCH_CSV_HEADER)
    print(report.as_csv_row())
    print(report.as_text(), file=sys.stderr)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="eventframe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_case_act(p):
        p.add_argument("--case-col", default="case", help="case column name (CSV input)")
        p.add_argument("--act-col", default="activity", help="activity column name (CSV input)")

    p = sub.add_parser("convert", help="convert CSV to EDF or EDF to CSV")
    p.add_argument("input")
    p.add_argument("output")
    add_case_act(p)
    p.add_argument("--time-col", default=None, help="timestamp column to parse (CSV input)")
    p.add_argument(
        "--sort-by-time",
        action="store_true",
        help="stable-sort rows by the timestamp column after ingestion (off by default)",
    )
    p.add_argument("--compress", choices=sorted(_COMPRESSION), default="deflate")
    p.add_argument("--columns", default=None, help="comma-separated subset for EDF-to-CSV")
    p.set_defaults(handler=_cmd_convert)

    p = sub.add_parser("info", help="print events,cases,variants,classes")
    p.add_argument("input")
    add_case_act(p)
    p.set_defaults(handler=_cmd_info)

    p = sub.add_parser("filter", help="keep events or whole cases by attribute values")
    p.add_argument("input")
    p.add_argument("output", help="output path (.csv writes CSV, anything else EDF)")
    add_case_act(p)
    p.add_argument("--attr", default=None, help="attribute to filter on")
    p.add_argument("--values", default=None, help="comma-separated values to keep")
    p.add_argument("--keep-top-activity", action="store_true", help="keep the most frequent activity")
    p.add_argument("--level", choices=("event", "case"), default="event")
    p.add_argument("--compress", choices=sorted(_COMPRESSION), default="deflate")
    p.set_defaults(handler=_cmd_filter)

    p = sub.add_parser("dfg", help="compute the directly-follows graph")
    p.add_argument("input")
    add_case_act(p)
    p.add_argument("--algo", choices=("iterate", "mapreduce", "shift"), default="shift")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", choices=("dot", "csv"), default="dot")
    p.add_argument("--output", default=None, help="write to this file instead of stdout")
    p.set_defaults(handler=_cmd_dfg)

    p = sub.add_parser("gen", help="generate a synthetic log as an EDF file")
    p.add_argument("output")
    p.add_argument("--cases", type=int, required=True)
    p.add_argument("--activities", type=int, default=10)
    p.add_argument("--mean-length", type=float, default=7.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=MODELS, default="uniform_random")
    p.add_argument("--compress", choices=sorted(_COMPRESSION), default="deflate")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("bench", help="measure load/filter/DFG times on an EDF file")
    p.add_argument("input")
    p.add_argument("--columns", choices=COLUMNS_MODES, default="all")
    p.add_argument("--repeat", type=int, default=MIN_REPEAT)
    p.set_defaults(handler=_cmd_bench)

    return parser


def cli(argv: list[str] | None = None) -> int:
    """Run one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help and friends
        return 0 if exc.code in (0, None) else 1

    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EngineError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        name = getattr(exc, "filename", None)
        print(f"i/o error on {name or 'stream'}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
