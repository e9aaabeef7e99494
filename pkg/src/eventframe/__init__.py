"""eventframe: columnar event-log engine with DFG discovery and EDF1 storage."""

from .errors import (
    BadMagic,
    CorruptDirectory,
    DuplicateIndex,
    EmptySuffix,
    EngineError,
    LengthMismatch,
    MalformedCsv,
    MissingMandatory,
    NameCollision,
    RowOutOfRange,
    SeparatorCollision,
    SharedEvent,
    TypeViolation,
    UnknownAttribute,
    UnsupportedVersion,
)
from .frame import (
    MISSING,
    AttrValue,
    Column,
    ColumnType,
    Dataframe,
    ValueTag,
    fval,
    infer_column_type,
    ival,
    render_value,
    sort_key,
    sval,
    tsval,
)
from .transforms import RowPredicate, concat, eq_proj, group, mergstrv, proj, shift, sort
from .eventlog import (
    Event,
    EventLog,
    LogStats,
    dataframe_to_log,
    ingest_csv,
    log_to_dataframe,
    most_frequent_activity,
    parse_timestamp_text,
    stats,
)
from .dfg import (
    DfgGraph,
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
    EdfColumnMeta,
    EdfHeader,
    csv_to_edf,
    io_counters,
    peek_header,
    read_edf,
    read_edf_file,
    write_edf,
    write_edf_file,
)
from .generator import GenSpec, generate
from .bench import BenchReport, bench, fit_loglog_exponent

__version__ = "0.1.0"

__all__ = [
    "AttrValue",
    "BadMagic",
    "BenchReport",
    "Column",
    "ColumnType",
    "CorruptDirectory",
    "Dataframe",
    "DfgGraph",
    "DuplicateIndex",
    "EmptySuffix",
    "EngineError",
    "Event",
    "EventLog",
    "GenSpec",
    "LengthMismatch",
    "LogStats",
    "MISSING",
    "MalformedCsv",
    "MissingMandatory",
    "NameCollision",
    "RowOutOfRange",
    "RowPredicate",
    "SeparatorCollision",
    "SharedEvent",
    "TypeViolation",
    "UnknownAttribute",
    "UnsupportedVersion",
    "ValueTag",
    "bench",
    "concat",
    "COMPRESS_DEFLATE",
    "COMPRESS_NONE",
    "csv_to_edf",
    "dataframe_to_log",
    "dfg_iterate",
    "dfg_mapreduce",
    "dfg_shift_count",
    "dfg_to_dot",
    "dfg_to_edge_csv",
    "EdfColumnMeta",
    "EdfHeader",
    "eq_proj",
    "filter_cases",
    "filter_events",
    "fit_loglog_exponent",
    "fval",
    "generate",
    "group",
    "infer_column_type",
    "ingest_csv",
    "io_counters",
    "ival",
    "log_to_dataframe",
    "mergstrv",
    "most_frequent_activity",
    "parse_timestamp_text",
    "peek_header",
    "proj",
    "read_edf",
    "read_edf_file",
    "render_value",
    "shift",
    "sort",
    "sort_key",
    "stats",
    "sval",
    "tsval",
    "write_edf",
    "write_edf_file",
]
