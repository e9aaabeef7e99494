"""EDF1: a bit-exact columnar container with selective column loading.

File layout (all integers little-endian):

    magic        4 bytes  ASCII "EDF1"
    version      u16      currently 1
    row_count    u64
    column_count u32
    directory    column_count entries:
        name_len            u16
        name                UTF-8 bytes
        type_code           u8   0=str 1=int 2=float 3=timestamp 4=object
        compression_code    u8   0=none 1=deflate
        offset              u64  absolute file position of the column block
        compressed_length   u64
        uncompressed_length u64
    case_column_ordinal     u32
    activity_column_ordinal u32
    column blocks, in directory order, immediately after the header

A column block, before compression, is a presence bitmap of ceil(rows/8)
bytes (bit b of byte k marks row 8k+b, LSB first) followed by the present
values in row order: int/timestamp as 8-byte two's complement, float as
8-byte IEEE-754, text as u32 byte length plus UTF-8, object values as one
tag byte (same codes as column types) plus the tagged encoding. The row
index is not stored; files always read back with index 0..rows-1.

"deflate" is the zlib stream format (RFC 1950) at the default level, which
keeps serialization deterministic.
"""

from __future__ import annotations

import io
import struct
import zlib
from dataclasses import dataclass
from typing import BinaryIO

from .errors import (
    BadMagic,
    CorruptDirectory,
    UnknownAttribute,
    UnsupportedVersion,
)
from .frame import (
    AttrValue,
    Column,
    ColumnType,
    Dataframe,
    MISSING,
    ValueTag,
)

MAGIC = b"EDF1"
FORMAT_VERSION = 1
COMPRESS_NONE = 0
COMPRESS_DEFLATE = 1

_PRELUDE = struct.Struct("<4sHQI")
_DIR_ENTRY_TAIL = struct.Struct("<BBQQQ")
_ORDINALS = struct.Struct("<II")
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")
_PACK_CHUNK = 16384


@dataclass
class IoCounters:
    """Byte accounting for selective loading, accumulated across reads."""

    compressed_bytes_in: int = 0
    raw_bytes_out: int = 0

    def reset(self) -> None:
        self.compressed_bytes_in = 0
        self.raw_bytes_out = 0


io_counters = IoCounters()


@dataclass(frozen=True, slots=True)
class EdfColumnMeta:
    name: str
    type_code: int
    compression_code: int
    offset: int
    compressed_length: int
    uncompressed_length: int


@dataclass(frozen=True, slots=True)
class EdfHeader:
    magic: bytes
    version: int
    row_count: int
    column_count: int
    directory: tuple[EdfColumnMeta, ...]
    case_column_ordinal: int
    activity_column_ordinal: int

    @property
    def case_column(self) -> str:
        return self.directory[self.case_column_ordinal].name

    @property
    def activity_column(self) -> str:
        return self.directory[self.activity_column_ordinal].name


# -- encoding ----------------------------------------------------------------


def _encode_fixed_q(payloads: list[int]) -> bytes:
    parts = []
    for i in range(0, len(payloads), _PACK_CHUNK):
        chunk = payloads[i : i + _PACK_CHUNK]
        parts.append(struct.pack(f"<{len(chunk)}q", *chunk))
    return b"".join(parts)


def _encode_fixed_d(payloads: list[float]) -> bytes:
    parts = []
    for i in range(0, len(payloads), _PACK_CHUNK):
        chunk = payloads[i : i + _PACK_CHUNK]
        parts.append(struct.pack(f"<{len(chunk)}d", *chunk))
    return b"".join(parts)


def _encode_object_value(value: AttrValue, out: bytearray) -> None:
    tag = value.tag
    out.append(tag.value)
    if tag is ValueTag.STR:
        encoded = value.payload.encode("utf-8")
        out += _U32.pack(len(encoded))
        out += encoded
    elif tag is ValueTag.FLOAT:
        out += struct.pack("<d", value.payload)
    else:  # INT or TIMESTAMP
        out += struct.pack("<q", value.payload)


def _encode_block(col: Column, row_count: int) -> bytes:
    """Presence bitmap plus present values, per the module format doc."""
    bitmap = bytearray((row_count + 7) // 8)
    values = col.values
    present: list[AttrValue] = []
    for p, value in enumerate(values):
        if value.tag is not ValueTag.MISSING:
            bitmap[p >> 3] |= 1 << (p & 7)
            present.append(value)

    ctype = col.ctype
    if ctype in (ColumnType.INT, ColumnType.TIMESTAMP):
        body = _encode_fixed_q([v.payload for v in present])
    elif ctype is ColumnType.FLOAT:
        body = _encode_fixed_d([v.payload for v in present])
    elif ctype is ColumnType.STR:
        buf = bytearray()
        pack_len = _U32.pack
        for v in present:
            encoded = v.payload.encode("utf-8")
            buf += pack_len(len(encoded))
            buf += encoded
        body = bytes(buf)
    else:  # OBJECT
        buf = bytearray()
        for v in present:
            _encode_object_value(v, buf)
        body = bytes(buf)
    return bytes(bitmap) + body


def write_edf(df: Dataframe, compression: int = COMPRESS_NONE) -> bytes:
    """Serialize a frame. The same frame always yields identical bytes."""
    if compression not in (COMPRESS_NONE, COMPRESS_DEFLATE):
        raise ValueError(f"unknown compression code {compression}")
    names = df.column_names
    row_count = df.row_count

    blocks: list[bytes] = []
    raw_lengths: list[int] = []
    for name in names:
        raw = _encode_block(df.column(name), row_count)
        raw_lengths.append(len(raw))
        blocks.append(zlib.compress(raw) if compression == COMPRESS_DEFLATE else raw)

    encoded_names = [name.encode("utf-8") for name in names]
    header_size = (
        _PRELUDE.size
        + sum(_U16.size + len(e) + _DIR_ENTRY_TAIL.size for e in encoded_names)
        + _ORDINALS.size
    )

    out = bytearray()
    out += _PRELUDE.pack(MAGIC, FORMAT_VERSION, row_count, len(names))
    offset = header_size
    for encoded, block, raw_len in zip(encoded_names, blocks, raw_lengths):
        out += _U16.pack(len(encoded))
        out += encoded
        name = encoded.decode("utf-8")
        out += _DIR_ENTRY_TAIL.pack(
            df.column_type(name).value,
            compression,
            offset,
            len(block),
            raw_len,
        )
        offset += len(block)
    out += _ORDINALS.pack(names.index(df.case_column), names.index(df.activity_column))
    for block in blocks:
        out += block
    return bytes(out)


def write_edf_file(df: Dataframe, path: str, compression: int = COMPRESS_NONE) -> int:
    """Serialize to a file; returns the byte count written."""
    data = write_edf(df, compression)
    with open(path, "wb") as handle:
        handle.write(data)
    return len(data)


# -- decoding ----------------------------------------------------------------


class _ByteSource:
    """Random access over bytes or a seekable binary stream."""

    def __init__(self, source: bytes | BinaryIO):
        if isinstance(source, (bytes, bytearray, memoryview)):
            self._data: bytes | None = bytes(source)
            self._stream: BinaryIO | None = None
            self.size = len(self._data)
        elif source.seekable():
            self._data = None
            self._stream = source
            source.seek(0, io.SEEK_END)
            self.size = source.tell()
        else:
            data = source.read()
            self._data = data
            self._stream = None
            self.size = len(data)

    def read_at(self, offset: int, length: int) -> bytes:
        if self._data is not None:
            chunk = self._data[offset : offset + length]
        else:
            self._stream.seek(offset)
            chunk = self._stream.read(length)
        if len(chunk) != length:
            raise CorruptDirectory(
                f"short read: wanted {length} bytes at offset {offset}, got {len(chunk)}"
            )
        return chunk


def _parse_header(src: _ByteSource) -> tuple[EdfHeader, int]:
    if src.size < _PRELUDE.size:
        if src.size < len(MAGIC) or src.read_at(0, len(MAGIC)) != MAGIC:
            raise BadMagic("input does not start with the EDF1 magic")
        raise CorruptDirectory("truncated header")
    magic, version, row_count, column_count = _PRELUDE.unpack(src.read_at(0, _PRELUDE.size))
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"version {version} not supported (expected {FORMAT_VERSION})")

    pos = _PRELUDE.size
    entries: list[EdfColumnMeta] = []
    for _ in range(column_count):
        try:
            (name_len,) = _U16.unpack(src.read_at(pos, _U16.size))
            pos += _U16.size
            name = src.read_at(pos, name_len).decode("utf-8")
            pos += name_len
            type_code, comp_code, offset, comp_len, uncomp_len = _DIR_ENTRY_TAIL.unpack(
                src.read_at(pos, _DIR_ENTRY_TAIL.size)
            )
            pos += _DIR_ENTRY_TAIL.size
        except CorruptDirectory:
            raise CorruptDirectory("truncated column directory") from None
        entries.append(
            EdfColumnMeta(name, type_code, comp_code, offset, comp_len, uncomp_len)
        )
    try:
        case_ord, act_ord = _ORDINALS.unpack(src.read_at(pos, _ORDINALS.size))
    except CorruptDirectory:
        raise CorruptDirectory("truncated header ordinals") from None
    pos += _ORDINALS.size

    header = EdfHeader(
        magic=magic,
        version=version,
        row_count=row_count,
        column_count=column_count,
        directory=tuple(entries),
        case_column_ordinal=case_ord,
        activity_column_ordinal=act_ord,
    )
    _validate_directory(header, header_end=pos, file_size=src.size)
    return header, pos


def _validate_directory(header: EdfHeader, header_end: int, file_size: int) -> None:
    if header.case_column_ordinal >= header.column_count:
        raise CorruptDirectory("case column ordinal out of range")
    if header.activity_column_ordinal >= header.column_count:
        raise CorruptDirectory("activity column ordinal out of range")
    names = [meta.name for meta in header.directory]
    if len(set(names)) != len(names):
        raise CorruptDirectory("duplicate column names in directory")
    spans = []
    for meta in header.directory:
        if meta.type_code not in range(5):
            raise CorruptDirectory(f"column {meta.name!r}: unknown type code {meta.type_code}")
        if meta.compression_code not in (COMPRESS_NONE, COMPRESS_DEFLATE):
            raise CorruptDirectory(
                f"column {meta.name!r}: unknown compression code {meta.compression_code}"
            )
        if meta.offset < header_end:
            raise CorruptDirectory(f"column {meta.name!r}: data region overlaps the header")
        if meta.offset + meta.compressed_length > file_size:
            raise CorruptDirectory(f"column {meta.name!r}: data region beyond end of file")
        spans.append((meta.offset, meta.offset + meta.compressed_length, meta.name))
    spans.sort()
    for (_, end_a, name_a), (start_b, _, name_b) in zip(spans, spans[1:]):
        if end_a > start_b:
            raise CorruptDirectory(f"columns {name_a!r} and {name_b!r} overlap")


def _decode_block(meta: EdfColumnMeta, raw: bytes, row_count: int) -> Column:
    bitmap_len = (row_count + 7) // 8
    if len(raw) != meta.uncompressed_length:
        raise CorruptDirectory(
            f"column {meta.name!r}: declared {meta.uncompressed_length} raw bytes, got {len(raw)}"
        )
    if len(raw) < bitmap_len:
        raise CorruptDirectory(f"column {meta.name!r}: block smaller than its presence bitmap")
    bitmap = raw[:bitmap_len]
    body = raw[bitmap_len:]
    present_count = sum(bin(b).count("1") for b in bitmap)

    ctype = ColumnType(meta.type_code)
    present: list[AttrValue]
    if ctype in (ColumnType.INT, ColumnType.TIMESTAMP):
        if len(body) != 8 * present_count:
            raise CorruptDirectory(f"column {meta.name!r}: fixed-width body length mismatch")
        tag = ValueTag.INT if ctype is ColumnType.INT else ValueTag.TIMESTAMP
        present = [AttrValue(tag, v) for v in struct.unpack(f"<{present_count}q", body)]
    elif ctype is ColumnType.FLOAT:
        if len(body) != 8 * present_count:
            raise CorruptDirectory(f"column {meta.name!r}: fixed-width body length mismatch")
        present = [AttrValue(ValueTag.FLOAT, v) for v in struct.unpack(f"<{present_count}d", body)]
    elif ctype is ColumnType.STR:
        present = _decode_str_body(body, present_count, meta.name)
    else:
        present = _decode_object_body(body, present_count, meta.name)

    if present_count == row_count:
        values = present
    else:
        values = []
        it = iter(present)
        for p in range(row_count):
            if bitmap[p >> 3] & (1 << (p & 7)):
                values.append(next(it))
            else:
                values.append(MISSING)
    return Column(ctype, values)


def _decode_str_body(body: bytes, count: int, name: str) -> list[AttrValue]:
    values: list[AttrValue] = []
    interned: dict[str, AttrValue] = {}
    pos = 0
    end = len(body)
    unpack_len = _U32.unpack_from
    for _ in range(count):
        if pos + 4 > end:
            raise CorruptDirectory(f"column {name!r}: text block truncated")
        (length,) = unpack_len(body, pos)
        pos += 4
        if pos + length > end:
            raise CorruptDirectory(f"column {name!r}: text value overruns block")
        text = body[pos : pos + length].decode("utf-8")
        pos += length
        value = interned.get(text)
        if value is None:
            value = AttrValue(ValueTag.STR, text)
            interned[text] = value
        values.append(value)
    if pos != end:
        raise CorruptDirectory(f"column {name!r}: {end - pos} trailing bytes in block")
    return values


def _decode_object_body(body: bytes, count: int, name: str) -> list[AttrValue]:
    values: list[AttrValue] = []
    pos = 0
    end = len(body)
    for _ in range(count):
        if pos + 1 > end:
            raise CorruptDirectory(f"column {name!r}: object block truncated")
        tag_code = body[pos]
        pos += 1
        if tag_code == ValueTag.STR.value:
            if pos + 4 > end:
                raise CorruptDirectory(f"column {name!r}: object text truncated")
            (length,) = _U32.unpack_from(body, pos)
            pos += 4
            if pos + length > end:
                raise CorruptDirectory(f"column {name!r}: object text overruns block")
            values.append(AttrValue(ValueTag.STR, body[pos : pos + length].decode("utf-8")))
            pos += length
        elif tag_code == ValueTag.FLOAT.value:
            if pos + 8 > end:
                raise CorruptDirectory(f"column {name!r}: object float truncated")
            values.append(AttrValue(ValueTag.FLOAT, struct.unpack_from("<d", body, pos)[0]))
            pos += 8
        elif tag_code in (ValueTag.INT.value, ValueTag.TIMESTAMP.value):
            if pos + 8 > end:
                raise CorruptDirectory(f"column {name!r}: object integer truncated")
            values.append(
                AttrValue(ValueTag(tag_code), struct.unpack_from("<q", body, pos)[0])
            )
            pos += 8
        else:
            raise CorruptDirectory(f"column {name!r}: unknown object tag {tag_code}")
    if pos != end:
        raise CorruptDirectory(f"column {name!r}: {end - pos} trailing bytes in block")
    return values


def peek_header(source: bytes | BinaryIO) -> EdfHeader:
    """Parse and validate the header without decoding any column."""
    header, _ = _parse_header(_ByteSource(source))
    return header


def read_edf(source: bytes | BinaryIO, columns: set[str] | None = None) -> Dataframe:
    """Load a frame, decoding only the requested columns.

    The case and activity columns are always included. With a seekable
    source, the bytes of unrequested columns are never read. The returned
    frame's index is 0..row_count-1.
    """
    src = _ByteSource(source)
    header, _ = _parse_header(src)

    wanted: set[str] | None = None
    if columns is not None:
        available = {meta.name for meta in header.directory}
        unknown = set(columns) - available
        if unknown:
            raise UnknownAttribute(f"requested columns not in file: {sorted(unknown)}")
        wanted = set(columns) | {header.case_column, header.activity_column}

    loaded: dict[str, Column] = {}
    for meta in header.directory:
        if wanted is not None and meta.name not in wanted:
            continue
        compressed = src.read_at(meta.offset, meta.compressed_length)
        if meta.compression_code == COMPRESS_DEFLATE:
            try:
                raw = zlib.decompress(compressed)
            except zlib.error as exc:
                raise CorruptDirectory(f"column {meta.name!r}: deflate failure: {exc}") from None
        else:
            raw = compressed
        io_counters.compressed_bytes_in += meta.compressed_length
        io_counters.raw_bytes_out += len(raw)
        loaded[meta.name] = _decode_block(meta, raw, header.row_count)

    return Dataframe._unchecked(
        list(range(header.row_count)),
        loaded,
        header.case_column,
        header.activity_column,
    )


def read_edf_file(path: str, columns: set[str] | None = None) -> Dataframe:
    """Load a frame from a file path (seekable, so only needed bytes are read)."""
    with open(path, "rb") as handle:
        return read_edf(handle, columns)


def csv_to_edf(
    source: bytes | BinaryIO | str,
    case_column: str,
    activity_column: str,
    timestamp_column: str | None = None,
    type_hints=None,
    compression: int = COMPRESS_NONE,
) -> bytes:
    """Ingest CSV and serialize the resulting frame in one step."""
    from .eventlog import ingest_csv

    df = ingest_csv(
        source,
        case_column=case_column,
        activity_column=activity_column,
        timestamp_column=timestamp_column,
        type_hints=type_hints,
    )
    return write_edf(df, compression)
