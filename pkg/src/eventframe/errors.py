"""Exception hierarchy shared by all eventframe modules."""


class EngineError(Exception):
    """Base class for every error raised by eventframe."""


class LengthMismatch(EngineError):
    """Column value sequences (or the index) disagree in length."""


class DuplicateIndex(EngineError):
    """Index entries are not pairwise distinct."""


class MissingMandatory(EngineError):
    """Case or activity column absent, or holds a missing value."""


class TypeViolation(EngineError):
    """A value does not conform to its declared column type or payload rules."""


class UnknownAttribute(EngineError):
    """Referenced attribute name is not a column of the frame."""


class RowOutOfRange(EngineError):
    """Row position outside [0, row_count)."""


class NameCollision(EngineError):
    """A new column name collides with an existing one."""


class EmptySuffix(EngineError):
    """Concatenation suffix must be non-empty."""


class SharedEvent(EngineError):
    """An event belongs to more than one case."""


class MalformedCsv(EngineError):
    """CSV input violates RFC-4180 (ragged rows, bad quoting, no header)."""


class SeparatorCollision(EngineError):
    """An activity name contains the pair separator in strict counting mode."""


class BadMagic(EngineError):
    """Input bytes do not start with the EDF1 magic."""


class UnsupportedVersion(EngineError):
    """EDF file version not handled by this reader."""


class CorruptDirectory(EngineError):
    """EDF column directory is inconsistent, out of range, or truncated."""
