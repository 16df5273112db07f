"""Error hierarchy shared by every jointparse module.

Each failure mode named by the toolkit has its own subclass carrying a stable
`code` string so callers (and the CLI exit-code mapping) can branch on it
without parsing messages.
"""
from __future__ import annotations

from typing import Optional


class JointParseError(Exception):
    code = "JOINTPARSE_ERROR"

    def __init__(self, message: str = "") -> None:
        super().__init__(message or self.code)
        self.message = message or self.code

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class InvalidTreeError(JointParseError):
    code = "INVALID_TREE"


class LengthMismatchError(JointParseError):
    code = "LENGTH_MISMATCH"


class IncompatibleTreeError(JointParseError):
    code = "INCOMPATIBLE"


class EmptySentenceError(JointParseError):
    code = "EMPTY_SENTENCE"


class TooLargeError(JointParseError):
    code = "TOO_LARGE"


class StaleTapeError(JointParseError):
    code = "STALE_TAPE"


class UnknownLabelError(JointParseError):
    code = "UNKNOWN_LABEL"


class EmptyCorpusError(JointParseError):
    code = "EMPTY_CORPUS"


class ConfigError(JointParseError):
    code = "CONFIG_ERROR"


class CheckpointError(JointParseError):
    code = "BAD_CHECKPOINT"


class _PositionedError(JointParseError):
    """Error tied to a location in an input file."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class BracketParseError(_PositionedError):
    code = "PARSE_ERROR"


class UnbalancedParensError(_PositionedError):
    code = "UNBALANCED_PARENS"


class BadColumnCountError(_PositionedError):
    code = "BAD_COLUMN_COUNT"


class CycleDetectedError(_PositionedError):
    code = "CYCLE_DETECTED"


class MultiRootError(_PositionedError):
    code = "MULTI_ROOT"


class AlignmentMismatchError(JointParseError):
    code = "ALIGNMENT_MISMATCH"

    def __init__(self, message: str, index: int) -> None:
        self.index = index
        super().__init__(f"{message} (sentence {index})")


__all__ = [
    "JointParseError",
    "InvalidTreeError",
    "LengthMismatchError",
    "IncompatibleTreeError",
    "EmptySentenceError",
    "TooLargeError",
    "StaleTapeError",
    "UnknownLabelError",
    "EmptyCorpusError",
    "ConfigError",
    "CheckpointError",
    "BracketParseError",
    "UnbalancedParensError",
    "BadColumnCountError",
    "CycleDetectedError",
    "MultiRootError",
    "AlignmentMismatchError",
]
