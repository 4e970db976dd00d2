"""Shared exception types."""


class MatchkitError(Exception):
    """Base class for all toolkit errors."""


class EmptyInputError(MatchkitError):
    """An operation received an empty set or zero subspace."""


class SizeMismatchError(MatchkitError):
    """Paired inputs must have equal cardinality or dimension."""


class ScaleExceededError(MatchkitError):
    """The instance is beyond the configured exhaustive-enumeration budget."""


class NotUnmatchableError(MatchkitError):
    """A witness extractor was called on a matched pair."""


class ParseError(MatchkitError):
    """An instance literal failed to parse."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position
