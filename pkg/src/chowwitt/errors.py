"""Exception hierarchy shared by every module of the engine."""

from __future__ import annotations


class ChowWittError(Exception):
    """Base class for all engine errors."""


class UnsupportedField(ChowWittError):
    pass


class DegreeBoundExceeded(ChowWittError):
    pass


class InvalidCorrespondence(ChowWittError):
    pass


class TwistMismatch(ChowWittError):
    pass


class NoRepresentative(ChowWittError):
    pass


class InjectivityUnknown(ChowWittError):
    pass


class OutOfScope(ChowWittError):
    pass


class TailUnknown(ChowWittError):
    pass


class UnknownCase(ChowWittError):
    pass


class ParamError(ChowWittError):
    pass


class ArityError(ChowWittError):
    pass


class SpaceSyntaxError(ChowWittError):
    """Malformed space expression; carries the offending column."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
