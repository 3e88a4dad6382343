"""Exception hierarchy shared by the codes, channel and harness packages."""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .channel.adversary import ChannelTranscript


class AwtpError(Exception):
    """Base class for every error raised by this package."""


class ParamError(AwtpError, ValueError):
    """A parameter set violates one of its construction constraints."""


class InfeasibleError(ParamError):
    """The parameters leave no decodable regime (for example k > uN)."""


class ScaleError(ParamError):
    """An exhaustive enumeration would exceed its configured cap."""


class ConfigError(ParamError):
    """An experiment or settings file could not be loaded."""


class FieldError(AwtpError, ArithmeticError):
    """Arithmetic failure inside a finite field."""


class ZeroInverse(FieldError, ZeroDivisionError):
    pass


class ContextMismatch(FieldError):
    """Operands belong to different fields."""


class LengthMismatch(AwtpError, ValueError):
    pass


class DimensionError(AwtpError, ValueError):
    pass


class DecodeError(AwtpError):
    """Raised inside the decoding pipeline; the codec maps it to ⊥."""


class InternalError(DecodeError):
    """A guarantee that holds by construction was observed to fail."""


class DegenerateError(DecodeError):
    pass


class ChannelError(AwtpError):
    """An adversary strategy broke the channel contract."""

    def __init__(self, message: str, transcript: Optional["ChannelTranscript"] = None):
        super().__init__(message)
        self.transcript = transcript


class BudgetViolation(ChannelError):
    pass


class ZeroDelta(ChannelError):
    pass


class DuplicateWrite(ChannelError):
    pass
