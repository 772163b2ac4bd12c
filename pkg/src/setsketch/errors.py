class SketchError(Exception):
    """Base class for all errors raised by setsketch."""


class InvalidKey(SketchError, ValueError):
    pass


class InvalidParams(SketchError, ValueError):
    pass


class ParamsMismatch(SketchError, ValueError):
    pass


class BudgetExceeded(SketchError):
    """An exhaustive search would exceed its configured work bound."""


class NonMonotoneBracket(SketchError):
    """Threshold bisection saw success above a failing load (or vice versa)."""


class FrameError(SketchError, ValueError):
    """A serialized sketch frame could not be decoded."""


class BadMagic(FrameError):
    pass


class BadVersion(FrameError):
    pass


class BadCrc(FrameError):
    pass


class TruncatedFrame(FrameError):
    pass


class MalformedFrame(FrameError):
    pass
