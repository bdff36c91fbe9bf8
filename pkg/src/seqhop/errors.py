"""Exception types raised across the package."""


class SeqhopError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(SeqhopError):
    """Vector or store dimensions do not match the operation's contract."""


class ZeroNormError(SeqhopError):
    """A zero vector cannot be normalized to a fixed norm."""


class ParamError(SeqhopError):
    """A hyperparameter or argument is outside its valid range."""


class DegenerateWeightsError(SeqhopError):
    """All kernel weights vanished; log-sum-exp is undefined."""


class EmptyInputError(SeqhopError):
    """An operation received an empty sequence where at least one item is required."""


class ShapeMismatchError(SeqhopError):
    """Frames in a sequence do not share a single shape."""


class NoCrossingError(SeqhopError):
    """No fixed-point crossing found inside the search bracket."""


class ConfigError(SeqhopError):
    """A run configuration is invalid (bad window, unknown key, bad value)."""


class FormatError(SeqhopError):
    """A file does not conform to its binary format.

    ``offset`` is the byte position at which decoding failed, when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class NumericsError(SeqhopError):
    """A non-finite value appeared during iteration.

    ``iteration`` is the minimizer iteration at which it appeared;
    ``frame`` is the sequence index, when the failure happened inside
    the sequential retrieval driver.
    """

    def __init__(self, message: str, iteration: int | None = None, frame: int | None = None):
        parts = [message]
        if iteration is not None:
            parts.append(f"iteration {iteration}")
        if frame is not None:
            parts.append(f"frame {frame}")
        super().__init__(", ".join(parts))
        self.iteration = iteration
        self.frame = frame
