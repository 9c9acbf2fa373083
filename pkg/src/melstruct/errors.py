"""Exception hierarchy shared by all melstruct modules."""


class MelstructError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MelstructError):
    """Input bytes/text could not be parsed at all.

    ``offset`` is the byte offset of the failure for binary inputs, or None.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnsupportedInputError(MelstructError):
    """Input parsed but is outside the supported subset (e.g. non-4/4 meter)."""


class LabelMismatchError(MelstructError):
    """A phrase label string does not tile the song it belongs to."""
