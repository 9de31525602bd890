"""Exception types shared across the package."""


class ForestFormatError(ValueError):
    """Raised when a parent-array file cannot be turned into a forest."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidNodeError(IndexError):
    pass


class BinOverflowError(AssertionError):
    """An interval or sub-bin escaped the bin it was allotted.

    This can only happen if the parameter arithmetic is violated (for
    instance a spine longer than the ``d`` the table was built for).
    """


class DepthBoundError(ValueError):
    """The forest is deeper than the ``d`` supplied for a fixed family."""


class LabelError(ValueError):
    """A label does not belong to the output domain of its codec."""
