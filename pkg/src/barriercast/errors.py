"""Exception types shared across the package."""


class BarrierCastError(Exception):
    """Base class for all package errors."""


class ParameterError(BarrierCastError, ValueError):
    """An argument is outside its allowed domain (even barrier size, bad step...)."""


class PreconditionError(BarrierCastError, ValueError):
    """An operation was called on a state it does not accept.

    Estimators raise this when the inner point is on an edge pixel or outside
    the image, which a tracker interprets as having lost the object.
    """


class SceneError(BarrierCastError, ValueError):
    """Invalid scene or degradation description."""

    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"{message} (index {index})")
        self.index = index


class PBMFormatError(BarrierCastError, ValueError):
    """Malformed PBM data; ``offset`` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset
