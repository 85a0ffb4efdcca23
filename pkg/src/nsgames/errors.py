"""Exception types shared across the package."""


class NsGamesError(Exception):
    """Base class for all package errors."""


class ShapeError(NsGamesError, ValueError):
    """Dimension or alphabet mismatch between two objects."""


class CapacityError(NsGamesError, RuntimeError):
    """An exact computation would exceed its configured desk-scale cap."""


class NoPerfectStrategyError(NsGamesError, RuntimeError):
    """Raised when an optimization is requested over an empty strategy set."""


class InvalidSolutionError(NsGamesError, ValueError):
    """A supplied operator solution or representation fails verification."""


class FormatError(NsGamesError, ValueError):
    """Malformed serialized input (JSON / text formats)."""
