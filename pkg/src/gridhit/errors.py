"""Exception types shared across the package."""


class GridHitError(Exception):
    """Base class for all package-specific errors."""


class EmptyObjectError(GridHitError):
    """An object contains no grid point, so it can never be hit."""


class FatnessViolation(GridHitError):
    """An object's enclosing/inscribed width ratio exceeds the declared bound."""


class GridBoundsError(GridHitError):
    """An object does not lie inside the open grid cube."""


class ProtocolError(GridHitError):
    """An online-game participant broke the rules of the game."""


class InstanceFormatError(GridHitError):
    """An instance or transcript file failed to parse or validate."""


class InvariantViolation(GridHitError):
    """An internal invariant that should be unbreakable was observed broken."""
