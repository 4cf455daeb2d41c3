"""Exception types raised by gib_lab."""


class GibLabError(Exception):
    """Base class for all gib_lab errors."""


class GridError(GibLabError, ValueError):
    pass


class NonFiniteError(GibLabError, ValueError):
    """A field contains NaN or inf."""

    def __init__(self, message, index=None, t=None):
        super().__init__(message)
        self.index = index
        self.t = t


class BlowUpError(NonFiniteError):
    """The time integration produced non-finite values."""


class BoundaryTailError(GibLabError, ValueError):
    """A field is not small enough at the edge of the periodic box."""


class AliasingError(GibLabError, RuntimeError):
    """The spectral tail of the solution grew past the aliasing guard."""


class ConfigError(GibLabError, ValueError):
    """Invalid experiment configuration.  ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class PreconditionError(GibLabError, ValueError):
    """Inputs to a diagnostic violate its stated precondition."""
