"""Error types raised by configuration parsing and the numerical solvers."""


class ConfigError(ValueError):
    """Invalid, inconsistent, or unknown configuration input."""


class DegenerateAllocationError(ArithmeticError):
    """The allocated combination of subchannels has (numerically) zero norm."""


class ZeroGainPathError(ArithmeticError):
    """A path with zero complex gain was assigned nonzero allocated power."""


class DegenerateClipError(ArithmeticError):
    """Nonnegativity clipping of a solver iterate produced the zero vector."""
