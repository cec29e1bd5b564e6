"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific type that applies.
"""


class PrepostError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(PrepostError, ValueError):
    """Operands live in Hilbert spaces of different dimension."""


class ImpossiblePostSelectionError(PrepostError, ValueError):
    """Every history amplitude vanishes: the post-selection has no support."""


class EnumerationCapError(PrepostError, RuntimeError):
    """The outcome-tuple count exceeds the configured enumeration cap."""


class EmptyBranchError(PrepostError, ValueError):
    """A projection annihilates the state it is applied to."""


class ConfigError(PrepostError, ValueError):
    """A scenario file failed to parse or validate."""
