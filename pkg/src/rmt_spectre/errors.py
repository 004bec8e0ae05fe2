"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: InputError -> 2,
NumericalError -> 3 (usage errors exit 1).
"""


class SpectreError(Exception):
    """Base class for all errors raised by rmt_spectre."""


class InputError(SpectreError):
    """Unreadable, malformed, or out-of-contract input data."""


class NumericalError(SpectreError):
    """A numerical routine failed to converge or produced an
    out-of-range result that indicates a broken computation."""
