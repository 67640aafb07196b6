"""Exception types shared across the package."""


class WhlabError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(WhlabError, ValueError):
    """A caller-supplied value violates a documented precondition."""


class EmptyWordError(InvalidInputError):
    """An operation that needs a nonempty cyclic word was given the empty word."""


class DataFormatError(WhlabError):
    """A corpus, model or trace file is malformed."""


class OrbitSearchError(WhlabError):
    """The brute-force orbit search exceeded its length cap or node budget."""
