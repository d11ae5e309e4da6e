"""Exception types shared across the package.

The CLI maps these onto exit codes: ``PreconditionError`` -> 2,
``SizeLimitError`` and ``DyadicOverflowError`` -> 3.
"""


class PreconditionError(ValueError):
    """An input violates a documented precondition."""


class SizeLimitError(RuntimeError):
    """A contraction would exceed the configured dimension limit."""


class DyadicOverflowError(OverflowError):
    """Exact dyadic arithmetic left the 64-bit range."""
