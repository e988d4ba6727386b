"""Exceptions shared across the package.

Two failure classes matter to callers: bad input (rejected data, out of
domain) and internal inconsistency (an identity that is guaranteed to hold
failed on valid input).  The CLI maps them to exit codes 2 and 3.
"""


class InputError(ValueError):
    """Malformed or out-of-domain input (bad JSON, degenerate configuration, ...)."""


class InconsistencyError(RuntimeError):
    """A mathematically guaranteed identity failed; indicates a bug, never bad input."""
