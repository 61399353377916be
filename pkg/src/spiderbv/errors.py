class EmptyInputError(ValueError):
    """Raised when an index is built over a zero-length bit vector."""


class EmptySelectError(ValueError):
    """Raised for a select query on a vector without any 1 bits."""


class FormatError(ValueError):
    """Malformed or unsupported file contents."""


class InvariantError(RuntimeError):
    """Internal consistency check failed; indicates corrupt metadata or a bug."""
