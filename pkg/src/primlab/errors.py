class PrimlabError(Exception):
    """Base class for library errors."""


class InvalidArgument(PrimlabError, ValueError):
    pass


class DomainError(PrimlabError, ValueError):
    pass


class PreconditionError(PrimlabError, ValueError):
    pass


class ResourceLimitError(PrimlabError):
    pass


class ConvergenceError(PrimlabError):
    """Raised when a series or quadrature misses its tolerance.

    ``partial`` carries the best value obtained before giving up.
    """

    def __init__(self, message, partial=None, error=None):
        super().__init__(message)
        self.partial = partial
        self.error = error
