"""Exception types shared across the package."""


class DcnFlowError(Exception):
    """Base class for errors raised by this package."""


class CapacityError(DcnFlowError):
    """A requested topology exceeds the configured node budget."""


class EdgeListError(DcnFlowError):
    """An edge-list file is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RoutingDomainError(DcnFlowError):
    """A router was invoked outside its domain (wrong family, faults, pair)."""


class IncompatibleRouterError(DcnFlowError):
    """Router and topology family do not match."""
