"""Exception types shared across the package."""


class QcmatchError(Exception):
    """Base class for all package errors."""


class GateError(QcmatchError):
    """Unknown gate name, bad arity, or invalid gate construction."""


class ParseError(QcmatchError):
    """Malformed circuit file. Carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapabilityError(QcmatchError):
    """Operation outside the supported envelope (size caps, missing matrix)."""


class StructureError(QcmatchError):
    """Structural precondition violated (e.g. a gate set that is not connected)."""


class InfeasibleError(QcmatchError):
    """Matching instance that cannot have any match (pattern wider than circuit)."""
