"""Exception hierarchy shared across the toolkit."""


class MotransError(Exception):
    """Base class for all toolkit errors."""


class ObjParseError(MotransError):
    """Malformed OBJ input. Carries the 1-based line number."""

    def __init__(self, line_number, message):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class MeshValidationError(MotransError):
    """Structurally invalid mesh (e.g. face index out of range)."""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DegenerateGeometryError(MotransError):
    """Geometry too degenerate for the requested operation (zero height etc.)."""


class DegenerateRowError(MotransError):
    """A skinning-weight row collapsed to zero mass. Names the vertex."""

    def __init__(self, vertex, message=None):
        self.vertex = vertex
        super().__init__(message or f"vertex {vertex}: weight row has zero mass")


class ContractError(MotransError):
    """Caller violated an operation precondition (dimension mismatch etc.)."""


class FormatError(MotransError):
    """Malformed JSON artifact (weights, clip, edit command)."""


class DurationLimitError(MotransError):
    """MoCap request exceeds the maximum clip duration."""


class TransportError(MotransError):
    """MoCap endpoint unreachable or returned a server error."""

    def __init__(self, message, attempts=1):
        self.attempts = attempts
        super().__init__(f"{message} (after {attempts} attempt(s))")


class FixtureNotFoundError(MotransError):
    """Mock MoCap client has no fixture for the requested video."""


class StageError(MotransError):
    """Project is not in a stage that allows the requested operation."""
